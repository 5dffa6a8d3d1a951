#pragma once

#include <optional>
#include <vector>

#include "tpg/dispersion.hpp"

namespace tpg {

enum class PolarizationMode { YMode, Inplane };

struct Wave {
  double lambda_m = 0.0;
  PolarizationMode pol = PolarizationMode::YMode;
};

// Four interacting waves, collinear propagation in the xz plane at angle
// theta from the z axis. Immutable once built.
struct ProcessSpec {
  const CrystalDispersion* crystal = nullptr;
  Wave pump, mode1, mode2, mode3;
  double theta_rad = 0.0;

  double energy_residual() const;  // |1/lp - 1/l1 - 1/l2 - 1/l3| * lp
  bool is_energy_conserving(double rel_tol = 1e-12) const {
    return energy_residual() <= rel_tol;
  }
  // Refractive index seen by a wave of the given polarization at lambda.
  double index_for(const Wave& w, double lambda_m) const;

  double omega_pump() const;
  double omega_mode1() const;
  double omega_degenerate() const;  // carrier of mode 2 = 2*pi*c/lambda_2
  ProcessSpec with_modes_swapped() const;
};

// Standard polarization set: pump and mode 2 on the y mode, modes 1 and 3 on
// the in-plane mode; lambda_23 fixed by energy conservation from lambda_1.
ProcessSpec make_degenerate_spec(const CrystalDispersion& crystal, double lambda_p_m,
                                 double lambda_1_m, double theta_rad);

// Collinear mismatch, rad/m:
//   dk = (wp/c) n-(wp) - (w1/c) n+(w1) - (w2/c) n-(w2) - (w3/c) n+(w3)
// with n- / n+ the eigen indices each wave rides per its polarization tag.
double delta_k_collinear(const ProcessSpec& spec);

// Wideband approximation: pump and mode 1 frozen at their carriers, mode 2 at
// omega, mode 3 at wp - w1 - omega.
double delta_k_spectral(double omega_rad_s, const ProcessSpec& anchor);

struct PmRoot {
  double lambda1_m = 0.0;
  double lambda23_m = 0.0;
  double residual_rad_per_m = 0.0;
};

struct PmSolveOptions {
  double bracket_lo_m = 1.2e-6;
  double bracket_hi_m = 2.2e-6;
  double tol_rad_per_m = 1.0;
  int scan_points = 400;
};

// All roots of dk(lambda_1) = 0 in the bracket, sorted by lambda_1; energy
// conservation holds exactly by construction (lambda_23 derived from lambda_1).
// Throws NoRootError when the scan finds no sign change.
std::vector<PmRoot> solve_degenerate_pm(const CrystalDispersion& crystal, double lambda_p_m,
                                        double theta_rad, const PmSolveOptions& opts = {});

struct MismatchLinearization {
  double a_rad_per_m = 0.0;   // intercept
  double b_m1_hz1 = 0.0;      // slope vs omega in rad/s
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  double rms_residual = 0.0;  // rad/m
};

struct LineCoeffs {
  double intercept = 0.0;
  double slope = 0.0;
  double rms_residual = 0.0;
};

// Least squares in a mean-shifted abscissa; safe for x ~ 1e15 with slopes of
// interest ~ 1e-10.
LineCoeffs least_squares_line(const std::vector<double>& x, const std::vector<double>& y);

// Least-squares line a + b*omega through delta_k_spectral samples.
MismatchLinearization linearize(const ProcessSpec& anchor, double omega_lo, double omega_hi,
                                int n_samples = 201);
// Window centered on the degenerate carrier, half-width 2*pi*10 THz.
MismatchLinearization linearize_default(const ProcessSpec& anchor);

struct PmSweepRow {
  double theta_deg = 0.0;
  double lambda1_nm = 0.0;
  double lambda23_nm = 0.0;
  double residual_rad_per_m = 0.0;
};

// One row per (theta sample, root).
std::vector<PmSweepRow> pm_sweep(const CrystalDispersion& crystal, double lambda_p_m,
                                 double theta_lo_deg, double theta_hi_deg, double step_deg,
                                 const PmSolveOptions& opts = {});

std::string pm_sweep_csv(const std::vector<PmSweepRow>& rows, const nlohmann::json& config);

}  // namespace tpg
