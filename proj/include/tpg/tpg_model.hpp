#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tpg/phase_matching.hpp"

namespace tpg {

// Inputs of the coupled-mode flux model. Intensities are peak values in
// W/m^2; chi3 is the relevant third-order susceptibility in m^2/V^2; delta
// scales the collinear mismatch into the effective one; length_m is the
// propagation coordinate at the crystal exit.
struct CouplingInputs {
  double pump_intensity_w_m2 = 0.0;
  double stim_intensity_w_m2 = 0.0;
  double chi3_m2_v2 = 0.0;
  double delta = 2e-7;
  double length_m = 0.0;
  ProcessSpec anchor;
  std::optional<MismatchLinearization> linearization;

  void validate() const;
};

enum class Regime { Weak, Strong, Boundary };

const char* regime_name(Regime r);

// chi3 transported between processes by products of linear susceptibilities
// n^2 - 1, one factor per wave, axes fixed by the yzzy tensor component:
// slots (pump, mode1, mode2, mode3) ride (y, z, z, y).
double miller_chi3(double chi_ref_m2_v2, const std::array<double, 4>& ref_lambdas_m,
                   const std::array<double, 4>& target_lambdas_m,
                   const CrystalDispersion& crystal);

// Frequency prefactor of the flux model,
//   f(w) = [1/(8 pi c^2 eps0)^2] * w (wp - w1 - w)
//          / [n+(w1) n-(w) n+(wp - w1 - w) n-(wp)],
// indices taken per the anchor's polarization tags at the anchor angle.
double coupling_f3(double omega_rad_s, const ProcessSpec& anchor);

// Gain term 4 pi^2 I1 Ip f(w) chi3^2, in m^-2.
double coupling_gain(double omega_rad_s, const CouplingInputs& in);

// delta * delta_k_spectral(w).
double delta_k_eff(double omega_rad_s, const CouplingInputs& in);

// C(w) = gain(w) - delta_k_eff(w)^2 / 4.
double coupling_C3(double omega_rad_s, const CouplingInputs& in);

Regime classify_regime(double c3_m2, double boundary_band_m2);

// Photon-flux spectral density of mode 2 at the crystal exit:
//   2 pi I1 Ip f chi^2 * Z^2 * K(C Z^2)
// where K is the oscillatory (C<0), hyperbolic (C>0) or unit (C->0) kernel.
double flux_density(double omega_rad_s, const CouplingInputs& in);
// Mode 3 via the mirror map n3(w) = n2(wp - w1 - w).
double flux_density_mode3(double omega_rad_s, const CouplingInputs& in);

namespace detail {
// K(x) with x = C Z^2: sinh^2(sqrt(x))/x for x>0, sin^2(sqrt(-x))/(-x) for
// x<0, smoothly 1 + x/3 + ... near zero. flux = (gain/2pi) Z^2 K.
double gain_kernel(double c_times_z2);
}  // namespace detail

struct IntegrationOptions {
  int n_lobes = 50;          // half-window in units of |dk_eff Z| = 2 pi
  int points_per_lobe = 16;  // quadrature samples per lobe
};

struct IntegrationResult {
  double photons_per_pulse = 0.0;
  double truncation_error = 0.0;  // tail estimate from the outermost lobes
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  int lobes_covered = 0;  // per side, after clipping
  bool clipped = false;   // lobe window exceeded the physical domain
};

// Integral of flux_density over the lobe window intersected with the physical
// domain (both mode wavelengths inside the dispersion validity window, both
// frequencies positive). Fixed-order panel quadrature, deterministic
// accumulation. Throws WindowCollapseError when the intersection is empty.
IntegrationResult integrate_flux(const CouplingInputs& in, const IntegrationOptions& opts = {});

// Closed-form weak-coupling yield 4 pi^2 f(wdeg) Ip I1 chi^2 Z / (delta |b|),
// f frozen at the degenerate carrier. Throws RegimeError if any sample of the
// integration window classifies Strong.
double analytic_flux(const CouplingInputs& in);

// Projection of detuned pump/stimulation polarizations onto the phase-matched
// configuration: cos^2(alpha) cos^2(beta).
double polarization_yield(double alpha_rad, double beta_rad);

struct FluxPoint {
  double omega_rad_s = 0.0;
  double density = 0.0;  // photons per pulse per Hz
  Regime regime = Regime::Weak;
};

struct FluxSpectrum {
  std::vector<FluxPoint> samples;
  double omega_lo = 0.0;
  double omega_hi = 0.0;
  int lobe_count = 0;
  int points_per_lobe = 0;
};

FluxSpectrum sample_flux_spectrum(const CouplingInputs& in, int n_samples = 2001,
                                  const IntegrationOptions& opts = {});

std::string flux_spectrum_csv(const FluxSpectrum& spectrum, const nlohmann::json& config);

struct RegimeMapRow {
  double intensity_product_w2_m4 = 0.0;
  double c3_at_degeneracy_m2 = 0.0;
  Regime regime = Regime::Weak;
};

// C(wdeg) versus the pump*stimulation intensity product, scanned by scaling
// both intensities of `in` by factors log-spaced over [scale_lo, scale_hi].
std::vector<RegimeMapRow> regime_map(const CouplingInputs& in, double scale_lo, double scale_hi,
                                     int n_points);

std::string regime_map_csv(const std::vector<RegimeMapRow>& rows, const nlohmann::json& config);

// Intensity product at which C(wdeg) = 0: dk_eff(wdeg)^2 / (16 pi^2 f chi^2).
double regime_threshold_product(const CouplingInputs& in);

}  // namespace tpg
