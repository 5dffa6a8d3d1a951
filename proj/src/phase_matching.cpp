#include "tpg/phase_matching.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tpg/io.hpp"

namespace tpg {

using units::constants::c;
using units::constants::pi;

double ProcessSpec::energy_residual() const {
  const double lhs = 1.0 / pump.lambda_m;
  const double rhs = 1.0 / mode1.lambda_m + 1.0 / mode2.lambda_m + 1.0 / mode3.lambda_m;
  return std::fabs(lhs - rhs) / lhs;
}

double ProcessSpec::index_for(const Wave& w, double lambda_m) const {
  const EigenIndices e = eigen_indices(*crystal, theta_rad, lambda_m);
  return w.pol == PolarizationMode::YMode ? e.n_y_mode : e.n_inplane_mode;
}

double ProcessSpec::omega_pump() const { return 2.0 * pi * c / pump.lambda_m; }
double ProcessSpec::omega_mode1() const { return 2.0 * pi * c / mode1.lambda_m; }
double ProcessSpec::omega_degenerate() const { return 2.0 * pi * c / mode2.lambda_m; }

ProcessSpec ProcessSpec::with_modes_swapped() const {
  ProcessSpec s = *this;
  std::swap(s.mode2, s.mode3);
  return s;
}

ProcessSpec make_degenerate_spec(const CrystalDispersion& crystal, double lambda_p_m,
                                 double lambda_1_m, double theta_rad) {
  const double inv23 = 0.5 * (1.0 / lambda_p_m - 1.0 / lambda_1_m);
  if (!(inv23 > 0.0)) {
    throw EnergyConservationError("stimulation wavelength leaves no energy for modes 2 and 3");
  }
  const double lambda_23 = 1.0 / inv23;
  ProcessSpec s;
  s.crystal = &crystal;
  s.theta_rad = theta_rad;
  s.pump = {lambda_p_m, PolarizationMode::YMode};
  s.mode1 = {lambda_1_m, PolarizationMode::Inplane};
  s.mode2 = {lambda_23, PolarizationMode::YMode};
  s.mode3 = {lambda_23, PolarizationMode::Inplane};
  return s;
}

double delta_k_collinear(const ProcessSpec& spec) {
  if (!spec.is_energy_conserving()) {
    std::ostringstream os;
    os << "process violates energy conservation (relative residual " << spec.energy_residual()
       << ")";
    throw EnergyConservationError(os.str());
  }
  const double wp = spec.omega_pump();
  const double w1 = spec.omega_mode1();
  const double w2 = 2.0 * pi * c / spec.mode2.lambda_m;
  const double w3 = 2.0 * pi * c / spec.mode3.lambda_m;
  return (wp / c) * spec.index_for(spec.pump, spec.pump.lambda_m) -
         (w1 / c) * spec.index_for(spec.mode1, spec.mode1.lambda_m) -
         (w2 / c) * spec.index_for(spec.mode2, spec.mode2.lambda_m) -
         (w3 / c) * spec.index_for(spec.mode3, spec.mode3.lambda_m);
}

double delta_k_spectral(double omega_rad_s, const ProcessSpec& anchor) {
  const double wp = anchor.omega_pump();
  const double w1 = anchor.omega_mode1();
  const double w3 = wp - w1 - omega_rad_s;
  if (!(omega_rad_s > 0.0) || !(w3 > 0.0)) {
    throw NonPositiveFrequencyError("spectral mismatch requested at non-positive mode frequency");
  }
  const double l2 = 2.0 * pi * c / omega_rad_s;
  const double l3 = 2.0 * pi * c / w3;
  return (wp / c) * anchor.index_for(anchor.pump, anchor.pump.lambda_m) -
         (w1 / c) * anchor.index_for(anchor.mode1, anchor.mode1.lambda_m) -
         (omega_rad_s / c) * anchor.index_for(anchor.mode2, l2) -
         (w3 / c) * anchor.index_for(anchor.mode3, l3);
}

namespace {

double mismatch_at(const CrystalDispersion& crystal, double lambda_p_m, double theta_rad,
                   double lambda_1_m) {
  return delta_k_collinear(make_degenerate_spec(crystal, lambda_p_m, lambda_1_m, theta_rad));
}

}  // namespace

std::vector<PmRoot> solve_degenerate_pm(const CrystalDispersion& crystal, double lambda_p_m,
                                        double theta_rad, const PmSolveOptions& opts) {
  crystal.require_in_window(lambda_p_m);
  if (theta_rad < 0.0 || theta_rad > pi / 2.0 + 1e-12) {
    throw ValidationError("theta must lie in [0, 90] degrees");
  }
  auto f = [&](double l1) { return mismatch_at(crystal, lambda_p_m, theta_rad, l1); };

  std::vector<PmRoot> roots;
  double prev_x = opts.bracket_lo_m;
  double prev_f = f(prev_x);
  for (int i = 1; i <= opts.scan_points; ++i) {
    const double x = opts.bracket_lo_m +
                     (opts.bracket_hi_m - opts.bracket_lo_m) * i / opts.scan_points;
    const double fx = f(x);
    if (prev_f == 0.0 || prev_f * fx < 0.0) {
      // bisect, then a few secant polish steps
      double a = prev_x, b = x, fa = prev_f;
      for (int k = 0; k < 80; ++k) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if (fa * fm <= 0.0) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      double root = 0.5 * (a + b);
      const double resid = f(root);
      if (std::fabs(resid) <= opts.tol_rad_per_m) {
        const double l23 = 1.0 / (0.5 * (1.0 / lambda_p_m - 1.0 / root));
        roots.push_back({root, l23, resid});
      }
    }
    prev_x = x;
    prev_f = fx;
  }
  if (roots.empty()) {
    std::ostringstream os;
    os << "no phase-matching root for lambda_p = " << lambda_p_m * 1e9 << " nm, theta = "
       << theta_rad * 180.0 / pi << " deg in bracket [" << opts.bracket_lo_m * 1e6 << ", "
       << opts.bracket_hi_m * 1e6 << "] um";
    throw NoRootError(os.str());
  }
  std::sort(roots.begin(), roots.end(),
            [](const PmRoot& l, const PmRoot& r) { return l.lambda1_m < r.lambda1_m; });
  return roots;
}

LineCoeffs least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("line fit needs matching samples, at least two");
  }
  const double n = static_cast<double>(x.size());
  double xbar = 0;
  for (double v : x) xbar += v;
  xbar /= n;
  double su = 0, sy = 0, suu = 0, suy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double u = x[i] - xbar;
    su += u;
    sy += y[i];
    suu += u * u;
    suy += u * y[i];
  }
  const double det = n * suu - su * su;
  LineCoeffs fit;
  fit.slope = (n * suy - su * sy) / det;
  const double a0 = (sy - fit.slope * su) / n;  // value at xbar
  fit.intercept = a0 - fit.slope * xbar;
  double ss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (a0 + fit.slope * (x[i] - xbar));
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

MismatchLinearization linearize(const ProcessSpec& anchor, double omega_lo, double omega_hi,
                                int n_samples) {
  if (n_samples < 201) n_samples = 201;
  if (!(omega_hi > omega_lo)) throw ValidationError("linearize: empty frequency window");

  std::vector<double> ws(n_samples), ys(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double w = omega_lo + (omega_hi - omega_lo) * i / (n_samples - 1);
    ws[i] = w;
    ys[i] = delta_k_spectral(w, anchor);
  }
  const LineCoeffs fit = least_squares_line(ws, ys);
  MismatchLinearization lin;
  lin.a_rad_per_m = fit.intercept;
  lin.b_m1_hz1 = fit.slope;
  lin.omega_lo = omega_lo;
  lin.omega_hi = omega_hi;
  lin.rms_residual = fit.rms_residual;

  double max_abs = 0.0;
  for (double y : ys) max_abs = std::max(max_abs, std::fabs(y));
  if (lin.rms_residual > 0.01 * max_abs) {
    std::ostringstream os;
    os << "mismatch is not linear over the requested window (rms residual " << lin.rms_residual
       << " rad/m exceeds 1% of max |dk| = " << max_abs << ")";
    throw ValidationError(os.str());
  }
  return lin;
}

MismatchLinearization linearize_default(const ProcessSpec& anchor) {
  const double wdeg = anchor.omega_degenerate();
  const double hw = 2.0 * pi * 10e12;
  return linearize(anchor, wdeg - hw, wdeg + hw);
}

std::vector<PmSweepRow> pm_sweep(const CrystalDispersion& crystal, double lambda_p_m,
                                 double theta_lo_deg, double theta_hi_deg, double step_deg,
                                 const PmSolveOptions& opts) {
  if (!(step_deg > 0.0) || theta_hi_deg < theta_lo_deg) {
    throw ValidationError("bad theta sweep range");
  }
  std::vector<PmSweepRow> rows;
  const int n = static_cast<int>(std::round((theta_hi_deg - theta_lo_deg) / step_deg));
  for (int i = 0; i <= n; ++i) {
    const double th_deg = theta_lo_deg + i * step_deg;
    const auto roots = solve_degenerate_pm(crystal, lambda_p_m, th_deg * pi / 180.0, opts);
    for (const auto& r : roots) {
      rows.push_back({th_deg, r.lambda1_m * 1e9, r.lambda23_m * 1e9, r.residual_rad_per_m});
    }
  }
  return rows;
}

std::string pm_sweep_csv(const std::vector<PmSweepRow>& rows, const nlohmann::json& config) {
  std::ostringstream os;
  os << io::config_hash_line(config) << "\n";
  os << "# config=" << config.dump() << "\n";
  os << "theta_deg,lambda1_nm,lambda23_nm,delta_k_residual_rad_per_m\n";
  for (const auto& r : rows) {
    os << io::format_double(r.theta_deg) << "," << io::format_double(r.lambda1_nm) << ","
       << io::format_double(r.lambda23_nm) << "," << io::format_double(r.residual_rad_per_m)
       << "\n";
  }
  return os.str();
}

}  // namespace tpg
