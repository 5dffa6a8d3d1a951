#include "tpg/tpg_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tpg/io.hpp"

namespace tpg {

using units::constants::c;
using units::constants::eps0;
using units::constants::pi;

void CouplingInputs::validate() const {
  if (pump_intensity_w_m2 < 0.0 || stim_intensity_w_m2 < 0.0) {
    throw ValidationError("intensities must be non-negative");
  }
  if (!(delta > 0.0) || delta > 1.0) throw ValidationError("delta must lie in (0, 1]");
  if (!(length_m > 0.0)) throw ValidationError("crystal length must be positive");
  if (anchor.crystal == nullptr) throw ValidationError("coupling inputs missing anchor process");
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Weak: return "weak";
    case Regime::Strong: return "strong";
    case Regime::Boundary: return "boundary";
  }
  return "?";
}

double miller_chi3(double chi_ref_m2_v2, const std::array<double, 4>& ref_lambdas_m,
                   const std::array<double, 4>& target_lambdas_m,
                   const CrystalDispersion& crystal) {
  static constexpr std::array<Axis, 4> kYzzyAxes = {Axis::Y, Axis::Z, Axis::Z, Axis::Y};
  double ratio = 1.0;
  for (int i = 0; i < 4; ++i) {
    const double nt = principal_index(crystal, kYzzyAxes[i], target_lambdas_m[i]);
    const double nr = principal_index(crystal, kYzzyAxes[i], ref_lambdas_m[i]);
    ratio *= (nt * nt - 1.0) / (nr * nr - 1.0);
  }
  return chi_ref_m2_v2 * ratio;
}

double coupling_f3(double omega_rad_s, const ProcessSpec& anchor) {
  const double wp = anchor.omega_pump();
  const double w1 = anchor.omega_mode1();
  const double w3 = wp - w1 - omega_rad_s;
  if (!(omega_rad_s > 0.0) || !(w3 > 0.0)) {
    throw NonPositiveFrequencyError("coupling prefactor requested at non-positive frequency");
  }
  const double l2 = 2.0 * pi * c / omega_rad_s;
  const double l3 = 2.0 * pi * c / w3;
  const double n1 = anchor.index_for(anchor.mode1, anchor.mode1.lambda_m);
  const double n2 = anchor.index_for(anchor.mode2, l2);
  const double n3 = anchor.index_for(anchor.mode3, l3);
  const double np = anchor.index_for(anchor.pump, anchor.pump.lambda_m);
  const double denom = 8.0 * pi * c * c * eps0;
  return (omega_rad_s * w3) / (denom * denom * n1 * n2 * n3 * np);
}

double coupling_gain(double omega_rad_s, const CouplingInputs& in) {
  return 4.0 * pi * pi * in.stim_intensity_w_m2 * in.pump_intensity_w_m2 *
         coupling_f3(omega_rad_s, in.anchor) * in.chi3_m2_v2 * in.chi3_m2_v2;
}

double delta_k_eff(double omega_rad_s, const CouplingInputs& in) {
  return in.delta * delta_k_spectral(omega_rad_s, in.anchor);
}

double coupling_C3(double omega_rad_s, const CouplingInputs& in) {
  const double dk = delta_k_eff(omega_rad_s, in);
  return coupling_gain(omega_rad_s, in) - 0.25 * dk * dk;
}

Regime classify_regime(double c3_m2, double boundary_band_m2) {
  if (c3_m2 < -boundary_band_m2) return Regime::Weak;
  if (c3_m2 > boundary_band_m2) return Regime::Strong;
  return Regime::Boundary;
}

namespace detail {

double gain_kernel(double x) {
  // series for |x| below the switch keeps the two branches smooth through 0
  if (std::fabs(x) < 1e-8) {
    return 1.0 + x / 3.0 + 2.0 * x * x / 45.0;
  }
  if (x > 0.0) {
    const double s = std::sqrt(x);
    const double sh = std::sinh(s);
    return sh * sh / x;
  }
  const double s = std::sqrt(-x);
  const double sn = std::sin(s);
  return sn * sn / (-x);
}

}  // namespace detail

double flux_density(double omega_rad_s, const CouplingInputs& in) {
  const double gain = coupling_gain(omega_rad_s, in);
  const double dk = delta_k_eff(omega_rad_s, in);
  const double C = gain - 0.25 * dk * dk;
  const double z2 = in.length_m * in.length_m;
  return gain / (2.0 * pi) * z2 * detail::gain_kernel(C * z2);
}

double flux_density_mode3(double omega_rad_s, const CouplingInputs& in) {
  const double ws = in.anchor.omega_pump() - in.anchor.omega_mode1();
  return flux_density(ws - omega_rad_s, in);
}

namespace {

struct PhysicalDomain {
  double lo = 0.0;
  double hi = 0.0;
};

// Frequencies where both the mode-2 wavelength and the mirrored mode-3
// wavelength stay inside the dispersion validity window.
PhysicalDomain physical_domain(const CouplingInputs& in) {
  const CrystalDispersion& crystal = *in.anchor.crystal;
  const double ws = in.anchor.omega_pump() - in.anchor.omega_mode1();
  const double w_min = 2.0 * pi * c / crystal.window_max_m;
  const double w_max = 2.0 * pi * c / crystal.window_min_m;
  PhysicalDomain d;
  d.lo = std::max(w_min, ws - w_max);
  d.hi = std::min(w_max, ws - w_min);
  // stay strictly inside so index evaluation cannot trip the window guard
  const double margin = 1e-9 * (d.hi - d.lo);
  d.lo += margin;
  d.hi -= margin;
  if (!(d.hi > d.lo)) {
    throw WindowCollapseError("no admissible spectral window inside the dispersion validity range");
  }
  return d;
}

const MismatchLinearization& ensure_linearization(const CouplingInputs& in,
                                                  std::optional<MismatchLinearization>& storage) {
  if (in.linearization) return *in.linearization;
  if (!storage) storage = linearize_default(in.anchor);
  return *storage;
}

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGx[8] = {-0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                           0.7966664774136267,  0.9602898564975362};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

double integrate_panel(const CouplingInputs& in, double lo, double hi, int subpanels) {
  double sum = 0.0;
  for (int s = 0; s < subpanels; ++s) {
    const double a = lo + (hi - lo) * s / subpanels;
    const double b = lo + (hi - lo) * (s + 1) / subpanels;
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double panel = 0.0;
    for (int k = 0; k < 8; ++k) panel += kGw[k] * flux_density(mid + half * kGx[k], in);
    sum += panel * half;
  }
  return sum;
}

}  // namespace

IntegrationResult integrate_flux(const CouplingInputs& in, const IntegrationOptions& opts) {
  in.validate();
  if (opts.n_lobes < 2) throw ValidationError("need at least two lobes");
  if (opts.points_per_lobe < 1) throw ValidationError("need at least one point per lobe");

  std::optional<MismatchLinearization> storage;
  const MismatchLinearization& lin = ensure_linearization(in, storage);
  if (lin.b_m1_hz1 == 0.0) throw ValidationError("mismatch slope is zero; no lobe structure");

  const PhysicalDomain dom = physical_domain(in);
  const double w_star = -lin.a_rad_per_m / lin.b_m1_hz1;  // zero of the fitted line
  const double lobe_w = 2.0 * pi / (in.delta * std::fabs(lin.b_m1_hz1) * in.length_m);

  IntegrationResult res;
  const double win_lo = w_star - opts.n_lobes * lobe_w;
  const double win_hi = w_star + opts.n_lobes * lobe_w;
  res.clipped = win_lo < dom.lo || win_hi > dom.hi;
  res.omega_lo = std::max(win_lo, dom.lo);
  res.omega_hi = std::min(win_hi, dom.hi);
  if (!(res.omega_hi > res.omega_lo)) {
    throw WindowCollapseError("integration window does not intersect the admissible domain");
  }

  const int subpanels = std::max(1, (opts.points_per_lobe + 7) / 8);

  // panel boundaries at the lobe edges, clipped; fixed left-to-right order
  double total = 0.0;
  std::vector<double> lobe_contrib(2 * opts.n_lobes, 0.0);
  int covered_left = 0, covered_right = 0;
  for (int m = -opts.n_lobes; m < opts.n_lobes; ++m) {
    double a = w_star + m * lobe_w;
    double b = a + lobe_w;
    a = std::max(a, res.omega_lo);
    b = std::min(b, res.omega_hi);
    if (!(b > a)) continue;
    const double contribution = integrate_panel(in, a, b, subpanels);
    lobe_contrib[m + opts.n_lobes] = contribution;
    total += contribution;
    if (m < 0) ++covered_left;
    else ++covered_right;
  }
  res.photons_per_pulse = total;
  res.lobes_covered = std::min(covered_left, covered_right);

  // tail estimate: outermost two lobes per side extrapolated as a 1/k^2 tail
  double outer = 0.0;
  int found = 0;
  for (int i = 0; i < 2 * opts.n_lobes && found < 2; ++i) {
    if (lobe_contrib[i] != 0.0) {
      outer += std::fabs(lobe_contrib[i]);
      ++found;
    }
  }
  found = 0;
  for (int i = 2 * opts.n_lobes - 1; i >= 0 && found < 2; --i) {
    if (lobe_contrib[i] != 0.0) {
      outer += std::fabs(lobe_contrib[i]);
      ++found;
    }
  }
  res.truncation_error = 0.5 * opts.n_lobes * outer;
  return res;
}

double analytic_flux(const CouplingInputs& in) {
  in.validate();
  std::optional<MismatchLinearization> storage;
  const MismatchLinearization& lin = ensure_linearization(in, storage);
  if (lin.b_m1_hz1 == 0.0) throw ValidationError("mismatch slope is zero");

  // regime audit over the same window the quadrature would use
  IntegrationOptions opts;
  const PhysicalDomain dom = physical_domain(in);
  const double w_star = -lin.a_rad_per_m / lin.b_m1_hz1;
  const double lobe_w = 2.0 * pi / (in.delta * std::fabs(lin.b_m1_hz1) * in.length_m);
  const double lo = std::max(w_star - opts.n_lobes * lobe_w, dom.lo);
  const double hi = std::min(w_star + opts.n_lobes * lobe_w, dom.hi);
  const int kProbe = 512;
  std::vector<double> cs(kProbe + 1);
  double cmax = 0.0;
  for (int i = 0; i <= kProbe; ++i) {
    const double w = lo + (hi - lo) * i / kProbe;
    cs[i] = coupling_C3(w, in);
    cmax = std::max(cmax, std::fabs(cs[i]));
  }
  const double band = 1e-6 * cmax;
  for (int i = 0; i <= kProbe; ++i) {
    if (classify_regime(cs[i], band) == Regime::Strong) {
      std::ostringstream os;
      os << "closed-form yield requires weak coupling, but C = " << cs[i]
         << " m^-2 is strong at omega = " << lo + (hi - lo) * i / kProbe << " rad/s";
      throw RegimeError(os.str());
    }
  }

  const double wdeg = in.anchor.omega_degenerate();
  const double gain = coupling_gain(wdeg, in);
  return gain * in.length_m / (in.delta * std::fabs(lin.b_m1_hz1));
}

double polarization_yield(double alpha_rad, double beta_rad) {
  const double ca = std::cos(alpha_rad);
  const double cb = std::cos(beta_rad);
  return ca * ca * cb * cb;
}

FluxSpectrum sample_flux_spectrum(const CouplingInputs& in, int n_samples,
                                  const IntegrationOptions& opts) {
  in.validate();
  if (n_samples < 2) throw ValidationError("need at least two spectrum samples");
  std::optional<MismatchLinearization> storage;
  const MismatchLinearization& lin = ensure_linearization(in, storage);
  const PhysicalDomain dom = physical_domain(in);
  const double w_star = -lin.a_rad_per_m / lin.b_m1_hz1;
  const double lobe_w = 2.0 * pi / (in.delta * std::fabs(lin.b_m1_hz1) * in.length_m);

  FluxSpectrum spec;
  spec.omega_lo = std::max(w_star - opts.n_lobes * lobe_w, dom.lo);
  spec.omega_hi = std::min(w_star + opts.n_lobes * lobe_w, dom.hi);
  spec.lobe_count = opts.n_lobes;
  spec.points_per_lobe = opts.points_per_lobe;
  if (!(spec.omega_hi > spec.omega_lo)) {
    throw WindowCollapseError("spectrum window does not intersect the admissible domain");
  }
  std::vector<double> cvals(n_samples);
  double cmax = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double w = spec.omega_lo + (spec.omega_hi - spec.omega_lo) * i / (n_samples - 1);
    cvals[i] = coupling_C3(w, in);
    cmax = std::max(cmax, std::fabs(cvals[i]));
  }
  const double band = 1e-6 * cmax;
  spec.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double w = spec.omega_lo + (spec.omega_hi - spec.omega_lo) * i / (n_samples - 1);
    spec.samples.push_back({w, flux_density(w, in), classify_regime(cvals[i], band)});
  }
  return spec;
}

std::string flux_spectrum_csv(const FluxSpectrum& spectrum, const nlohmann::json& config) {
  std::ostringstream os;
  os << io::config_hash_line(config) << "\n";
  os << "# config=" << config.dump() << "\n";
  os << "omega_rad_s,lambda_nm,density_photons_per_pulse_per_hz,regime\n";
  for (const auto& p : spectrum.samples) {
    os << io::format_double(p.omega_rad_s) << ","
       << io::format_double(2.0 * pi * c / p.omega_rad_s * 1e9) << ","
       << io::format_double(p.density) << "," << regime_name(p.regime) << "\n";
  }
  return os.str();
}

std::vector<RegimeMapRow> regime_map(const CouplingInputs& in, double scale_lo, double scale_hi,
                                     int n_points) {
  in.validate();
  if (!(scale_lo > 0.0) || !(scale_hi > scale_lo) || n_points < 2) {
    throw ValidationError("bad regime map range");
  }
  const double wdeg = in.anchor.omega_degenerate();
  std::vector<RegimeMapRow> rows;
  rows.reserve(n_points);
  double cmax = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double s = scale_lo * std::pow(scale_hi / scale_lo, double(i) / (n_points - 1));
    CouplingInputs scaled = in;
    scaled.pump_intensity_w_m2 *= std::sqrt(s);
    scaled.stim_intensity_w_m2 *= std::sqrt(s);
    RegimeMapRow row;
    row.intensity_product_w2_m4 = scaled.pump_intensity_w_m2 * scaled.stim_intensity_w_m2;
    row.c3_at_degeneracy_m2 = coupling_C3(wdeg, scaled);
    rows.push_back(row);
    cmax = std::max(cmax, std::fabs(row.c3_at_degeneracy_m2));
  }
  const double band = 1e-6 * cmax;
  for (auto& row : rows) row.regime = classify_regime(row.c3_at_degeneracy_m2, band);
  return rows;
}

std::string regime_map_csv(const std::vector<RegimeMapRow>& rows, const nlohmann::json& config) {
  std::ostringstream os;
  os << io::config_hash_line(config) << "\n";
  os << "# config=" << config.dump() << "\n";
  os << "intensity_product_W2_m4,C3_at_degeneracy_m2,regime\n";
  for (const auto& r : rows) {
    os << io::format_double(r.intensity_product_w2_m4) << ","
       << io::format_double(r.c3_at_degeneracy_m2) << "," << regime_name(r.regime) << "\n";
  }
  return os.str();
}

double regime_threshold_product(const CouplingInputs& in) {
  const double wdeg = in.anchor.omega_degenerate();
  const double dk = delta_k_eff(wdeg, in);
  const double f = coupling_f3(wdeg, in.anchor);
  return dk * dk / (16.0 * pi * pi * f * in.chi3_m2_v2 * in.chi3_m2_v2);
}

}  // namespace tpg
