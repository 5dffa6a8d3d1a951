#include "tpg/oracle_testkit.hpp"

#include <cmath>
#include <sstream>

#include "tpg/io.hpp"

namespace tpg::oracle {

using units::constants::pi;

namespace {

OdeState run_rk4(double gain, double dk_eff, double length_m, int steps) {
  const std::complex<double> I(0.0, 1.0);
  const double g = std::sqrt(gain);
  OdeState st;
  st.a2 = 0.0;
  st.a3_conj = 1.0 / std::sqrt(2.0 * pi);

  const double h = length_m / steps;
  auto rhs = [&](double z, std::complex<double> a2, std::complex<double> a3c,
                 std::complex<double>& d2, std::complex<double>& d3) {
    const std::complex<double> phase = std::exp(-I * (dk_eff * z));
    d2 = I * g * a3c * phase;
    d3 = -I * g * a2 / phase;
  };
  for (int i = 0; i < steps; ++i) {
    const double z = i * h;
    std::complex<double> k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    rhs(z, st.a2, st.a3_conj, k1a, k1b);
    rhs(z + 0.5 * h, st.a2 + 0.5 * h * k1a, st.a3_conj + 0.5 * h * k1b, k2a, k2b);
    rhs(z + 0.5 * h, st.a2 + 0.5 * h * k2a, st.a3_conj + 0.5 * h * k2b, k3a, k3b);
    rhs(z + h, st.a2 + h * k3a, st.a3_conj + h * k3b, k4a, k4b);
    st.a2 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    st.a3_conj += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
  }
  st.z_m = length_m;
  return st;
}

}  // namespace

OdeState ode_propagate_state(double omega_rad_s, const CouplingInputs& in, int steps) {
  in.validate();
  if (steps < 10) throw ValidationError("oracle needs at least 10 steps");
  const double gain = coupling_gain(omega_rad_s, in);
  const double dk = delta_k_eff(omega_rad_s, in);
  return run_rk4(gain, dk, in.length_m, steps);
}

double ode_propagate(double omega_rad_s, const CouplingInputs& in, int steps) {
  in.validate();
  if (steps < 10) throw ValidationError("oracle needs at least 10 steps");
  const double gain = coupling_gain(omega_rad_s, in);
  if (gain == 0.0) return 0.0;
  const double dk = delta_k_eff(omega_rad_s, in);

  const double full = std::norm(run_rk4(gain, dk, in.length_m, steps).a2);
  const double half = std::norm(run_rk4(gain, dk, in.length_m, steps / 2).a2);
  const double scale = std::max(std::fabs(full), std::fabs(half));
  if (scale > 0.0) {
    const double richardson = std::fabs(full - half) / 15.0 / scale;
    if (richardson > 1e-7) {
      std::ostringstream os;
      os << "step too coarse: Richardson estimate " << richardson << " > 1e-7 at " << steps
         << " steps";
      throw StepTooCoarseError(os.str());
    }
  }
  return full;
}

double quadrature_reference(const CouplingInputs& in, long n_points,
                            const IntegrationOptions& opts) {
  in.validate();
  if (n_points < 2) throw ValidationError("reference quadrature needs at least 2 points");
  // reuse the window the adaptive integrator derives
  IntegrationOptions probe = opts;
  probe.points_per_lobe = 1;
  const IntegrationResult window = integrate_flux(in, probe);
  const double lo = window.omega_lo;
  const double hi = window.omega_hi;
  const double h = (hi - lo) / (n_points - 1);
  double sum = 0.5 * (flux_density(lo, in) + flux_density(hi, in));
  for (long i = 1; i < n_points - 1; ++i) sum += flux_density(lo + i * h, in);
  return sum * h;
}

std::vector<EquivalencePoint> equivalence_grid(const CouplingInputs& in,
                                               const std::vector<double>& omegas,
                                               const std::vector<double>& intensity_scales,
                                               int steps) {
  if (omegas.size() != intensity_scales.size()) {
    throw ValidationError("equivalence grid needs one intensity scale per frequency");
  }
  std::vector<EquivalencePoint> points;
  points.reserve(omegas.size());
  for (size_t i = 0; i < omegas.size(); ++i) {
    CouplingInputs scaled = in;
    scaled.pump_intensity_w_m2 *= intensity_scales[i];
    scaled.stim_intensity_w_m2 *= intensity_scales[i];
    EquivalencePoint p;
    p.omega_rad_s = omegas[i];
    p.closed_form = flux_density(omegas[i], scaled);
    p.oracle = ode_propagate(omegas[i], scaled, steps);
    const double denom = std::max(std::fabs(p.closed_form), std::fabs(p.oracle));
    p.rel_error = denom > 0.0 ? std::fabs(p.closed_form - p.oracle) / denom : 0.0;
    points.push_back(p);
  }
  return points;
}

std::string equivalence_report_csv(const std::vector<EquivalencePoint>& points) {
  std::ostringstream os;
  os << "omega,closed_form,oracle,rel_error\n";
  for (const auto& p : points) {
    os << io::format_double(p.omega_rad_s) << "," << io::format_double(p.closed_form) << ","
       << io::format_double(p.oracle) << "," << io::format_double(p.rel_error) << "\n";
  }
  return os.str();
}

}  // namespace tpg::oracle
