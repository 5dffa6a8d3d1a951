#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tpg/tpg_model.hpp"

namespace tpg::oracle {

// Classical two-mode amplitudes of the undepleted-pump linear system,
// normalized so |A|^2 is a photon-flux spectral density.
struct OdeState {
  std::complex<double> a2{0.0, 0.0};
  std::complex<double> a3_conj{0.0, 0.0};
  double z_m = 0.0;
};

// Direct fixed-step RK4 integration of
//   dA2/dZ      =  i g A3* exp(-i dk_eff Z)
//   dA3*/dZ     = -i g A2  exp(+i dk_eff Z)
// with g = sqrt(gain(w)) and the unit spontaneous seed A3*(0) = 1/sqrt(2 pi)
// that reproduces the closed-form Z->0 limit. Returns |A2(L)|^2.
// Throws StepTooCoarseError when the half-step Richardson estimate exceeds
// 1e-7 relative.
double ode_propagate(double omega_rad_s, const CouplingInputs& in, int steps = 40000);

// Final state for invariant checks (|A3*|^2 - |A2|^2 conservation).
OdeState ode_propagate_state(double omega_rad_s, const CouplingInputs& in, int steps = 40000);

// Dense composite-trapezoid integral of flux_density over the same window as
// integrate_flux; the convergence target for the lobe-aware quadrature.
double quadrature_reference(const CouplingInputs& in, long n_points,
                            const IntegrationOptions& opts = {});

struct EquivalencePoint {
  double omega_rad_s = 0.0;
  double closed_form = 0.0;
  double oracle = 0.0;
  double rel_error = 0.0;
};

std::vector<EquivalencePoint> equivalence_grid(const CouplingInputs& in,
                                               const std::vector<double>& omegas,
                                               const std::vector<double>& intensity_scales,
                                               int steps = 40000);

std::string equivalence_report_csv(const std::vector<EquivalencePoint>& points);

}  // namespace tpg::oracle
