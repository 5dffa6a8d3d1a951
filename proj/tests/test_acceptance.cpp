// Acceptance suite: every release criterion runs here at its pinned
// tolerance and prints one [PASS]/[FAIL] line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "tpg/experiment.hpp"
#include "tpg/oracle_testkit.hpp"
#include "test_helpers.hpp"

using namespace tpg;
using test::paper_setup;
using test::shipped_crystal;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool report(int num, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %02d %s: %s\n", ok ? "PASS" : "FAIL", num, name, detail.c_str());
  std::fflush(stdout);
  return ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

}  // namespace

TEST_CASE("criterion 1: phase-matching endpoint at the x axis") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto roots = solve_degenerate_pm(shipped_crystal(), 532e-9, kPi / 2);
  const double elapsed = seconds_since(t0);
  REQUIRE(roots.size() >= 1);
  const double l1 = roots[0].lambda1_m * 1e9;
  const double l23 = roots[0].lambda23_m * 1e9;
  const bool ok = std::fabs(l1 - 1491.0) <= 10.0 && std::fabs(l23 - 1654.0) <= 10.0 &&
                  elapsed < 1.0;
  CHECK(report(1, "phase-matching endpoint", ok,
               fmt("lambda1 = %.2f nm (1491 +- 10), lambda23 = %.2f nm (1654 +- 10), %.3f s",
                   l1, l23, elapsed)));
}

TEST_CASE("criterion 2: energy-conservation exactness") {
  const auto roots = solve_degenerate_pm(shipped_crystal(), 532e-9, kPi / 2);
  double worst = 0.0;
  for (const auto& r : roots) {
    const double resid =
        std::fabs(1.0 / 532e-9 - 1.0 / r.lambda1_m - 2.0 / r.lambda23_m) * 532e-9;
    worst = std::max(worst, resid);
  }
  const double l23_from_1491 = 1.0 / (0.5 * (1.0 / 532.0 - 1.0 / 1491.0));  // nm
  const bool ok = worst <= 1e-12 && std::fabs(l23_from_1491 - 1654.2) <= 0.1;
  CHECK(report(2, "energy-conservation exactness", ok,
               fmt("max relative residual = %.2e (<= 1e-12), lambda23(1491 nm) = %.4f nm",
                   worst, l23_from_1491)));
}

TEST_CASE("criterion 3: linearization constants") {
  const auto roots = solve_degenerate_pm(shipped_crystal(), 532e-9, kPi / 2);
  const auto anchor = make_degenerate_spec(shipped_crystal(), 532e-9, roots[0].lambda1_m, kPi / 2);
  const auto lin = linearize_default(anchor);
  const bool a_ok = std::fabs(lin.a_rad_per_m - (-3.3e5)) <= 0.15 * 3.3e5;
  const bool b_ok = std::fabs(lin.b_m1_hz1 - 2.88e-10) <= 0.15 * 2.88e-10;
  CHECK(report(3, "linearization constants", a_ok && b_ok,
               fmt("a = %.4e rad/m (-3.3e5 +- 15%%), b = %.4e m^-1 Hz^-1 (2.88e-10 +- 15%%)",
                   lin.a_rad_per_m, lin.b_m1_hz1)));
}

TEST_CASE("criterion 4: susceptibility transport by Miller scaling") {
  // reference process: 539 nm pump with its energy-conserving degenerate
  // triplet at 1617 nm, axes per the yzzy component
  const std::array<double, 4> ref = {539e-9, 1617e-9, 1617e-9, 1617e-9};
  const std::array<double, 4> target = {532e-9, 1491e-9, 1654e-9, 1654e-9};
  const double chi = miller_chi3(14.6e-22, ref, target, shipped_crystal());
  const bool ok = std::fabs(chi - 7.8e-22) <= 0.15 * 7.8e-22;

  // diagnostic: the quoted 7.8e-22 is reproduced only by evaluating all four
  // factors on the z axis at the pump wavelength, not by the per-wave rule
  const std::array<double, 4> all_539 = {539e-9, 539e-9, 539e-9, 539e-9};
  const double chi_deg_ref = miller_chi3(14.6e-22, all_539, target, shipped_crystal());
  auto f = [&](Axis a, double l) {
    const double n = principal_index(shipped_crystal(), a, l);
    return n * n - 1.0;
  };
  const double p_target = f(Axis::Y, 532e-9) * f(Axis::Z, 1491e-9) * f(Axis::Z, 1654e-9) *
                          f(Axis::Y, 1654e-9);
  const double chi_zzzz532 = 14.6e-22 * p_target / std::pow(f(Axis::Z, 532e-9), 4);
  std::printf("  criterion 4 diagnostics: per-wave rule with degenerate-539 reference = %.4e;\n"
              "  all-z-axis reference at 532 nm = %.4e (matches the quoted 7.8e-22)\n",
              chi_deg_ref, chi_zzzz532);
  CHECK(report(4, "Miller susceptibility transport", ok,
               fmt("computed %.4e m^2/V^2 vs expected 7.8e-22 +- 15%%", chi)));
}

TEST_CASE("criterion 5: closed form versus direct propagation oracle") {
  const auto t0 = std::chrono::steady_clock::now();
  auto base = paper_setup().coupling_for(21e-6);
  base.delta = 1.0;
  const double wdeg = base.anchor.omega_degenerate();

  std::mt19937 rng(20240917);
  std::uniform_real_distribution<double> core(-2e10, 2e10);
  std::uniform_real_distribution<double> wing(5e11, 3e12);
  std::uniform_real_distribution<double> sign(0.0, 1.0);
  std::uniform_real_distribution<double> logscale(-0.7, 0.7);
  std::vector<double> omegas, scales;
  for (int i = 0; i < 100; ++i) {
    omegas.push_back(wdeg + (i % 2 == 0 ? core(rng)
                                        : wing(rng) * (sign(rng) < 0.5 ? -1.0 : 1.0)));
    scales.push_back(std::pow(10.0, logscale(rng)));
  }
  const auto points = oracle::equivalence_grid(base, omegas, scales);
  double worst = 0.0;
  int weak = 0, strong = 0;
  for (size_t i = 0; i < points.size(); ++i) {
    worst = std::max(worst, points[i].rel_error);
    CouplingInputs scaled = base;
    scaled.pump_intensity_w_m2 *= scales[i];
    scaled.stim_intensity_w_m2 *= scales[i];
    (coupling_C3(points[i].omega_rad_s, scaled) > 0.0 ? strong : weak) += 1;
  }
  const double elapsed = seconds_since(t0);
  const bool ok = worst <= 1e-6 && weak >= 10 && strong >= 10 && elapsed < 30.0;
  CHECK(report(5, "oracle equivalence", ok,
               fmt("max rel error = %.2e over %d weak / %d strong points, %.1f s", worst, weak,
                   strong, elapsed)));
}

TEST_CASE("criterion 6: branch continuity at the coupling boundary") {
  double worst = 0.0;
  for (double x = 1e-6; x >= 1e-12; x /= 10.0) {
    worst = std::max(worst, std::fabs(detail::gain_kernel(x) - 1.0));
    worst = std::max(worst, std::fabs(detail::gain_kernel(-x) - 1.0));
  }
  const bool ok = worst <= 1e-6;
  CHECK(report(6, "branch continuity", ok,
               fmt("max deviation from the quadratic limit = %.2e for |C| Z^2 <= 1e-6", worst)));
}

TEST_CASE("criterion 7: closed-form yield versus quadrature") {
  // collinear mismatch: the lobe structure fits inside the dispersion window,
  // which is the premise of the quadrature-vs-closed-form statement
  double worst = 0.0;
  double f2_ratio = 0.0;
  for (double e_uj : {0.062, 0.5, 2.0, 8.0, 14.0, 21.0}) {
    auto in = paper_setup().coupling_for(e_uj * 1e-6);
    in.delta = 1.0;
    const double closed = analytic_flux(in);
    const double quad = integrate_flux(in).photons_per_pulse;
    worst = std::max(worst, std::fabs(closed - quad) / quad);
    // squared-prefactor variant: one extra power of f
    const double f_deg = coupling_f3(in.anchor.omega_degenerate(), in.anchor);
    f2_ratio = std::max(f2_ratio, closed * f_deg / quad);
  }
  const bool ok = worst <= 0.05 && f2_ratio > 1e3;
  CHECK(report(7, "closed form vs quadrature", ok,
               fmt("max |closed/quad - 1| = %.3f (<= 0.05); squared-prefactor variant off by "
                   "%.1e",
                   worst, f2_ratio)));
}

TEST_CASE("criterion 8: yield is linear in the stimulation energy") {
  std::vector<double> energies, yields;
  for (int i = 0; i < 12; ++i) energies.push_back(62e-9 + (21e-6 - 62e-9) * i / 11.0);
  const auto rows = predict_yield_sweep(paper_setup(), energies);
  std::vector<double> es;
  for (const auto& r : rows) {
    es.push_back(r.stim_energy_j);
    yields.push_back(r.photons_mode23);
  }
  const auto fit = fit_line(es, yields);
  const bool ok = fit.r_squared >= 0.999;
  CHECK(report(8, "yield linearity", ok, fmt("R^2 = %.6f (>= 0.999)", fit.r_squared)));
}

TEST_CASE("criterion 9: absolute yield magnitude at the operating point") {
  const auto rows = predict_yield_sweep(paper_setup(), {21e-6});
  const double yield = rows[0].photons_mode23;
  const bool ok = yield >= 2e4 / 3.0 && yield <= 2e4 * 3.0;
  CHECK(report(9, "absolute yield magnitude", ok,
               fmt("n2+n3 = %.3e photons/pulse vs 2e4 within factor 3", yield)));
}

TEST_CASE("criterion 10: effective-mismatch roundtrip at the fitted value") {
  const double delta_true = 2e-7;
  std::vector<double> energies;
  for (int i = 0; i < 8; ++i) energies.push_back(62e-9 + (21e-6 - 62e-9) * i / 7.0);
  const auto truth = predict_yield_sweep(paper_setup(), energies, delta_true);

  std::mt19937 rng(4242);
  std::normal_distribution<double> noise(0.0, 0.01);
  MeasuredSweep data;
  for (const auto& p : truth) {
    data.rows.push_back({p.stim_energy_j, p.photons_mode23 * (1.0 + noise(rng)), {}});
  }
  const auto fit = fit_delta(data, paper_setup());
  const bool ok = std::fabs(fit.delta - delta_true) <= 0.02 * delta_true;
  CHECK(report(10, "delta roundtrip", ok,
               fmt("fitted delta = %.3e vs 2e-7 +- 2%% (note: the yield is delta-flat below "
                   "delta ~ 2e-3 at this operating point)",
                   fit.delta)));
}

TEST_CASE("criterion 11: polarization projection law") {
  const double deg = kPi / 180.0;
  bool ok = polarization_yield(0.0, 0.0) == 1.0;
  ok = ok && polarization_yield(90.0 * deg, 0.0) <= 1e-12;
  ok = ok && polarization_yield(0.0, 90.0 * deg) <= 1e-12;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ang(0.0, kPi);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const double a = ang(rng), b = ang(rng);
    const double expected = std::pow(std::cos(a), 2) * std::pow(std::cos(b), 2);
    worst = std::max(worst, std::fabs(polarization_yield(a, b) - expected));
  }
  ok = ok && worst <= 1e-12;
  CHECK(report(11, "polarization projection law", ok,
               fmt("extremes exact, max |yield - cos^2 cos^2| = %.1e (<= 1e-12)", worst)));
}

TEST_CASE("criterion 12: efficiency bookkeeping") {
  const auto& cfg = paper_setup().config();
  const auto r = efficiency_report(2e4, cfg.pump, cfg.stimulation, cfg.detection_transfer);
  const bool ok = r.triplets_per_pulse == 1e4 && r.triplets_per_second == 1e5;
  // quoted experimental efficiencies for the same operating point, shown for
  // comparison and deliberately not asserted (they do not follow from the
  // photon-count definitions)
  std::printf("  criterion 12 comparison: computed eta = %.3e (quoted 8e-12), computed eta/n1 = "
              "%.3e Hz^-1 (quoted 3.1e-24)\n",
              r.eta, r.eta_per_n1_hz);
  CHECK(report(12, "efficiency bookkeeping", ok,
               fmt("triplets: %.0f /pulse, %.0f /s; detected %.2f /pulse at transfer 4e-5",
                   r.triplets_per_pulse, r.triplets_per_second, r.detected_per_pulse)));
}
