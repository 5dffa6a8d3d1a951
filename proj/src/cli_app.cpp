#include "tpg/cli_app.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tpg/experiment.hpp"
#include "tpg/io.hpp"
#include "tpg/oracle_testkit.hpp"

namespace tpg::cli {

namespace {

using units::constants::pi;

Axis parse_axis(const std::string& s) {
  if (s == "x") return Axis::X;
  if (s == "y") return Axis::Y;
  if (s == "z") return Axis::Z;
  throw ValidationError("axis must be one of x, y, z (got '" + s + "')");
}

nlohmann::json crystal_config_json(const CrystalDispersion& crystal, const nlohmann::json& extra) {
  nlohmann::json j = extra;
  j["crystal"] = crystal_to_json(crystal);
  return j;
}

struct CommonPaths {
  std::string crystal_path;
  std::string config_path;
  std::string out_path;
};

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_index(const CommonPaths& paths, const std::string& axis_str, double lambda_nm,
              std::ostream& out) {
  const auto crystal = load_crystal_file(paths.crystal_path);
  const Axis axis = parse_axis(axis_str);
  const double n = principal_index(crystal, axis, lambda_nm * 1e-9);
  out << "n_" << axis_name(axis) << "(" << io::format_double(lambda_nm) << "nm) = "
      << io::format_double(n) << "\n";
  return 0;
}

int cmd_pm_solve(const CommonPaths& paths, double lambda_p_nm, double theta_deg,
                 std::ostream& out) {
  const auto crystal = load_crystal_file(paths.crystal_path);
  const auto roots = solve_degenerate_pm(crystal, lambda_p_nm * 1e-9, theta_deg * pi / 180.0);
  std::vector<PmSweepRow> rows;
  for (const auto& r : roots) {
    rows.push_back({theta_deg, r.lambda1_m * 1e9, r.lambda23_m * 1e9, r.residual_rad_per_m});
  }
  const nlohmann::json cfg = crystal_config_json(
      crystal, {{"command", "pm-solve"}, {"lambda_p_nm", lambda_p_nm}, {"theta_deg", theta_deg}});
  const std::string csv = pm_sweep_csv(rows, cfg);
  out << csv;
  if (!paths.out_path.empty()) io::write_file_atomic(paths.out_path, csv);
  return 0;
}

int cmd_pm_curve(const CommonPaths& paths, double lambda_p_nm, double theta_min, double theta_max,
                 double theta_step, std::ostream& out) {
  const auto crystal = load_crystal_file(paths.crystal_path);
  const auto rows = pm_sweep(crystal, lambda_p_nm * 1e-9, theta_min, theta_max, theta_step);
  const nlohmann::json cfg = crystal_config_json(crystal, {{"command", "pm-curve"},
                                                           {"lambda_p_nm", lambda_p_nm},
                                                           {"theta_min_deg", theta_min},
                                                           {"theta_max_deg", theta_max},
                                                           {"theta_step_deg", theta_step}});
  const std::string csv = pm_sweep_csv(rows, cfg);
  if (!paths.out_path.empty()) {
    io::write_file_atomic(paths.out_path, csv);
    out << "wrote " << rows.size() << " rows to " << paths.out_path << "\n";
  } else {
    out << csv;
  }
  return 0;
}

int cmd_flux_spectrum(const CommonPaths& paths, int n_samples, std::ostream& out) {
  const auto setup = ExperimentSetup::load(paths.config_path);
  const auto in = setup.coupling_for(setup.config().stimulation.energy_j);
  const auto spectrum = sample_flux_spectrum(in, n_samples);
  nlohmann::json cfg = setup.config().to_json();
  cfg["command"] = "flux-spectrum";
  cfg["samples"] = n_samples;
  const std::string csv = flux_spectrum_csv(spectrum, cfg);
  if (!paths.out_path.empty()) {
    io::write_file_atomic(paths.out_path, csv);
    out << "wrote " << spectrum.samples.size() << " rows to " << paths.out_path << "\n";
  } else {
    out << csv;
  }
  return 0;
}

int cmd_yield_sweep(const CommonPaths& paths, double emin_uj, double emax_uj, int points,
                    std::ostream& out) {
  const auto setup = ExperimentSetup::load(paths.config_path);
  if (points < 2) throw ValidationError("need at least 2 sweep points");
  std::vector<double> energies;
  for (int i = 0; i < points; ++i) {
    energies.push_back((emin_uj + (emax_uj - emin_uj) * i / (points - 1)) * 1e-6);
  }
  const auto rows = predict_yield_sweep(setup, energies);
  nlohmann::json cfg = setup.config().to_json();
  cfg["command"] = "yield-sweep";
  cfg["emin_uj"] = emin_uj;
  cfg["emax_uj"] = emax_uj;
  cfg["points"] = points;
  const std::string csv = yield_sweep_csv(rows, cfg);
  if (!paths.out_path.empty()) {
    io::write_file_atomic(paths.out_path, csv);
    out << "wrote " << rows.size() << " rows to " << paths.out_path << "\n";
  } else {
    out << csv;
  }
  return 0;
}

int cmd_fit_delta(const CommonPaths& paths, const std::string& data_path, std::ostream& out) {
  const auto setup = ExperimentSetup::load(paths.config_path);
  const auto sweep = MeasuredSweep::from_csv(io::read_file(data_path));
  const auto report = fit_delta(sweep, setup);
  nlohmann::json j = fit_report_json(report);
  j["config_hash"] = io::config_hash_line(setup.config().to_json());
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!paths.out_path.empty()) io::write_file_atomic(paths.out_path, text);
  return 0;
}

int cmd_regime_map(const CommonPaths& paths, double scale_min, double scale_max, int points,
                   std::ostream& out) {
  const auto setup = ExperimentSetup::load(paths.config_path);
  const auto in = setup.coupling_for(setup.config().stimulation.energy_j);
  if (scale_min <= 0.0 || scale_max <= 0.0) {
    // default: center the scan on the C(wdeg) = 0 threshold
    const double nominal = in.pump_intensity_w_m2 * in.stim_intensity_w_m2;
    const double threshold = regime_threshold_product(in);
    if (!(threshold > 0.0) || !(nominal > 0.0)) {
      throw DomainError(
          "degenerate mismatch or intensities are zero, so no regime threshold exists; pass "
          "--scale-min and --scale-max explicitly");
    }
    const double center = threshold / nominal;
    scale_min = center * 1e-2;
    scale_max = center * 1e2;
  }
  const auto rows = regime_map(in, scale_min, scale_max, points);
  nlohmann::json cfg = setup.config().to_json();
  cfg["command"] = "regime-map";
  cfg["scale_min"] = scale_min;
  cfg["scale_max"] = scale_max;
  cfg["points"] = points;
  const std::string csv = regime_map_csv(rows, cfg);
  if (!paths.out_path.empty()) {
    io::write_file_atomic(paths.out_path, csv);
    out << "wrote " << rows.size() << " rows to " << paths.out_path << "\n";
  } else {
    out << csv;
  }
  return 0;
}

int cmd_efficiency(const CommonPaths& paths, double yield23, std::ostream& out) {
  const auto setup = ExperimentSetup::load(paths.config_path);
  const auto report = efficiency_report(yield23, setup.config().pump, setup.config().stimulation,
                                        setup.config().detection_transfer);
  nlohmann::json j = efficiency_report_json(report);
  j["config"] = setup.config().to_json();
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!paths.out_path.empty()) io::write_file_atomic(paths.out_path, text);
  return 0;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"triple-photon generation simulator"};
  app.require_subcommand(1);

  CommonPaths paths;
  std::string axis_str = "z";
  double lambda_nm = 0.0, lambda_p_nm = 532.0, theta_deg = 90.0;
  double theta_min = 78.0, theta_max = 90.0, theta_step = 0.5;
  int samples = 2001, points = 12;
  double emin_uj = 0.062, emax_uj = 21.0;
  double scale_min = 0.0, scale_max = 0.0;
  std::string data_path;
  double yield23 = 0.0;

  auto* index = app.add_subcommand("index", "principal refractive index at a wavelength");
  index->add_option("--crystal", paths.crystal_path, "crystal data file")->required();
  index->add_option("--axis", axis_str, "dielectric axis x|y|z")->required();
  index->add_option("--lambda-nm", lambda_nm, "wavelength in nm")->required();

  auto* pm_solve = app.add_subcommand("pm-solve", "degenerate phase matching at one angle");
  pm_solve->add_option("--crystal", paths.crystal_path)->required();
  pm_solve->add_option("--lambda-p-nm", lambda_p_nm)->required();
  pm_solve->add_option("--theta-deg", theta_deg)->required();
  pm_solve->add_option("--out", paths.out_path, "optional CSV output path");

  auto* pm_curve = app.add_subcommand("pm-curve", "phase-matching tuning curve vs angle");
  pm_curve->add_option("--crystal", paths.crystal_path)->required();
  pm_curve->add_option("--lambda-p-nm", lambda_p_nm)->required();
  pm_curve->add_option("--theta-min-deg", theta_min);
  pm_curve->add_option("--theta-max-deg", theta_max);
  pm_curve->add_option("--theta-step-deg", theta_step);
  pm_curve->add_option("--out", paths.out_path);

  auto* flux = app.add_subcommand("flux-spectrum", "photon-flux spectral density");
  flux->add_option("--config", paths.config_path, "experiment config JSON")->required();
  flux->add_option("--samples", samples);
  flux->add_option("--out", paths.out_path);

  auto* sweep = app.add_subcommand("yield-sweep", "photons per pulse vs stimulation energy");
  sweep->add_option("--config", paths.config_path)->required();
  sweep->add_option("--emin-uj", emin_uj);
  sweep->add_option("--emax-uj", emax_uj);
  sweep->add_option("--points", points);
  sweep->add_option("--out", paths.out_path);

  auto* fit = app.add_subcommand("fit-delta", "fit the effective-mismatch factor to a sweep");
  fit->add_option("--config", paths.config_path)->required();
  fit->add_option("--data", data_path, "measured sweep CSV")->required();
  fit->add_option("--out", paths.out_path);

  auto* regime = app.add_subcommand("regime-map", "coupling constant vs intensity product");
  regime->add_option("--config", paths.config_path)->required();
  regime->add_option("--scale-min", scale_min, "intensity-product scale (0 = auto)");
  regime->add_option("--scale-max", scale_max);
  regime->add_option("--points", points);
  regime->add_option("--out", paths.out_path);

  auto* eff = app.add_subcommand("efficiency", "triplet rates and quantum efficiencies");
  eff->add_option("--config", paths.config_path)->required();
  eff->add_option("--yield23", yield23, "measured n2+n3 photons per pulse")->required();
  eff->add_option("--out", paths.out_path);

  std::vector<const char*> argv;
  argv.push_back("tpgsim");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (index->parsed()) return cmd_index(paths, axis_str, lambda_nm, out);
  if (pm_solve->parsed()) return cmd_pm_solve(paths, lambda_p_nm, theta_deg, out);
  if (pm_curve->parsed()) {
    return cmd_pm_curve(paths, lambda_p_nm, theta_min, theta_max, theta_step, out);
  }
  if (flux->parsed()) return cmd_flux_spectrum(paths, samples, out);
  if (sweep->parsed()) return cmd_yield_sweep(paths, emin_uj, emax_uj, points, out);
  if (fit->parsed()) return cmd_fit_delta(paths, data_path, out);
  if (regime->parsed()) return cmd_regime_map(paths, scale_min, scale_max, points, out);
  if (eff->parsed()) return cmd_efficiency(paths, yield23, out);
  return 2;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const NoRootError& e) {
    err << "no solution: " << e.what() << "\n";
    return 4;
  } catch (const NonConvergenceError& e) {
    err << "non-convergence: " << e.what() << "\n";
    return 5;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace tpg::cli
