#include "tpg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tpg/io.hpp"

namespace tpg {

using units::constants::c;
using units::constants::h;
using units::constants::pi;

void BeamPulseParams::validate() const {
  if (!(energy_j >= 0.0)) throw ValidationError("pulse energy must be non-negative");
  if (!(fwhm_s > 0.0)) throw ValidationError("pulse duration must be positive");
  if (!(waist_m > 0.0)) throw ValidationError("beam waist must be positive");
  if (!(wavelength_m > 0.0)) throw ValidationError("wavelength must be positive");
  if (!(rep_rate_hz > 0.0)) throw ValidationError("repetition rate must be positive");
}

double peak_intensity(const BeamPulseParams& beam) {
  beam.validate();
  return std::sqrt(4.0 * std::log(2.0) / pi) * 2.0 * beam.energy_j /
         (pi * beam.waist_m * beam.waist_m * beam.fwhm_s);
}

double photon_count(double energy_j, double lambda_m) {
  if (energy_j < 0.0 || lambda_m <= 0.0) throw ValidationError("photon_count needs E >= 0, lambda > 0");
  return energy_j * lambda_m / (h * c);
}

units::Quantity photon_count(const units::Quantity& energy, const units::Quantity& lambda) {
  const double e = units::value_in(energy, units::dims::energy, "photon_count(energy)");
  const double l = units::value_in(lambda, units::dims::length, "photon_count(lambda)");
  return {photon_count(e, l), units::dims::dimensionless};
}

namespace {

BeamPulseParams beam_from_json(const nlohmann::json& j, const char* which) {
  BeamPulseParams b;
  try {
    b.energy_j = j.at("energy_uj").get<double>() * 1e-6;
    b.fwhm_s = j.at("fwhm_ps").get<double>() * 1e-12;
    b.waist_m = j.at("waist_um").get<double>() * 1e-6;
    b.wavelength_m = j.at("wavelength_nm").get<double>() * 1e-9;
    b.rep_rate_hz = j.value("rep_rate_hz", 10.0);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad beam block '") + which + "': " + e.what());
  }
  return b;
}

nlohmann::json beam_to_json(const BeamPulseParams& b) {
  return {{"energy_uj", b.energy_j * 1e6},
          {"fwhm_ps", b.fwhm_s * 1e12},
          {"waist_um", b.waist_m * 1e6},
          {"wavelength_nm", b.wavelength_m * 1e9},
          {"rep_rate_hz", b.rep_rate_hz}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    cfg.crystal_file = j.at("crystal_file").get<std::string>();
    cfg.theta_deg = j.at("theta_deg").get<double>();
    cfg.crystal_length_m = j.at("crystal_length_m").get<double>();
    cfg.delta = j.at("delta").get<double>();
    cfg.chi3_m2_v2 = j.at("chi3_m2_per_v2").get<double>();
    cfg.pump = beam_from_json(j.at("pump"), "pump");
    cfg.stimulation = beam_from_json(j.at("stimulation"), "stimulation");
    cfg.detection_transfer = j.value("detection_transfer", 0.0);
    cfg.overlap_area_mode = j.value("overlap_area_mode", false);
    cfg.seed = j.value("seed", 0L);
    if (j.contains("chi3_reference")) {
      const auto& ref = j["chi3_reference"];
      cfg.chi3_reference_value = ref.at("value_m2_per_v2").get<double>();
      const auto& wl = ref.at("wavelengths_nm");
      if (!wl.is_array() || wl.size() != 4) {
        throw ValidationError("chi3_reference.wavelengths_nm must list four wavelengths");
      }
      for (int i = 0; i < 4; ++i) cfg.chi3_reference_lambdas_m[i] = wl[i].get<double>() * 1e-9;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad experiment config: ") + e.what());
  }
  cfg.pump.validate();
  cfg.stimulation.validate();
  if (!(cfg.crystal_length_m > 0.0)) throw ValidationError("crystal_length_m must be positive");
  return cfg;
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["crystal_file"] = crystal_file;
  j["theta_deg"] = theta_deg;
  j["crystal_length_m"] = crystal_length_m;
  j["delta"] = delta;
  j["chi3_m2_per_v2"] = chi3_m2_v2;
  j["pump"] = beam_to_json(pump);
  j["stimulation"] = beam_to_json(stimulation);
  j["detection_transfer"] = detection_transfer;
  j["overlap_area_mode"] = overlap_area_mode;
  j["seed"] = seed;
  if (chi3_reference_value) {
    j["chi3_reference"] = {{"value_m2_per_v2", *chi3_reference_value},
                           {"wavelengths_nm",
                            {chi3_reference_lambdas_m[0] * 1e9, chi3_reference_lambdas_m[1] * 1e9,
                             chi3_reference_lambdas_m[2] * 1e9, chi3_reference_lambdas_m[3] * 1e9}}};
  }
  return j;
}

ExperimentSetup::ExperimentSetup(ExperimentConfig config, CrystalDispersion crystal)
    : config_(std::move(config)), crystal_(std::move(crystal)) {
  anchor_ = make_degenerate_spec(crystal_, config_.pump.wavelength_m,
                                 config_.stimulation.wavelength_m,
                                 config_.theta_deg * pi / 180.0);
  linearization_ = linearize_default(anchor_);
}

ExperimentSetup ExperimentSetup::load(const std::string& config_path) {
  auto cfg = ExperimentConfig::from_json(io::load_json_file(config_path));
  std::string crystal_path = cfg.crystal_file;
  if (!crystal_path.empty() && crystal_path.front() != '/') {
    const std::string dir = io::dirname(config_path);
    if (!dir.empty()) crystal_path = dir + "/" + crystal_path;
  }
  return ExperimentSetup(std::move(cfg), load_crystal_file(crystal_path));
}

CouplingInputs ExperimentSetup::coupling_for(double stim_energy_j) const {
  return coupling_for(stim_energy_j, config_.delta, config_.chi3_m2_v2);
}

CouplingInputs ExperimentSetup::coupling_for(double stim_energy_j, double delta,
                                             double chi3) const {
  CouplingInputs in;
  in.pump_intensity_w_m2 = peak_intensity(config_.pump);
  BeamPulseParams stim = config_.stimulation;
  stim.energy_j = stim_energy_j;
  in.stim_intensity_w_m2 = stim_energy_j > 0.0 ? peak_intensity(stim) : 0.0;
  if (config_.overlap_area_mode) {
    // pump-weighted average of the stimulation intensity over the focal spot
    const double wp2 = config_.pump.waist_m * config_.pump.waist_m;
    const double ws2 = stim.waist_m * stim.waist_m;
    in.stim_intensity_w_m2 *= ws2 / (wp2 + ws2);
  }
  in.chi3_m2_v2 = chi3;
  in.delta = delta;
  in.length_m = config_.crystal_length_m;
  in.anchor = anchor_;
  in.linearization = linearization_;
  return in;
}

std::vector<YieldPoint> predict_yield_sweep(const ExperimentSetup& setup,
                                            const std::vector<double>& stim_energies_j,
                                            std::optional<double> delta_override) {
  std::vector<YieldPoint> out;
  out.reserve(stim_energies_j.size());
  const double delta = delta_override.value_or(setup.config().delta);
  for (double e : stim_energies_j) {
    if (e == 0.0) {
      out.push_back({0.0, 0.0});
      continue;
    }
    if (e < 1e-9 || e > 1e-3) {
      throw ValidationError("stimulation energies must be 0 or inside [1 nJ, 1 mJ]");
    }
    const auto in = setup.coupling_for(e, delta, setup.config().chi3_m2_v2);
    const double n2 = integrate_flux(in).photons_per_pulse;
    out.push_back({e, 2.0 * n2});
  }
  return out;
}

std::string yield_sweep_csv(const std::vector<YieldPoint>& rows, const nlohmann::json& config) {
  std::ostringstream os;
  os << io::config_hash_line(config) << "\n";
  os << "# config=" << config.dump() << "\n";
  os << "stim_energy_J,photons_mode23_per_pulse\n";
  for (const auto& r : rows) {
    os << io::format_double(r.stim_energy_j) << "," << io::format_double(r.photons_mode23) << "\n";
  }
  return os.str();
}

void MeasuredSweep::validate() const {
  if (rows.empty()) throw ValidationError("measured sweep is empty");
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].photons_mode23 < 0.0) throw ValidationError("negative photon count in sweep");
    if (i > 0 && !(rows[i].stim_energy_j > rows[i - 1].stim_energy_j)) {
      throw ValidationError("sweep energies must be strictly increasing");
    }
  }
}

namespace {

double parse_number(const std::string& cell, const std::string& line) {
  try {
    size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ValidationError("bad number '" + cell + "' in sweep row '" + line + "'");
  }
}

}  // namespace

MeasuredSweep MeasuredSweep::from_csv(const std::string& text) {
  MeasuredSweep sweep;
  std::istringstream is(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line.rfind("stim_energy_J", 0) != 0) {
        throw ValidationError("measured sweep CSV must start with header 'stim_energy_J,...'");
      }
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    std::string cell;
    MeasuredSweep::Row row;
    if (!std::getline(ls, cell, ',')) continue;
    row.stim_energy_j = parse_number(cell, line);
    if (!std::getline(ls, cell, ',')) throw ValidationError("sweep row missing photon count");
    row.photons_mode23 = parse_number(cell, line);
    if (std::getline(ls, cell, ',') && !cell.empty()) row.sigma = parse_number(cell, line);
    sweep.rows.push_back(row);
  }
  if (!header_seen) throw ValidationError("measured sweep CSV missing header row");
  sweep.validate();
  return sweep;
}

std::string MeasuredSweep::to_csv() const {
  std::ostringstream os;
  os << "stim_energy_J,photons_per_pulse,sigma\n";
  for (const auto& r : rows) {
    os << io::format_double(r.stim_energy_j) << "," << io::format_double(r.photons_mode23) << ",";
    if (r.sigma) os << io::format_double(*r.sigma);
    os << "\n";
  }
  return os.str();
}

namespace {

double chi_squared(const MeasuredSweep& data, const ExperimentSetup& setup, double delta) {
  std::vector<double> energies;
  energies.reserve(data.rows.size());
  for (const auto& r : data.rows) energies.push_back(r.stim_energy_j);
  const auto pred = predict_yield_sweep(setup, energies, delta);
  double chi2 = 0.0;
  for (size_t i = 0; i < data.rows.size(); ++i) {
    const double sigma = data.rows[i].sigma.value_or(1.0);
    const double r = (pred[i].photons_mode23 - data.rows[i].photons_mode23) / sigma;
    chi2 += r * r;
  }
  return chi2;
}

}  // namespace

FitReport fit_delta(const MeasuredSweep& data, const ExperimentSetup& setup) {
  data.validate();
  if (data.rows.size() < 3) throw ValidationError("fit needs at least 3 sweep rows");
  bool any_signal = false;
  for (const auto& r : data.rows) any_signal |= r.photons_mode23 > 0.0;
  if (!any_signal) throw DegenerateDataError("all measured counts are zero");

  auto objective = [&](double log10_delta) {
    return chi_squared(data, setup, std::pow(10.0, log10_delta));
  };

  // bracket scan over log10(delta) in [-9, 0]
  const int kScan = 19;
  double best_x = -9.0, best_f = objective(-9.0);
  std::vector<double> fs(kScan + 1);
  fs[0] = best_f;
  for (int i = 1; i <= kScan; ++i) {
    const double x = -9.0 + 9.0 * i / kScan;
    fs[i] = objective(x);
    if (fs[i] < best_f) {
      best_f = fs[i];
      best_x = x;
    }
  }
  double lo = std::max(-9.0, best_x - 9.0 / kScan);
  double hi = std::min(0.0, best_x + 9.0 / kScan);

  // golden section
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  int iterations = 0;
  while (hi - lo > 1e-5) {
    if (++iterations > 200) throw NonConvergenceError("delta fit exceeded 200 iterations");
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = objective(x2);
    }
  }
  double xmin = 0.5 * (lo + hi);

  // iterated local quadratic refinement in log10(delta)
  for (double hstep : {1e-4, 1e-6, 1e-8}) {
    const double fm = objective(xmin - hstep);
    const double f0 = objective(xmin);
    const double fp = objective(xmin + hstep);
    const double denom = fm - 2.0 * f0 + fp;
    if (denom > 0.0) {
      const double shift = 0.5 * hstep * (fm - fp) / denom;
      if (std::fabs(shift) < hstep) xmin += shift;
    }
  }

  FitReport report;
  report.delta = std::pow(10.0, xmin);

  // curvature-based standard error on delta itself
  {
    const double d = report.delta;
    const double hstep = 1e-3 * d;
    const double fm = chi_squared(data, setup, d - hstep);
    const double f0 = chi_squared(data, setup, d);
    const double fp = chi_squared(data, setup, d + hstep);
    const double curvature = (fm - 2.0 * f0 + fp) / (hstep * hstep);
    const int n = static_cast<int>(data.rows.size());
    bool weighted = true;
    for (const auto& r : data.rows) weighted &= r.sigma.has_value();
    if (curvature > 0.0) {
      // unweighted fits scale the error by the reduced chi^2
      const double scale = weighted ? 1.0 : f0 / std::max(1, n - 1);
      report.delta_stderr = std::sqrt(2.0 * scale / curvature);
    }
  }

  // residuals and goodness of fit at the optimum
  {
    std::vector<double> energies;
    for (const auto& r : data.rows) energies.push_back(r.stim_energy_j);
    const auto pred = predict_yield_sweep(setup, energies, report.delta);
    double ss_res = 0.0, mean = 0.0;
    for (const auto& r : data.rows) mean += r.photons_mode23;
    mean /= data.rows.size();
    double ss_tot = 0.0;
    for (size_t i = 0; i < data.rows.size(); ++i) {
      const double r = pred[i].photons_mode23 - data.rows[i].photons_mode23;
      ss_res += r * r;
      ss_tot += (data.rows[i].photons_mode23 - mean) * (data.rows[i].photons_mode23 - mean);
    }
    report.residual_rms = std::sqrt(ss_res / data.rows.size());
    report.r_squared = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 0.0;
  }
  report.model_settings = setup.config().to_json().dump();
  return report;
}

nlohmann::json fit_report_json(const FitReport& report) {
  nlohmann::json j;
  j["delta"] = report.delta;
  j["delta_stderr"] = report.delta_stderr;
  j["residual_rms"] = report.residual_rms;
  j["r_squared"] = report.r_squared;
  j["model_settings"] = nlohmann::json::parse(report.model_settings);
  return j;
}

EfficiencyReport efficiency_report(double yield23_per_pulse, const BeamPulseParams& pump,
                                   const BeamPulseParams& stim, double detection_transfer) {
  if (yield23_per_pulse < 0.0) throw ValidationError("yield must be non-negative");
  EfficiencyReport r;
  r.triplets_per_pulse = 0.5 * yield23_per_pulse;
  r.triplets_per_second = r.triplets_per_pulse * pump.rep_rate_hz;
  r.pump_photons_per_pulse = photon_count(pump.energy_j, pump.wavelength_m);
  r.stim_photons_per_pulse = photon_count(stim.energy_j, stim.wavelength_m);
  r.eta = r.pump_photons_per_pulse > 0.0 ? r.triplets_per_pulse / r.pump_photons_per_pulse : 0.0;
  r.eta_per_n1_hz = r.stim_photons_per_pulse > 0.0 ? r.eta / r.stim_photons_per_pulse : 0.0;
  r.detection_transfer = detection_transfer;
  r.detected_per_pulse = yield23_per_pulse * detection_transfer;
  return r;
}

nlohmann::json efficiency_report_json(const EfficiencyReport& report) {
  nlohmann::json j;
  j["triplets_per_pulse"] = report.triplets_per_pulse;
  j["triplets_per_second"] = report.triplets_per_second;
  j["pump_photons_per_pulse"] = report.pump_photons_per_pulse;
  j["stim_photons_per_pulse"] = report.stim_photons_per_pulse;
  j["eta"] = report.eta;
  j["eta_per_n1_hz"] = report.eta_per_n1_hz;
  j["detection_transfer"] = report.detection_transfer;
  j["detected_per_pulse"] = report.detected_per_pulse;
  return j;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ValidationError("line fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit fit;
  const double det = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace tpg
