#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpg/tpg_model.hpp"

namespace tpg {

struct BeamPulseParams {
  double energy_j = 0.0;
  double fwhm_s = 0.0;
  double waist_m = 0.0;      // 1/e^2 intensity radius
  double wavelength_m = 0.0;
  double rep_rate_hz = 0.0;

  void validate() const;
};

// Gaussian-in-space, Gaussian-in-time peak intensity:
//   I0 = sqrt(4 ln2 / pi) * 2 E / (pi w0^2 tau_fwhm)
double peak_intensity(const BeamPulseParams& beam);

// n = E lambda / (h c)
double photon_count(double energy_j, double lambda_m);
units::Quantity photon_count(const units::Quantity& energy, const units::Quantity& lambda);

struct ExperimentConfig {
  std::string crystal_file;
  double theta_deg = 90.0;
  double crystal_length_m = 0.0;
  double delta = 2e-7;
  double chi3_m2_v2 = 0.0;
  std::optional<double> chi3_reference_value;
  std::array<double, 4> chi3_reference_lambdas_m{};
  BeamPulseParams pump;
  BeamPulseParams stimulation;
  double detection_transfer = 0.0;
  bool overlap_area_mode = false;
  long seed = 0;  // reserved; the core is deterministic and ignores it

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;  // resolved snapshot for report provenance
};

// Loads the config and its crystal file (path resolved relative to the config
// location) and owns both; hands out CouplingInputs per stimulation energy.
class ExperimentSetup {
 public:
  ExperimentSetup(ExperimentConfig config, CrystalDispersion crystal);
  static ExperimentSetup load(const std::string& config_path);

  // the anchor references the owned crystal, so the setup is pinned in place
  ExperimentSetup(const ExperimentSetup&) = delete;
  ExperimentSetup& operator=(const ExperimentSetup&) = delete;

  const ExperimentConfig& config() const { return config_; }
  const CrystalDispersion& crystal() const { return crystal_; }
  const ProcessSpec& anchor() const { return anchor_; }
  const MismatchLinearization& linearization() const { return linearization_; }

  // delta/chi3 default to the config values.
  CouplingInputs coupling_for(double stim_energy_j) const;
  CouplingInputs coupling_for(double stim_energy_j, double delta, double chi3) const;

 private:
  ExperimentConfig config_;
  CrystalDispersion crystal_;
  ProcessSpec anchor_;
  MismatchLinearization linearization_;
};

struct YieldPoint {
  double stim_energy_j = 0.0;
  double photons_mode23 = 0.0;  // n2 + n3 per pulse
};

// One integrate_flux evaluation per stimulation energy; energies must be zero
// or inside [1 nJ, 1 mJ].
std::vector<YieldPoint> predict_yield_sweep(const ExperimentSetup& setup,
                                            const std::vector<double>& stim_energies_j,
                                            std::optional<double> delta_override = {});

std::string yield_sweep_csv(const std::vector<YieldPoint>& rows, const nlohmann::json& config);

struct MeasuredSweep {
  struct Row {
    double stim_energy_j = 0.0;
    double photons_mode23 = 0.0;
    std::optional<double> sigma;
  };
  std::vector<Row> rows;

  void validate() const;  // strictly increasing energies, counts >= 0
  static MeasuredSweep from_csv(const std::string& text);
  std::string to_csv() const;
};

struct FitReport {
  double delta = 0.0;
  double delta_stderr = 0.0;
  double residual_rms = 0.0;  // counts
  double r_squared = 0.0;
  std::string model_settings;  // resolved-config snapshot (JSON)
};

// Scalar least squares on log10(delta) in [-9, 0]: bracket scan, golden
// section, then local quadratic refinement; standard error from the local
// curvature of chi^2.
FitReport fit_delta(const MeasuredSweep& data, const ExperimentSetup& setup);

nlohmann::json fit_report_json(const FitReport& report);

struct EfficiencyReport {
  double triplets_per_pulse = 0.0;
  double triplets_per_second = 0.0;
  double pump_photons_per_pulse = 0.0;
  double stim_photons_per_pulse = 0.0;
  double eta = 0.0;             // triplets / pump photons
  double eta_per_n1_hz = 0.0;   // eta / stimulation photons
  double detection_transfer = 0.0;
  double detected_per_pulse = 0.0;
};

EfficiencyReport efficiency_report(double yield23_per_pulse, const BeamPulseParams& pump,
                                   const BeamPulseParams& stim, double detection_transfer);

nlohmann::json efficiency_report_json(const EfficiencyReport& report);

// Unweighted linear regression diagnostics for sweeps.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace tpg
