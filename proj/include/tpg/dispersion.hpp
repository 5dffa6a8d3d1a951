#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tpg/errors.hpp"
#include "tpg/units.hpp"

namespace tpg {

enum class Axis { X, Y, Z };

const char* axis_name(Axis a);

// n^2(lambda) = c0 + sum_k p_k / (lambda^2 - q_k) + r lambda^2, lambda in um.
struct SellmeierPole {
  double p = 0.0;
  double q = 0.0;
};

struct SellmeierAxis {
  double c0 = 0.0;
  std::vector<SellmeierPole> poles;
  double r = 0.0;

  double n_squared(double lambda_um) const;
};

// Immutable after load; all evaluation is const and thread-safe.
struct CrystalDispersion {
  std::string name;
  std::string provenance;
  SellmeierAxis x, y, z;
  double window_min_m = 0.0;
  double window_max_m = 0.0;
  // file-unit values kept verbatim so coefficients and bounds round-trip
  double window_min_um = 0.0;
  double window_max_um = 0.0;

  const SellmeierAxis& axis(Axis a) const;
  bool in_window(double lambda_m) const {
    return lambda_m >= window_min_m && lambda_m <= window_max_m;
  }
  void require_in_window(double lambda_m) const;
};

// Validates presence of all three axes, a non-empty window, provenance, and
// the index ordering n_x < n_y < n_z sampled across the window.
CrystalDispersion load_crystal(const nlohmann::json& document);
CrystalDispersion load_crystal_file(const std::string& path);

// Inverse of load_crystal; coefficients survive a save/load cycle bit-exactly.
nlohmann::json crystal_to_json(const CrystalDispersion& crystal);

double principal_index(const CrystalDispersion& crystal, Axis axis, double lambda_m);
units::Quantity principal_index(const CrystalDispersion& crystal, Axis axis,
                                const units::Quantity& lambda);

struct EigenIndices {
  double n_y_mode = 0.0;      // polarization along y, independent of theta
  double n_inplane_mode = 0.0;  // polarization in the xz plane
};

// Propagation in the xz plane at angle theta from the z axis:
// 1/n^2(theta) = cos^2(theta)/n_x^2 + sin^2(theta)/n_z^2 for the in-plane mode.
EigenIndices eigen_indices(const CrystalDispersion& crystal, double theta_rad, double lambda_m);
EigenIndices eigen_indices(const CrystalDispersion& crystal, double theta_rad,
                           const units::Quantity& lambda);

}  // namespace tpg
