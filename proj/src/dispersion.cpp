#include "tpg/dispersion.hpp"

#include <cmath>
#include <sstream>

#include "tpg/io.hpp"

namespace tpg {

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

double SellmeierAxis::n_squared(double lambda_um) const {
  const double l2 = lambda_um * lambda_um;
  double v = c0 + r * l2;
  for (const auto& pole : poles) v += pole.p / (l2 - pole.q);
  return v;
}

const SellmeierAxis& CrystalDispersion::axis(Axis a) const {
  switch (a) {
    case Axis::X: return x;
    case Axis::Y: return y;
    case Axis::Z: return z;
  }
  return x;
}

void CrystalDispersion::require_in_window(double lambda_m) const {
  if (!in_window(lambda_m)) {
    std::ostringstream os;
    os << "wavelength " << lambda_m * 1e9 << " nm outside validity window ["
       << window_min_m * 1e9 << ", " << window_max_m * 1e9 << "] nm of crystal '" << name << "'";
    throw OutOfWindowError(os.str());
  }
}

namespace {

SellmeierAxis parse_axis(const nlohmann::json& j, const char* which) {
  if (!j.is_object()) throw ValidationError(std::string("axis '") + which + "' is not an object");
  SellmeierAxis axis;
  try {
    axis.c0 = j.at("c0").get<double>();
    axis.r = j.value("r", 0.0);
    for (const auto& pole : j.at("poles")) {
      axis.poles.push_back({pole.at("p").get<double>(), pole.at("q").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed coefficient record in axis '") + which +
                          "': " + e.what());
  }
  if (!std::isfinite(axis.c0) || !std::isfinite(axis.r)) {
    throw ValidationError(std::string("non-finite coefficient in axis '") + which + "'");
  }
  for (const auto& pole : axis.poles) {
    if (!std::isfinite(pole.p) || !std::isfinite(pole.q)) {
      throw ValidationError(std::string("non-finite pole in axis '") + which + "'");
    }
  }
  return axis;
}

}  // namespace

CrystalDispersion load_crystal(const nlohmann::json& document) {
  CrystalDispersion c;
  if (!document.is_object()) throw ValidationError("crystal document is not a JSON object");
  c.name = document.value("name", "");
  if (c.name.empty()) throw ValidationError("crystal document missing 'name'");
  if (!document.contains("provenance") || !document["provenance"].is_string() ||
      document["provenance"].get<std::string>().empty()) {
    throw ValidationError("crystal document missing nonempty 'provenance'");
  }
  c.provenance = document["provenance"].get<std::string>();

  if (!document.contains("axes")) throw ValidationError("crystal document missing 'axes'");
  const auto& axes = document["axes"];
  for (const char* which : {"x", "y", "z"}) {
    if (!axes.contains(which)) {
      throw MissingAxisError(std::string("crystal document missing axis '") + which + "'");
    }
  }
  c.x = parse_axis(axes["x"], "x");
  c.y = parse_axis(axes["y"], "y");
  c.z = parse_axis(axes["z"], "z");

  if (!document.contains("window_um") || !document["window_um"].is_array() ||
      document["window_um"].size() != 2) {
    throw ValidationError("crystal document missing 'window_um' [min, max]");
  }
  const double lo_um = document["window_um"][0].get<double>();
  const double hi_um = document["window_um"][1].get<double>();
  if (!(lo_um > 0.0) || !(hi_um > lo_um)) throw ValidationError("empty or inverted validity window");
  c.window_min_um = lo_um;
  c.window_max_um = hi_um;
  c.window_min_m = lo_um * 1e-6;
  c.window_max_m = hi_um * 1e-6;

  // n^2 > 1 and strict ordering n_x < n_y < n_z, sampled across the window.
  const int kSamples = 128;
  for (int i = 0; i <= kSamples; ++i) {
    const double lum = lo_um + (hi_um - lo_um) * i / kSamples;
    const double nx2 = c.x.n_squared(lum);
    const double ny2 = c.y.n_squared(lum);
    const double nz2 = c.z.n_squared(lum);
    for (double n2 : {nx2, ny2, nz2}) {
      if (!(n2 > 1.0)) {
        std::ostringstream os;
        os << "n^2(" << lum << " um) = " << n2 << " <= 1 inside the validity window";
        throw ValidationError(os.str());
      }
    }
    if (!(nx2 < ny2 && ny2 < nz2)) {
      std::ostringstream os;
      os << "index ordering n_x < n_y < n_z violated at " << lum << " um"
         << " (n_x^2=" << nx2 << ", n_y^2=" << ny2 << ", n_z^2=" << nz2 << ")";
      throw OrderingViolationError(os.str());
    }
  }
  return c;
}

CrystalDispersion load_crystal_file(const std::string& path) {
  return load_crystal(io::load_json_file(path));
}

nlohmann::json crystal_to_json(const CrystalDispersion& crystal) {
  auto axis_json = [](const SellmeierAxis& a) {
    nlohmann::json j;
    j["c0"] = a.c0;
    j["r"] = a.r;
    j["poles"] = nlohmann::json::array();
    for (const auto& pole : a.poles) j["poles"].push_back({{"p", pole.p}, {"q", pole.q}});
    return j;
  };
  nlohmann::json j;
  j["name"] = crystal.name;
  j["provenance"] = crystal.provenance;
  j["axes"] = {{"x", axis_json(crystal.x)},
               {"y", axis_json(crystal.y)},
               {"z", axis_json(crystal.z)}};
  j["window_um"] = {crystal.window_min_um, crystal.window_max_um};
  return j;
}

double principal_index(const CrystalDispersion& crystal, Axis axis, double lambda_m) {
  crystal.require_in_window(lambda_m);
  return std::sqrt(crystal.axis(axis).n_squared(lambda_m * 1e6));
}

units::Quantity principal_index(const CrystalDispersion& crystal, Axis axis,
                                const units::Quantity& lambda) {
  const double lm = units::value_in(lambda, units::dims::length, "principal_index(lambda)");
  return {principal_index(crystal, axis, lm), units::dims::dimensionless};
}

EigenIndices eigen_indices(const CrystalDispersion& crystal, double theta_rad, double lambda_m) {
  crystal.require_in_window(lambda_m);
  const double lum = lambda_m * 1e6;
  const double n2x = crystal.x.n_squared(lum);
  const double n2y = crystal.y.n_squared(lum);
  const double n2z = crystal.z.n_squared(lum);
  const double ct = std::cos(theta_rad);
  const double st = std::sin(theta_rad);
  EigenIndices e;
  e.n_y_mode = std::sqrt(n2y);
  e.n_inplane_mode = 1.0 / std::sqrt(ct * ct / n2x + st * st / n2z);
  return e;
}

EigenIndices eigen_indices(const CrystalDispersion& crystal, double theta_rad,
                           const units::Quantity& lambda) {
  const double lm = units::value_in(lambda, units::dims::length, "eigen_indices(lambda)");
  return eigen_indices(crystal, theta_rad, lm);
}

}  // namespace tpg
