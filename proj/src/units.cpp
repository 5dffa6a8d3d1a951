#include "tpg/units.hpp"

#include <sstream>

namespace tpg::units {

std::string to_string(const Dim& d) {
  std::ostringstream os;
  auto emit = [&](const char* sym, int e) {
    if (e == 0) return;
    if (os.tellp() > 0) os << " ";
    os << sym;
    if (e != 1) os << "^" << e;
  };
  emit("m", d.m);
  emit("s", d.s);
  emit("kg", d.kg);
  emit("A", d.A);
  if (os.tellp() == 0) return "1";
  return os.str();
}

void Quantity::require_same(const Quantity& o, const char* op) const {
  if (dim != o.dim) {
    throw DimensionError(std::string("dimension mismatch in '") + op + "': [" + to_string(dim) +
                         "] vs [" + to_string(o.dim) + "]");
  }
}

Quantity pow_int(const Quantity& q, int k) { return {std::pow(q.value, k), q.dim.pow(k)}; }

Quantity sqrt(const Quantity& q) {
  if (q.dim.m % 2 || q.dim.s % 2 || q.dim.kg % 2 || q.dim.A % 2) {
    throw DimensionError("sqrt of quantity with odd dimension exponents: [" + to_string(q.dim) + "]");
  }
  return {std::sqrt(q.value), {q.dim.m / 2, q.dim.s / 2, q.dim.kg / 2, q.dim.A / 2}};
}

double value_in(const Quantity& q, const Dim& expected, const char* what) {
  if (q.dim != expected) {
    throw DimensionError(std::string(what) + ": expected [" + to_string(expected) + "], got [" +
                         to_string(q.dim) + "]");
  }
  return q.value;
}

namespace {

// [f] for n2(w) prefactors: 1/(8 pi c^2 eps0)^2 times a frequency product.
Dim prefactor_dim(int n_frequencies) {
  Dim inv_sq = dims::dimensionless / (dims::speed.pow(2) * dims::permittivity).pow(2);
  return inv_sq * dims::frequency.pow(n_frequencies);
}

Dim gain_dim(int n_frequencies) {
  return dims::intensity.pow(2) * prefactor_dim(n_frequencies) * dims::chi3.pow(2);
}

}  // namespace

Dim coupling_gain_dim_two_frequency() { return gain_dim(2); }
Dim coupling_gain_dim_four_frequency() { return gain_dim(4); }

}  // namespace tpg::units
