#pragma once

#include <cmath>
#include <string>

#include "tpg/errors.hpp"

// Runtime-checked SI dimension bookkeeping. The numerical core works in plain
// SI doubles; Quantity guards the public entry points and carries the
// dimensional audits of the coupling formulas.
namespace tpg::units {

struct Dim {
  int m = 0;   // metre
  int s = 0;   // second
  int kg = 0;  // kilogram
  int A = 0;   // ampere

  friend constexpr bool operator==(const Dim&, const Dim&) = default;

  constexpr Dim operator*(const Dim& o) const { return {m + o.m, s + o.s, kg + o.kg, A + o.A}; }
  constexpr Dim operator/(const Dim& o) const { return {m - o.m, s - o.s, kg - o.kg, A - o.A}; }
  constexpr Dim pow(int k) const { return {m * k, s * k, kg * k, A * k}; }
};

std::string to_string(const Dim& d);

namespace dims {
inline constexpr Dim dimensionless{};
inline constexpr Dim length{1, 0, 0, 0};
inline constexpr Dim time{0, 1, 0, 0};
inline constexpr Dim mass{0, 0, 1, 0};
inline constexpr Dim current{0, 0, 0, 1};
inline constexpr Dim frequency{0, -1, 0, 0};        // also rad/s
inline constexpr Dim per_length{-1, 0, 0, 0};       // rad/m
inline constexpr Dim area{2, 0, 0, 0};
inline constexpr Dim speed{1, -1, 0, 0};
inline constexpr Dim energy{2, -2, 1, 0};           // J
inline constexpr Dim power{2, -3, 1, 0};            // W
inline constexpr Dim intensity{0, -3, 1, 0};        // W/m^2
inline constexpr Dim fluence{0, -2, 1, 0};          // J/m^2
inline constexpr Dim action{2, -1, 1, 0};           // J*s
inline constexpr Dim permittivity{-3, 4, -1, 2};    // F/m
inline constexpr Dim voltage{2, -3, 1, -1};         // V
inline constexpr Dim chi3 = area / voltage.pow(2);  // m^2 V^-2
}  // namespace dims

struct Quantity {
  double value = 0.0;
  Dim dim{};

  Quantity operator+(const Quantity& o) const {
    require_same(o, "+");
    return {value + o.value, dim};
  }
  Quantity operator-(const Quantity& o) const {
    require_same(o, "-");
    return {value - o.value, dim};
  }
  Quantity operator*(const Quantity& o) const { return {value * o.value, dim * o.dim}; }
  Quantity operator/(const Quantity& o) const { return {value / o.value, dim / o.dim}; }
  Quantity operator*(double k) const { return {value * k, dim}; }
  Quantity operator/(double k) const { return {value / k, dim}; }
  friend Quantity operator*(double k, const Quantity& q) { return q * k; }

 private:
  void require_same(const Quantity& o, const char* op) const;
};

Quantity pow_int(const Quantity& q, int k);
Quantity sqrt(const Quantity& q);  // throws DimensionError on odd exponents

// Checked extraction of the raw SI value.
double value_in(const Quantity& q, const Dim& expected, const char* what);

inline Quantity make_length_m(double v) { return {v, dims::length}; }
inline Quantity make_energy_j(double v) { return {v, dims::energy}; }
inline Quantity make_time_s(double v) { return {v, dims::time}; }

// CODATA 2018.
namespace constants {
inline constexpr double c = 299792458.0;              // m/s (exact)
inline constexpr double h = 6.62607015e-34;           // J s (exact)
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double eps0 = 8.8541878128e-12;      // F/m
inline constexpr double pi = 3.14159265358979323846;

inline Quantity speed_of_light() { return {c, dims::speed}; }
inline Quantity planck() { return {h, dims::action}; }
inline Quantity reduced_planck() { return {hbar, dims::action}; }
inline Quantity vacuum_permittivity() { return {eps0, dims::permittivity}; }
}  // namespace constants

// Symbolic dimension of 4pi^2 I1 Ip f (chi3)^2 for either coupling-prefactor
// variant, with [I] = W/m^2. The gain term of the coupled-mode constant must
// reduce to m^-2; only the two-frequency numerator does.
Dim coupling_gain_dim_two_frequency();
Dim coupling_gain_dim_four_frequency();

}  // namespace tpg::units
