#pragma once

namespace bapc {

/// Thin wrapper over gcc/clang __float128 restricted to the arithmetic the
/// combinatorial sums need. The binomial weights of the AR(2) closed forms
/// cancel catastrophically in double or 80-bit precision for oscillatory
/// coefficients; 113 mantissa bits keep the stated tolerances with margin.
struct QuadFloat {
  __float128 value = 0;

  QuadFloat() = default;
  explicit QuadFloat(double v) : value(v) {}
  explicit QuadFloat(int v) : value(v) {}

  friend QuadFloat operator+(QuadFloat a, QuadFloat b) {
    a.value += b.value;
    return a;
  }
  friend QuadFloat operator-(QuadFloat a, QuadFloat b) {
    a.value -= b.value;
    return a;
  }
  friend QuadFloat operator*(QuadFloat a, QuadFloat b) {
    a.value *= b.value;
    return a;
  }
  friend QuadFloat operator/(QuadFloat a, QuadFloat b) {
    a.value /= b.value;
    return a;
  }
};

inline QuadFloat pow_int(QuadFloat base, int exponent) {
  QuadFloat out(1);
  for (int i = 0; i < exponent; ++i) out = out * base;
  return out;
}

/// Exact binomial coefficient in quad precision (valid for n <= 66).
QuadFloat binomial_quad(int n, int k);

}  // namespace bapc
