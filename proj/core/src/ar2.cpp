#include "bapc/ar2.hpp"

#include <cmath>
#include <string>

#include "bapc/base_model.hpp"
#include "bapc/errors.hpp"
#include "quad_float.hpp"

namespace bapc {

namespace {

constexpr int kBinomialMax = 66;

// Pascal triangle held in quad precision; the entries are integers and stay
// exact far beyond this table size.
const QuadFloat* binomial_row(int n) {
  static const auto table = [] {
    static QuadFloat rows[kBinomialMax + 1][kBinomialMax + 1] = {};
    for (int i = 0; i <= kBinomialMax; ++i) {
      rows[i][0] = QuadFloat(1);
      for (int j = 1; j <= i; ++j) {
        rows[i][j] = rows[i - 1][j - 1] + (j <= i - 1 ? rows[i - 1][j] : QuadFloat(0));
      }
    }
    return &rows;
  }();
  return (*table)[n];
}

}  // namespace

QuadFloat binomial_quad(int n, int k) {
  if (k < 0 || k > n) return QuadFloat(0);
  if (n > kBinomialMax) {
    throw NumericError("binomial(" + std::to_string(n) + ", ...) exceeds exact table");
  }
  return binomial_row(n)[k];
}

long double binomial(int n, int k) {
  return static_cast<long double>(binomial_quad(n, k).value);
}

Ar2Params sin_to_ar2(double alpha, double beta, double omega, double phi) {
  if (!(alpha > 0.0) || !(omega > 0.0)) {
    throw ConfigError("sin_to_ar2 requires alpha > 0 and omega > 0");
  }
  Ar2Params out;
  out.y1 = alpha * std::cos(phi);
  out.y2 = alpha * std::exp(-beta) * std::cos(omega + phi);
  out.phi1 = 2.0 * std::exp(-beta) * std::cos(omega);
  out.phi2 = -std::exp(-2.0 * beta);
  return out;
}

SinusoidParams ar2_to_sin(double y1, double y2, double phi1, double phi2) {
  if (!(phi2 < 0.0)) {
    throw NumericError("ar2_to_sin requires phi2 < 0");
  }
  if (y1 == 0.0 && y2 == 0.0) {
    throw NumericError("ar2_to_sin: y1 = y2 = 0 is degenerate");
  }
  SinusoidParams out;
  out.beta = -0.5 * std::log(-phi2);
  double c = 0.5 * phi1 * std::exp(out.beta);
  if (std::fabs(c) > 1.0 + 1e-12) {
    throw NumericError("ar2_to_sin: |phi1 exp(beta)/2| > 1, no real frequency");
  }
  c = std::clamp(c, -1.0, 1.0);
  out.omega = std::acos(c);

  // Solve alpha cos(phi) = y1, alpha exp(-beta) cos(omega + phi) = y2 for the
  // cartesian pair (alpha cos phi, alpha sin phi).
  const double cos_part = y1;
  const double sw = std::sin(out.omega);
  double sin_part = 0.0;
  const double scale = std::max({1.0, std::fabs(y1), std::fabs(y2)});
  if (std::fabs(sw) > 1e-12) {
    sin_part = (y1 * std::cos(out.omega) - y2 * std::exp(out.beta)) / sw;
  } else {
    // omega at 0 or pi: the anchors only constrain alpha cos(phi).
    if (std::fabs(y2 * std::exp(out.beta) - y1 * std::cos(out.omega)) > 1e-9 * scale) {
      throw NumericError("ar2_to_sin: anchors inconsistent at sin(omega) = 0");
    }
  }
  out.alpha = std::hypot(cos_part, sin_part);
  if (out.alpha == 0.0) {
    throw NumericError("ar2_to_sin: zero amplitude");
  }
  out.phi = normalize_angle(std::atan2(sin_part, cos_part));
  return out;
}

double phi(int t, double phi1, double phi2) {
  if (t < 0) {
    throw ConfigError("phi requires t >= 0");
  }
  if (t == 0) return 1.0;
  if (t == 1) return phi1;
  if (t <= kPhiClosedFormMaxT) {
    // The alternating binomial terms cancel heavily for oscillatory
    // coefficients, so the sum is accumulated in quad precision.
    QuadFloat acc(0);
    const QuadFloat p1(phi1);
    const QuadFloat p2(phi2);
    for (int k = 0; k <= t / 2; ++k) {
      acc = acc + binomial_quad(t - k, k) * pow_int(p1, t - 2 * k) * pow_int(p2, k);
    }
    return static_cast<double>(acc.value);
  }
  // recursion fallback past the precision guard
  double prev = phi1;   // Phi(1)
  double prev2 = 1.0;   // Phi(0)
  for (int i = 2; i <= t; ++i) {
    const double cur = phi1 * prev + phi2 * prev2;
    prev2 = prev;
    prev = cur;
  }
  return prev;
}

double ar2_closed_form(double y1, double y2, double phi1, double phi2, int t) {
  if (t < 1) {
    throw ConfigError("ar2_closed_form requires t >= 1");
  }
  if (t == 1) return y1;
  if (t == 2) return y2;
  return phi(t - 2, phi1, phi2) * y2 + phi2 * phi(t - 3, phi1, phi2) * y1;
}

}  // namespace bapc
