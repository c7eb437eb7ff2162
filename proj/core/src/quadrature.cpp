#include "bapc/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "bapc/errors.hpp"

namespace bapc {

namespace {

QuadratureRule build_rule(int n) {
  if (n < 1) {
    throw ConfigError("quadrature rule needs at least one node");
  }
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  // Newton iteration on P_n over [-1, 1], exploiting root symmetry.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto left = static_cast<std::size_t>(i);
    const auto right = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[left] = 0.5 * (1.0 - x);
    rule.nodes[right] = 0.5 * (1.0 + x);
    rule.weights[left] = 0.5 * w;
    rule.weights[right] = 0.5 * w;
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int n) {
  static const QuadratureRule rule64 = build_rule(64);
  static const QuadratureRule rule128 = build_rule(128);
  if (n == 64) return rule64;
  if (n == 128) return rule128;
  thread_local QuadratureRule custom;
  custom = build_rule(n);
  return custom;
}

}  // namespace bapc
