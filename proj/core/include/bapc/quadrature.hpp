#pragma once

#include <vector>

namespace bapc {

struct QuadratureRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

/// Gauss-Legendre rule with n nodes mapped to [0, 1]. Rules for 64 and 128
/// nodes are cached.
const QuadratureRule& gauss_legendre(int n);

}  // namespace bapc
