#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bapc/base_model.hpp"
#include "bapc/engine.hpp"

namespace bapc {

/// Straight segment between parameter vectors: gamma(h) = from + h (to - from),
/// so gamma(0) = theta_r and gamma(1) = theta0.
struct SegmentPath {
  std::vector<double> from;  // theta_r
  std::vector<double> to;    // theta0

  std::vector<double> at(double h) const;
};

/// Per-parameter integrated gradients at one evaluation time. The components
/// sum to the surrogate correction delta_f up to completeness_residual.
struct Attribution {
  std::vector<std::string> names;
  std::vector<double> values;
  double eval_time = 0.0;
  std::optional<int> anchor;
  double delta_f = 0.0;
  double completeness_residual = 0.0;
  std::optional<double> quadrature_error;  // node-doubling estimate

  double sum() const;
};

/// Linear-in-parameters model f = theta . g(t): IG_k = delta_theta_k g_k(t).
Attribution ig_linear(const std::vector<std::string>& names,
                      const std::vector<double>& delta_theta,
                      const std::vector<double>& basis, double t);

/// Closed form for f = alpha exp(-beta t) cos(omega t + phi), evaluated in
/// complex arithmetic. Falls back to quadrature when the shared denominator
/// |(-dbeta + i domega) t + i dphi| drops below 1e-9 (removable singularity).
Attribution ig_damped_sinusoid(const BaseModel& theta0, const BaseModel& theta_r, double t);

/// Closed form for the polynomial-plus-seasonal family: linear parts exact,
/// the (alpha, phi) block via the complex quotient with fixed frequency.
Attribution ig_poly_seasonal(const BaseModel& theta0, const BaseModel& theta_r, double t);

/// Closed form for the AR(2) coefficients via the double binomial sums over
/// Gamma^m_n (compensated summation). Guarded to 1 <= t <= 60; larger t
/// throws NumericError directing the caller to ig_quadrature. The first two
/// indices attribute zero (f(1), f(2) do not depend on the coefficients).
Attribution ig_ar2(double phi1_0, double phi2_0, double phi1_r, double phi2_r,
                   double y1, double y2, int t);

/// Gauss-Legendre quadrature of Def.-2 integrals for any built-in family
/// (AR2 partials via differentiated recursion). Runs `nodes` and 2*nodes and
/// reports their difference as quadrature_error.
Attribution ig_quadrature(const BaseModel& theta0, const BaseModel& theta_r, double t,
                          int nodes = 64);

/// d f / d theta_k at the model's own parameter point, as used by the
/// quadrature integrand. AR2 derivatives follow the differentiated recursion.
std::vector<double> model_partials(const BaseModel& model, double t);

/// Family dispatch on a BAPC result at absolute time t (AR2 evaluated at the
/// window-relative index). delta_f comes from surrogate_correction.
Attribution attribute(const BapcResult& result, double t);

/// Per-parameter (s, t) matrices over an SBAPC sweep plus the completeness
/// residual at every cell. Cell failures are recorded and leave NaNs.
struct IgHeatmaps {
  std::vector<std::string> names;
  std::vector<int> anchors;
  int train_size = 0;
  /// per_param[k][i][j] = IG_k(s_i, s_i - n + 1 + j)
  std::vector<std::vector<std::vector<double>>> per_param;
  std::vector<std::vector<double>> completeness;
  std::vector<std::string> cell_failures;
};

IgHeatmaps ig_heatmaps(const SbapcResult& sweep);

}  // namespace bapc
