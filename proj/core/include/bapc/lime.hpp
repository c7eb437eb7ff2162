#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bapc/correction.hpp"
#include "bapc/time_series.hpp"

namespace bapc {

struct LimeOptions {
  int segment_size = 3;
  int num_samples = 1000;  // k
  double ridge_lambda = 1e-3;
  std::uint64_t seed = 0;
  /// Replacement for masked segments; defaults to the mean of the residual
  /// series (a non-informative placeholder).
  std::optional<double> placeholder;
};

/// Per-lag surrogate coefficients for one prediction of an autoregressive
/// correction model. coefficients[0] belongs to eps_{t-1} (most recent lag).
struct LimeExplanation {
  int t = 0;
  int order = 0;  // p
  std::vector<double> coefficients;
  double intercept = 0.0;
  int num_samples = 0;
  int segment_size = 0;
  std::uint64_t seed = 0;
  double placeholder = 0.0;
};

/// Prediction on a lag vector (eps_{t-1}, ..., eps_{t-p}), most recent first.
using LagPredictor = std::function<double(const std::vector<double>&)>;

/// Segment-perturbation LIME: the lag vector (eps_{t-1}, ..., eps_{t-p}) is
/// split into contiguous segments; each of k samples masks every segment
/// independently with probability 1/2, replacing it by the placeholder. A
/// ridge regression of the model predictions on the per-segment sums of the
/// perturbed values yields one coefficient per segment, inherited by each
/// member lag.
LimeExplanation lime_explain(const LagPredictor& predictor, const TimeSeries& residuals,
                             int t, int p, const LimeOptions& options = {});
LimeExplanation lime_explain(const CorrectionModel& model, const TimeSeries& residuals,
                             int t, int p, const LimeOptions& options = {});

}  // namespace bapc
