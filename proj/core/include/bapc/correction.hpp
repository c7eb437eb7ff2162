#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bapc/time_series.hpp"

namespace bapc {

enum class CorrectionKind { NearestNeighbor1, AutoregressiveNet };

/// Options for the AutoregressiveNet correction: a small feed-forward
/// regressor on p lagged residuals (one tanh hidden layer, full-batch
/// gradient descent, fixed-seed uniform init in [-0.5, 0.5]).
struct CorrectionOptions {
  int order = 12;  // p
  int hidden = 16;
  int epochs = 500;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
};

/// Black-box residual predictor used in Step-2. Immutable after fitting;
/// prediction is reentrant.
class CorrectionModel {
 public:
  CorrectionKind kind() const { return kind_; }
  const CorrectionOptions& options() const { return options_; }

  /// Prediction at index t. NearestNeighbor1 returns the stored residual at
  /// the closest index (ties to the earlier index). AutoregressiveNet reads
  /// the p lagged residuals from history and throws when any is missing.
  double predict(int t, const TimeSeries& history) const;

  /// AutoregressiveNet output on an explicit lag vector
  /// (eps_{t-1}, ..., eps_{t-p}), most recent first.
  double predict_lags(const std::vector<double>& lags) const;

  int order() const { return options_.order; }

  /// Build a NearestNeighbor1 model from explicit (index, value) pairs.
  static CorrectionModel nearest_neighbor_from_pairs(std::vector<std::pair<int, double>> pairs);

  friend CorrectionModel fit_correction(CorrectionKind, const TimeSeries&,
                                        const CorrectionOptions&);

 private:
  CorrectionModel() = default;

  CorrectionKind kind_ = CorrectionKind::NearestNeighbor1;
  CorrectionOptions options_;

  // NearestNeighbor1 state: pairs sorted by index.
  std::vector<std::pair<int, double>> pairs_;

  // AutoregressiveNet state.
  std::vector<double> w1_;  // hidden x p, row major
  std::vector<double> b1_;
  std::vector<double> w2_;
  double b2_ = 0.0;
  std::vector<double> x_mean_, x_scale_;
  double y_mean_ = 0.0, y_scale_ = 1.0;
};

/// Step-2: fit the correction model to the residual series.
CorrectionModel fit_correction(CorrectionKind kind, const TimeSeries& residuals,
                               const CorrectionOptions& options = {});

double predict_correction(const CorrectionModel& model, int t, const TimeSeries& history);

}  // namespace bapc
