#include "bapc/correction.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bapc/errors.hpp"

namespace bapc {

namespace {

// Uniform draw in (-0.5, 0.5) built directly from mt19937 words so the init
// sequence does not depend on the standard library's distribution details.
double uniform_init(std::mt19937& rng) {
  return (static_cast<double>(rng()) + 0.5) / 4294967296.0 - 0.5;
}

}  // namespace

CorrectionModel CorrectionModel::nearest_neighbor_from_pairs(
    std::vector<std::pair<int, double>> pairs) {
  if (pairs.empty()) {
    throw ConfigError("nearest-neighbor model needs at least one pair");
  }
  std::sort(pairs.begin(), pairs.end());
  CorrectionModel model;
  model.kind_ = CorrectionKind::NearestNeighbor1;
  model.pairs_ = std::move(pairs);
  return model;
}

double CorrectionModel::predict(int t, const TimeSeries& history) const {
  if (kind_ == CorrectionKind::NearestNeighbor1) {
    int best_index = pairs_.front().first;
    double best_value = pairs_.front().second;
    int best_distance = std::abs(t - best_index);
    for (const auto& [index, value] : pairs_) {
      const int distance = std::abs(t - index);
      if (distance < best_distance) {  // strict: ties keep the earlier index
        best_distance = distance;
        best_index = index;
        best_value = value;
      }
    }
    return best_value;
  }
  std::vector<double> lags;
  lags.reserve(static_cast<std::size_t>(options_.order));
  for (int j = 1; j <= options_.order; ++j) {
    if (!history.contains(t - j)) {
      throw ConfigError("correction at t=" + std::to_string(t) + " needs residual at t=" +
                        std::to_string(t - j) + " which is outside the history");
    }
    lags.push_back(history.at(t - j));
  }
  return predict_lags(lags);
}

double CorrectionModel::predict_lags(const std::vector<double>& lags) const {
  if (kind_ != CorrectionKind::AutoregressiveNet) {
    throw ConfigError("predict_lags requires an autoregressive correction model");
  }
  const auto p = static_cast<std::size_t>(options_.order);
  if (lags.size() != p) {
    throw ConfigError("expected " + std::to_string(p) + " lags, got " +
                      std::to_string(lags.size()));
  }
  const auto h = static_cast<std::size_t>(options_.hidden);
  double out = b2_;
  for (std::size_t i = 0; i < h; ++i) {
    double z = b1_[i];
    for (std::size_t j = 0; j < p; ++j) {
      z += w1_[i * p + j] * (lags[j] - x_mean_[j]) / x_scale_[j];
    }
    out += w2_[i] * std::tanh(z);
  }
  return y_mean_ + y_scale_ * out;
}

CorrectionModel fit_correction(CorrectionKind kind, const TimeSeries& residuals,
                               const CorrectionOptions& options) {
  if (kind == CorrectionKind::NearestNeighbor1) {
    std::vector<std::pair<int, double>> pairs;
    pairs.reserve(residuals.size());
    for (int t = residuals.start_index(); t <= residuals.last_index(); ++t) {
      pairs.emplace_back(t, residuals.at(t));
    }
    auto model = CorrectionModel::nearest_neighbor_from_pairs(std::move(pairs));
    model.options_ = options;
    return model;
  }

  const int p = options.order;
  const int hidden = options.hidden;
  if (p < 1 || hidden < 1 || options.epochs < 0) {
    throw ConfigError("invalid autoregressive net options");
  }
  const LagMatrix lag_matrix = build_lag_matrix(residuals, p);
  const std::size_t rows = lag_matrix.rows.size();
  const auto pu = static_cast<std::size_t>(p);
  const auto hu = static_cast<std::size_t>(hidden);

  CorrectionModel model;
  model.kind_ = CorrectionKind::AutoregressiveNet;
  model.options_ = options;

  // standardize inputs and targets from the training rows
  model.x_mean_.assign(pu, 0.0);
  model.x_scale_.assign(pu, 0.0);
  model.y_mean_ = 0.0;
  for (const auto& row : lag_matrix.rows) {
    for (std::size_t j = 0; j < pu; ++j) model.x_mean_[j] += row.lags[j];
    model.y_mean_ += row.target;
  }
  for (std::size_t j = 0; j < pu; ++j) model.x_mean_[j] /= static_cast<double>(rows);
  model.y_mean_ /= static_cast<double>(rows);
  double y_var = 0.0;
  for (const auto& row : lag_matrix.rows) {
    for (std::size_t j = 0; j < pu; ++j) {
      const double d = row.lags[j] - model.x_mean_[j];
      model.x_scale_[j] += d * d;
    }
    const double dy = row.target - model.y_mean_;
    y_var += dy * dy;
  }
  for (std::size_t j = 0; j < pu; ++j) {
    model.x_scale_[j] = std::sqrt(model.x_scale_[j] / static_cast<double>(rows));
    if (model.x_scale_[j] == 0.0) model.x_scale_[j] = 1.0;
  }
  model.y_scale_ = std::sqrt(y_var / static_cast<double>(rows));
  if (model.y_scale_ == 0.0) model.y_scale_ = 1.0;

  std::vector<std::vector<double>> inputs(rows, std::vector<double>(pu));
  std::vector<double> targets(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < pu; ++j) {
      inputs[i][j] = (lag_matrix.rows[i].lags[j] - model.x_mean_[j]) / model.x_scale_[j];
    }
    targets[i] = (lag_matrix.rows[i].target - model.y_mean_) / model.y_scale_;
  }

  std::mt19937 rng(static_cast<std::uint32_t>(options.seed & 0xffffffffu));
  model.w1_.resize(hu * pu);
  model.b1_.resize(hu);
  model.w2_.resize(hu);
  for (auto& w : model.w1_) w = uniform_init(rng);
  for (auto& b : model.b1_) b = uniform_init(rng);
  for (auto& w : model.w2_) w = uniform_init(rng);
  model.b2_ = uniform_init(rng);

  // full-batch gradient descent on mean squared error
  std::vector<double> hidden_act(hu);
  std::vector<double> grad_w1(hu * pu);
  std::vector<double> grad_b1(hu);
  std::vector<double> grad_w2(hu);
  const double inv_rows = 1.0 / static_cast<double>(rows);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad_w1.begin(), grad_w1.end(), 0.0);
    std::fill(grad_b1.begin(), grad_b1.end(), 0.0);
    std::fill(grad_w2.begin(), grad_w2.end(), 0.0);
    double grad_b2 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double pred = model.b2_;
      for (std::size_t k = 0; k < hu; ++k) {
        double z = model.b1_[k];
        for (std::size_t j = 0; j < pu; ++j) z += model.w1_[k * pu + j] * inputs[i][j];
        hidden_act[k] = std::tanh(z);
        pred += model.w2_[k] * hidden_act[k];
      }
      const double delta = 2.0 * (pred - targets[i]) * inv_rows;
      grad_b2 += delta;
      for (std::size_t k = 0; k < hu; ++k) {
        grad_w2[k] += delta * hidden_act[k];
        const double back = delta * model.w2_[k] * (1.0 - hidden_act[k] * hidden_act[k]);
        grad_b1[k] += back;
        for (std::size_t j = 0; j < pu; ++j) grad_w1[k * pu + j] += back * inputs[i][j];
      }
    }
    const double lr = options.learning_rate;
    for (std::size_t k = 0; k < hu * pu; ++k) model.w1_[k] -= lr * grad_w1[k];
    for (std::size_t k = 0; k < hu; ++k) model.b1_[k] -= lr * grad_b1[k];
    for (std::size_t k = 0; k < hu; ++k) model.w2_[k] -= lr * grad_w2[k];
    model.b2_ -= lr * grad_b2;
  }
  return model;
}

double predict_correction(const CorrectionModel& model, int t, const TimeSeries& history) {
  return model.predict(t, history);
}

}  // namespace bapc
