#include "bapc/lime.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "bapc/errors.hpp"

namespace bapc {

namespace {

double uniform01(std::mt19937& rng) {
  return (static_cast<double>(rng()) + 0.5) / 4294967296.0;
}

}  // namespace

LimeExplanation lime_explain(const LagPredictor& predictor, const TimeSeries& residuals,
                             int t, int p, const LimeOptions& options) {
  if (p < 1) {
    throw ConfigError("lime_explain: p must be >= 1");
  }
  if (options.segment_size < 1) {
    throw ConfigError("lime_explain: segment_size must be >= 1");
  }
  if (t - p < residuals.start_index()) {
    throw ConfigError("lime_explain: t has fewer than p lagged residuals");
  }

  const int num_segments = (p + options.segment_size - 1) / options.segment_size;
  if (options.num_samples < num_segments + 1) {
    throw ConfigError("lime_explain: need k >= number of segments + 1 samples");
  }

  std::vector<double> lags(static_cast<std::size_t>(p));
  for (int j = 1; j <= p; ++j) {
    lags[static_cast<std::size_t>(j - 1)] = residuals.at(t - j);
  }
  double placeholder = 0.0;
  if (options.placeholder) {
    placeholder = *options.placeholder;
  } else {
    for (double v : residuals.values()) placeholder += v;
    placeholder /= static_cast<double>(residuals.size());
  }

  const int k = options.num_samples;
  Eigen::MatrixXd design(k, num_segments + 1);
  Eigen::VectorXd predictions(k);
  std::mt19937 rng(static_cast<std::uint32_t>(options.seed & 0xffffffffu));
  std::vector<double> perturbed(lags.size());
  for (int sample = 0; sample < k; ++sample) {
    perturbed = lags;
    design(sample, 0) = 1.0;
    for (int seg = 0; seg < num_segments; ++seg) {
      const bool keep = uniform01(rng) < 0.5;
      const int lo = seg * options.segment_size;
      const int hi = std::min(p, lo + options.segment_size);
      double feature = 0.0;
      for (int idx = lo; idx < hi; ++idx) {
        if (!keep) perturbed[static_cast<std::size_t>(idx)] = placeholder;
        feature += perturbed[static_cast<std::size_t>(idx)];
      }
      design(sample, 1 + seg) = feature;
    }
    predictions(sample) = predictor(perturbed);
    if (!std::isfinite(predictions(sample))) {
      throw NumericError("lime_explain: non-finite model prediction");
    }
  }

  // ridge on the segment features; the intercept column is not penalized
  Eigen::MatrixXd normal = design.transpose() * design;
  for (int seg = 1; seg <= num_segments; ++seg) {
    normal(seg, seg) += options.ridge_lambda;
  }
  const Eigen::VectorXd solution = normal.ldlt().solve(design.transpose() * predictions);

  LimeExplanation out;
  out.t = t;
  out.order = p;
  out.intercept = solution(0);
  out.num_samples = k;
  out.segment_size = options.segment_size;
  out.seed = options.seed;
  out.placeholder = placeholder;
  out.coefficients.resize(static_cast<std::size_t>(p));
  for (int seg = 0; seg < num_segments; ++seg) {
    const int lo = seg * options.segment_size;
    const int hi = std::min(p, lo + options.segment_size);
    for (int idx = lo; idx < hi; ++idx) {
      out.coefficients[static_cast<std::size_t>(idx)] = solution(1 + seg);
    }
  }
  return out;
}

LimeExplanation lime_explain(const CorrectionModel& model, const TimeSeries& residuals,
                             int t, int p, const LimeOptions& options) {
  if (model.kind() != CorrectionKind::AutoregressiveNet || model.order() != p) {
    throw ConfigError("lime_explain needs an autoregressive correction model of order p");
  }
  return lime_explain(
      [&model](const std::vector<double>& lags) { return model.predict_lags(lags); },
      residuals, t, p, options);
}

}  // namespace bapc
