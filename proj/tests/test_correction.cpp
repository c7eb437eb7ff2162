#include <doctest.h>

#include <cmath>

#include "bapc/correction.hpp"
#include "bapc/errors.hpp"
#include "test_helpers.hpp"

using namespace bapc;

TEST_SUITE("correction") {

TEST_CASE("nearest neighbor reproduces every training residual") {
  std::mt19937 rng(3);
  const TimeSeries residuals = testing::random_series(rng, 30, -1, 1, 4);
  const CorrectionModel model = fit_correction(CorrectionKind::NearestNeighbor1, residuals);
  double loss = 0.0;
  for (int t = residuals.start_index(); t <= residuals.last_index(); ++t) {
    const double prediction = predict_correction(model, t, residuals);
    CHECK(prediction == residuals.at(t));
    loss += (prediction - residuals.at(t)) * (prediction - residuals.at(t));
  }
  CHECK(loss == 0.0);
}

TEST_CASE("nearest neighbor breaks ties toward the earlier index") {
  const CorrectionModel model =
      CorrectionModel::nearest_neighbor_from_pairs({{1, 2.0}, {3, 4.0}});
  const TimeSeries dummy({0.0}, 1);
  CHECK(model.predict(2, dummy) == 2.0);
  CHECK(model.predict(1, dummy) == 2.0);
  CHECK(model.predict(3, dummy) == 4.0);
  CHECK(model.predict(100, dummy) == 4.0);
  CHECK(model.predict(-5, dummy) == 2.0);
}

TEST_CASE("autoregressive net is deterministic for a fixed seed") {
  std::mt19937 rng(8);
  const TimeSeries residuals = testing::random_series(rng, 40, -1, 1);
  CorrectionOptions options;
  options.order = 4;
  options.seed = 99;
  options.epochs = 50;
  const CorrectionModel a = fit_correction(CorrectionKind::AutoregressiveNet, residuals, options);
  const CorrectionModel b = fit_correction(CorrectionKind::AutoregressiveNet, residuals, options);
  for (int t = residuals.start_index() + 4; t <= residuals.last_index(); ++t) {
    const double pa = predict_correction(a, t, residuals);
    const double pb = predict_correction(b, t, residuals);
    CHECK(pa == pb);  // bit identical
  }
}

TEST_CASE("autoregressive net trained on zero residuals predicts near zero") {
  const TimeSeries zeros(std::vector<double>(60, 0.0), 1);
  CorrectionOptions options;
  options.seed = 42;
  const CorrectionModel model = fit_correction(CorrectionKind::AutoregressiveNet, zeros, options);
  for (int t = 13; t <= 60; ++t) {
    CHECK(std::fabs(predict_correction(model, t, zeros)) <= 1e-3);
  }
}

TEST_CASE("autoregressive net learns a first-order linear map") {
  // eps_t = 0.5 eps_{t-1} from eps_1 = 1
  std::vector<double> v;
  double x = 1.0;
  for (int i = 0; i < 14; ++i) {
    v.push_back(x);
    x *= 0.5;
  }
  const TimeSeries residuals(v, 1);
  CorrectionOptions options;
  options.order = 1;
  options.hidden = 16;
  options.epochs = 500;
  options.learning_rate = 0.01;
  options.seed = 7;
  const CorrectionModel model =
      fit_correction(CorrectionKind::AutoregressiveNet, residuals, options);
  for (int t = 2; t <= 14; ++t) {
    const double lag = residuals.at(t - 1);
    CHECK(std::fabs(predict_correction(model, t, residuals) - 0.5 * lag) <= 5e-2);
  }
}

TEST_CASE("predictions are pure: repeated calls agree bitwise") {
  std::mt19937 rng(12);
  const TimeSeries residuals = testing::random_series(rng, 30, -2, 2);
  CorrectionOptions options;
  options.order = 3;
  options.epochs = 20;
  const CorrectionModel net =
      fit_correction(CorrectionKind::AutoregressiveNet, residuals, options);
  const double first = predict_correction(net, 20, residuals);
  for (int repeat = 0; repeat < 5; ++repeat) {
    CHECK(predict_correction(net, 20, residuals) == first);
  }
}

TEST_CASE("missing lags and insufficient data raise errors") {
  std::mt19937 rng(13);
  const TimeSeries residuals = testing::random_series(rng, 20, -1, 1);
  CorrectionOptions options;
  options.order = 6;
  options.epochs = 5;
  const CorrectionModel net =
      fit_correction(CorrectionKind::AutoregressiveNet, residuals, options);
  CHECK_THROWS_AS(predict_correction(net, 4, residuals), ConfigError);

  CorrectionOptions too_big;
  too_big.order = 25;
  CHECK_THROWS_AS(fit_correction(CorrectionKind::AutoregressiveNet, residuals, too_big),
                  ConfigError);
}

}  // TEST_SUITE
