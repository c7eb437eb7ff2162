#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bapc/ar2.hpp"
#include "bapc/attribution.hpp"
#include "bapc/errors.hpp"
#include "bapc/synthetic.hpp"
#include "test_helpers.hpp"

using namespace bapc;

namespace {

constexpr double kPi = std::numbers::pi;

BaseModel random_damped(std::mt19937& rng) {
  return make_model(Family::DampedSinusoid,
                    {testing::uniform(rng, 0.5, 2.0), testing::uniform(rng, -0.05, 0.2),
                     testing::uniform(rng, 0.1, 3.0), testing::uniform(rng, 0.0, 2.0 * kPi)});
}

BaseModel random_poly_seasonal(std::mt19937& rng) {
  return make_model(Family::PolySeasonal,
                    {testing::uniform(rng, -2, 2), testing::uniform(rng, -0.5, 0.5),
                     testing::uniform(rng, -0.02, 0.02), testing::uniform(rng, 0.2, 2.0),
                     testing::uniform(rng, 0.0, 2.0 * kPi)});
}

// Central finite difference of theta -> f_theta(t) in coordinate k.
double fd_partial(const BaseModel& model, std::size_t k, double t) {
  const double h = 1e-6 * (1.0 + std::fabs(model.params[k]));
  BaseModel hi = model;
  BaseModel lo = model;
  hi.params[k] += h;
  lo.params[k] -= h;
  return (eval(hi, t) - eval(lo, t)) / (2.0 * h);
}

}  // namespace

TEST_SUITE("attribution") {

TEST_CASE("linear attribution is the componentwise product") {
  {
    const Attribution a = ig_linear({"a"}, {0.5}, {1.0}, 96.0);
    CHECK(a.values[0] == 0.5);
    CHECK(a.completeness_residual == 0.0);
  }
  {
    // the documented two-parameter example: sum must be the surrogate value
    const Attribution a = ig_linear({"a", "b"}, {-6.0, 0.1}, {1.0, 96.0}, 96.0);
    CHECK(a.values[0] == doctest::Approx(-6.0).epsilon(1e-15));
    CHECK(a.values[1] == doctest::Approx(9.6).epsilon(1e-15));
    CHECK(a.sum() == doctest::Approx(3.6).epsilon(1e-12));
  }
  {
    const Attribution a = ig_linear({"a", "b"}, {0.0, 0.0}, {1.0, 5.0}, 5.0);
    CHECK(a.values == std::vector<double>{0.0, 0.0});
  }
}

TEST_CASE("damped-sinusoid closed form: equal endpoints give zeros") {
  std::mt19937 rng(1);
  const BaseModel theta = random_damped(rng);
  const Attribution a = ig_damped_sinusoid(theta, theta, 10.0);
  for (double v : a.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(a.delta_f == 0.0);
}

TEST_CASE("damped-sinusoid closed form agrees with quadrature") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 60; ++trial) {
    const BaseModel theta_r = random_damped(rng);
    BaseModel theta0 = theta_r;
    theta0.params[0] += testing::uniform(rng, -0.3, 0.3);
    theta0.params[1] += testing::uniform(rng, -0.05, 0.05);
    theta0.params[2] += testing::uniform(rng, -0.2, 0.2);
    theta0.params[3] += testing::uniform(rng, -0.4, 0.4);
    theta0 = make_model(Family::DampedSinusoid, theta0.params);
    const double t = testing::uniform(rng, 1.0, 40.0);
    const Attribution closed = ig_damped_sinusoid(theta0, theta_r, t);
    const Attribution quad = ig_quadrature(theta0, theta_r, t);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(testing::close_rel(closed.values[k], quad.values[k], 1e-6, 1e-9));
    }
    CHECK(closed.completeness_residual <= 1e-6 * (1.0 + std::fabs(closed.delta_f)));
  }
}

TEST_CASE("damped-sinusoid attribution is continuous across the fallback") {
  // shrink the endpoint gap so |denominator| crosses 1e-9
  const BaseModel base = make_model(Family::DampedSinusoid, {1.0, 0.05, 1.2, 0.4});
  const double t = 7.0;
  const auto with_gap = [&](double gap) {
    BaseModel theta0 = base;
    // denominator = |-db t + i (dw t + dphi)|; use a pure phi offset
    theta0.params[3] += gap;
    return ig_damped_sinusoid(make_model(Family::DampedSinusoid, theta0.params), base, t);
  };
  const Attribution above = with_gap(2e-9);   // closed form
  const Attribution below = with_gap(0.5e-9); // quadrature fallback
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::fabs(above.values[k] - below.values[k]) <= 1e-6);
  }
}

TEST_CASE("swapping the endpoints flips every component") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const BaseModel theta_r = random_damped(rng);
    BaseModel theta0 = theta_r;
    theta0.params[0] += 0.2;
    theta0.params[2] += 0.15;
    theta0.params[3] += 0.3;
    theta0 = make_model(Family::DampedSinusoid, theta0.params);
    const double t = testing::uniform(rng, 1.0, 30.0);
    const Attribution forward = ig_damped_sinusoid(theta0, theta_r, t);
    const Attribution backward = ig_damped_sinusoid(theta_r, theta0, t);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(std::fabs(forward.values[k] + backward.values[k]) <= 1e-9 *
            (1.0 + std::fabs(forward.values[k])));
    }
  }
}

TEST_CASE("ar2 attribution base cases") {
  const Attribution same = ig_ar2(0.5, -0.3, 0.5, -0.3, 1.0, 2.0, 10);
  for (double v : same.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));

  for (int t : {1, 2}) {
    const Attribution a = ig_ar2(0.7, -0.2, 0.4, -0.5, 1.0, 2.0, t);
    CHECK(a.values[0] == 0.0);
    CHECK(a.values[1] == 0.0);
    CHECK(a.delta_f == 0.0);
  }

  // t = 3: f = phi1 y2 + phi2 y1, so IG = (dphi1 y2, dphi2 y1)
  const Attribution a3 = ig_ar2(0.7, -0.2, 0.4, -0.5, 1.5, 2.5, 3);
  CHECK(a3.values[0] == doctest::Approx(0.3 * 2.5).epsilon(1e-12));
  CHECK(a3.values[1] == doctest::Approx(0.3 * 1.5).epsilon(1e-12));

  CHECK_THROWS_AS(ig_ar2(0.7, -0.2, 0.4, -0.5, 1.0, 2.0, 61), NumericError);
  CHECK_THROWS_AS(ig_ar2(0.7, -0.2, 0.4, -0.5, 1.0, 2.0, 0), ConfigError);
}

TEST_CASE("ar2 closed form agrees with quadrature up to t = 40") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const double p10 = testing::uniform(rng, -1.2, 1.2);
    const double p20 = testing::uniform(rng, -1.2, 1.2);
    const double p1r = testing::uniform(rng, -1.2, 1.2);
    const double p2r = testing::uniform(rng, -1.2, 1.2);
    const double y1 = testing::uniform(rng, -2, 2);
    const double y2 = testing::uniform(rng, -2, 2);
    const int t = 3 + static_cast<int>(rng() % 38u);
    const Attribution closed = ig_ar2(p10, p20, p1r, p2r, y1, y2, t);
    const Attribution quad = ig_quadrature(make_model(Family::AR2, {y1, y2, p10, p20}),
                                           make_model(Family::AR2, {y1, y2, p1r, p2r}),
                                           static_cast<double>(t));
    CHECK(testing::close_rel(closed.values[0], quad.values[2], 1e-6, 1e-9));
    CHECK(testing::close_rel(closed.values[1], quad.values[3], 1e-6, 1e-9));
    CHECK(closed.completeness_residual <= 1e-6 * (1.0 + std::fabs(closed.delta_f)));
  }
}

TEST_CASE("quadrature on a linear family reproduces ig_linear exactly") {
  const BaseModel theta0 = make_model(Family::Linear, {2.0, -0.4});
  const BaseModel theta_r = make_model(Family::Linear, {1.0, 0.3});
  const Attribution quad = ig_quadrature(theta0, theta_r, 12.0);
  const Attribution lin = ig_linear({"a", "b"}, {1.0, -0.7}, {1.0, 12.0}, 12.0);
  CHECK(quad.values[0] == doctest::Approx(lin.values[0]).epsilon(1e-12));
  CHECK(quad.values[1] == doctest::Approx(lin.values[1]).epsilon(1e-12));
  CHECK(*quad.quadrature_error <= 1e-14);
}

TEST_CASE("quadrature of equal endpoints is zero") {
  std::mt19937 rng(5);
  const BaseModel theta = random_poly_seasonal(rng);
  const Attribution a = ig_quadrature(theta, theta, 9.0);
  for (double v : a.values) CHECK(v == 0.0);
}

TEST_CASE("quadrature partials match central finite differences") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    for (Family family : {Family::Linear, Family::PolySeasonal, Family::DampedSinusoid,
                          Family::AR2}) {
      BaseModel model;
      double t = testing::uniform(rng, 2.0, 30.0);
      switch (family) {
        case Family::Linear:
          model = make_model(Family::Linear,
                             {testing::uniform(rng, -2, 2), testing::uniform(rng, -1, 1)});
          break;
        case Family::PolySeasonal:
          model = random_poly_seasonal(rng);
          break;
        case Family::DampedSinusoid:
          model = random_damped(rng);
          break;
        default:
          model = make_model(Family::AR2,
                             {testing::uniform(rng, -2, 2), testing::uniform(rng, -2, 2),
                              testing::uniform(rng, -1.1, 1.1), testing::uniform(rng, -1.1, 1.1)});
          t = static_cast<double>(3 + static_cast<int>(rng() % 28u));
      }
      const std::vector<double> analytic = model_partials(model, t);
      for (std::size_t k = 0; k < model.params.size(); ++k) {
        const double fd = fd_partial(model, k, t);
        CHECK(std::fabs(analytic[k] - fd) <= std::max(1e-5, 1e-4 * std::fabs(analytic[k])));
      }
    }
  }
}

TEST_CASE("poly-seasonal closed form agrees with quadrature") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const BaseModel theta_r = random_poly_seasonal(rng);
    BaseModel theta0 = theta_r;
    theta0.params[0] += testing::uniform(rng, -1, 1);
    theta0.params[1] += testing::uniform(rng, -0.2, 0.2);
    theta0.params[2] += testing::uniform(rng, -0.01, 0.01);
    theta0.params[3] += testing::uniform(rng, -0.3, 0.3);
    theta0.params[4] += testing::uniform(rng, -0.5, 0.5);
    theta0 = make_model(Family::PolySeasonal, theta0.params);
    const double t = testing::uniform(rng, 1.0, 60.0);
    const Attribution closed = ig_poly_seasonal(theta0, theta_r, t);
    const Attribution quad = ig_quadrature(theta0, theta_r, t);
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK(testing::close_rel(closed.values[k], quad.values[k], 1e-6, 1e-9));
    }
    CHECK(closed.completeness_residual <= 1e-6 * (1.0 + std::fabs(closed.delta_f)));
  }
}

TEST_CASE("attribute dispatch keeps completeness on engine results") {
  const TimeSeries series = generate(SyntheticSpec::defaults(SyntheticKind::SinFcp));
  BapcConfig config;
  config.base_family = Family::AR2;
  config.correction = CorrectionKind::NearestNeighbor1;
  config.window = WindowConfig{160, 80};
  const BapcResult result = bapc::bapc(series, config);
  for (double t : {3.0, 40.0, 60.0, 100.0, 160.0}) {
    const Attribution a = attribute(result, t);
    CHECK(a.completeness_residual <= 1e-6 * (1.0 + std::fabs(a.delta_f)));
    REQUIRE(a.values.size() == 4);
    CHECK(a.values[0] == 0.0);  // y1, y2 unchanged by the correction window
    CHECK(a.values[1] == 0.0);
  }
}

TEST_CASE("heatmaps: constant input attributes nothing") {
  const TimeSeries series(std::vector<double>(40, 2.0), 1);
  BapcConfig config;
  config.base_family = Family::Constant;
  config.correction = CorrectionKind::NearestNeighbor1;
  config.window = WindowConfig{20, 8};
  const SbapcResult sweep = sbapc(series, config);
  const IgHeatmaps maps = ig_heatmaps(sweep);
  REQUIRE(maps.per_param.size() == 1);
  for (const auto& row : maps.per_param[0]) {
    for (double v : row) CHECK(v == 0.0);
  }
  CHECK(maps.cell_failures.empty());
}

TEST_CASE("heatmaps: one-parameter family equals the surrogate matrix") {
  SyntheticSpec spec = SyntheticSpec::defaults(SyntheticKind::Step);
  spec.n = 140;
  spec.change_index = 71;
  const TimeSeries series = generate(spec);
  BapcConfig config;
  config.base_family = Family::Constant;
  config.correction = CorrectionKind::NearestNeighbor1;
  config.window = WindowConfig{60, 30};
  const SbapcResult sweep = sbapc(series, config);
  const IgHeatmaps maps = ig_heatmaps(sweep);
  for (std::size_t i = 0; i < sweep.anchors.size(); ++i) {
    for (std::size_t j = 0; j < sweep.surrogate[i].size(); ++j) {
      CHECK(maps.per_param[0][i][j] == doctest::Approx(sweep.surrogate[i][j]).epsilon(1e-12));
      CHECK(maps.completeness[i][j] <= 1e-12);
    }
  }
}

TEST_CASE("heatmaps: multi-parameter cells sum to the surrogate") {
  const TimeSeries air_like = [] {
    std::vector<double> v;
    for (int t = 1; t <= 72; ++t) {
      v.push_back(100.0 + 2.0 * t + 0.05 * t * t + 10.0 * std::cos(2.0 * kPi * t / 12.0 + 0.4) +
                  (t % 7 == 0 ? 3.0 : 0.0));
    }
    return TimeSeries(v, 1);
  }();
  BapcConfig config;
  config.base_family = Family::PolySeasonal;
  config.correction = CorrectionKind::NearestNeighbor1;
  config.window = WindowConfig{48, 12};
  const SbapcResult sweep = sbapc(air_like, config);
  const IgHeatmaps maps = ig_heatmaps(sweep);
  REQUIRE(maps.per_param.size() == 5);
  CHECK(maps.cell_failures.empty());
  for (std::size_t i = 0; i < sweep.anchors.size(); ++i) {
    for (std::size_t j = 0; j < sweep.surrogate[i].size(); ++j) {
      double total = 0.0;
      for (std::size_t k = 0; k < 5; ++k) total += maps.per_param[k][i][j];
      CHECK(std::fabs(total - sweep.surrogate[i][j]) <=
            1e-6 * (1.0 + std::fabs(sweep.surrogate[i][j])));
    }
  }
}

}  // TEST_SUITE
