#include "bapc/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "bapc/errors.hpp"

namespace bapc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_length(const TimeSeries& series, std::size_t params, const char* what) {
  if (series.size() < params) {
    throw FitError(std::string(what) + ": series of length " + std::to_string(series.size()) +
                   " cannot identify " + std::to_string(params) + " parameters");
  }
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& design, const Eigen::VectorXd& rhs,
                                    const char* what) {
  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < design.cols()) {
    throw FitError(std::string(what) + ": singular design matrix");
  }
  return qr.solve(rhs);
}

double sse_of(const BaseModel& model, const TimeSeries& series) {
  double sum = 0.0;
  for (int t = series.start_index(); t <= series.last_index(); ++t) {
    const double r = series.at(t) - eval(model, t);
    sum += r * r;
  }
  return sum;
}

FitReport fit_constant(const TimeSeries& series) {
  double sum = 0.0;
  for (double v : series.values()) sum += v;
  const double mean = sum / static_cast<double>(series.size());
  FitReport report;
  report.model = make_model(Family::Constant, {mean});
  report.sse = sse_of(report.model, series);
  return report;
}

FitReport fit_linear(const TimeSeries& series) {
  require_length(series, 2, "linear fit");
  const auto n = static_cast<Eigen::Index>(series.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = series.start_index() + static_cast<double>(i);
    design(i, 0) = 1.0;
    design(i, 1) = t;
    rhs(i) = series.values()[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = solve_least_squares(design, rhs, "linear fit");
  FitReport report;
  report.model = make_model(Family::Linear, {coef(0), coef(1)});
  report.sse = (rhs - design * coef).squaredNorm();
  return report;
}

FitReport fit_poly_seasonal(const TimeSeries& series, const FitConfig& config) {
  require_length(series, 5, "polyseasonal fit");
  const double omega = 2.0 * kPi / config.period;
  const auto n = static_cast<Eigen::Index>(series.size());
  Eigen::MatrixXd design(n, 5);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = series.start_index() + static_cast<double>(i);
    design(i, 0) = 1.0;
    design(i, 1) = t;
    design(i, 2) = t * t;
    design(i, 3) = std::cos(omega * t);
    design(i, 4) = std::sin(omega * t);
    rhs(i) = series.values()[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = solve_least_squares(design, rhs, "polyseasonal fit");
  // a cos + b sin == alpha cos(. + phi) with alpha cos phi = a, alpha sin phi = -b
  const double alpha = std::hypot(coef(3), coef(4));
  const double phi = alpha > 0.0 ? normalize_angle(std::atan2(-coef(4), coef(3))) : 0.0;
  FitReport report;
  report.model = make_model(Family::PolySeasonal, {coef(0), coef(1), coef(2), alpha, phi},
                            config.period);
  report.sse = (rhs - design * coef).squaredNorm();
  return report;
}

// ---------------------------------------------------------------------------
// Damped sinusoid: multi-start damped Gauss-Newton with analytic Jacobian.
// ---------------------------------------------------------------------------

using Theta = std::array<double, 4>;  // alpha, beta, omega, phi

struct FreeMask {
  std::array<bool, 4> free = {true, true, true, true};
  std::array<double, 4> fixed_value = {0, 0, 0, 0};
  int count() const {
    int c = 0;
    for (bool f : free) c += f ? 1 : 0;
    return c;
  }
};

FreeMask mask_from_config(const FitConfig& config) {
  FreeMask mask;
  const auto& names = param_names(Family::DampedSinusoid);
  for (const auto& [name, value] : config.fixed_params) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw ConfigError("cannot fix unknown sinusoid parameter '" + name + "'");
    }
    const auto idx = static_cast<std::size_t>(it - names.begin());
    mask.free[idx] = false;
    mask.fixed_value[idx] = value;
  }
  return mask;
}

double damped_eval(const Theta& th, double t) {
  return th[0] * std::exp(-th[1] * t) * std::cos(th[2] * t + th[3]);
}

double damped_sse(const Theta& th, const TimeSeries& series) {
  double sum = 0.0;
  for (int t = series.start_index(); t <= series.last_index(); ++t) {
    const double r = series.at(t) - damped_eval(th, t);
    sum += r * r;
  }
  return sum;
}

// Amplitude/phase from an exact linear solve at fixed (beta, omega).
void seed_amplitude_phase(const TimeSeries& series, double beta, double omega,
                          double* alpha, double* phi) {
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
  Eigen::Vector2d moment = Eigen::Vector2d::Zero();
  for (int t = series.start_index(); t <= series.last_index(); ++t) {
    const double decay = std::exp(-beta * t);
    const double c = decay * std::cos(omega * t);
    const double s = decay * std::sin(omega * t);
    gram(0, 0) += c * c;
    gram(0, 1) += c * s;
    gram(1, 1) += s * s;
    moment(0) += c * series.at(t);
    moment(1) += s * series.at(t);
  }
  gram(1, 0) = gram(0, 1);
  if (std::fabs(gram.determinant()) < 1e-30) {
    *alpha = 1.0;
    *phi = 0.0;
    return;
  }
  const Eigen::Vector2d ab = gram.ldlt().solve(moment);
  *alpha = std::hypot(ab(0), ab(1));
  *phi = *alpha > 0.0 ? std::atan2(-ab(1), ab(0)) : 0.0;
}

struct LmOutcome {
  Theta theta;
  double sse = 0.0;
  bool converged = false;
  int iterations = 0;
};

LmOutcome levenberg_marquardt(const TimeSeries& series, Theta theta, const FreeMask& mask,
                              const FitConfig& config) {
  const int nf = mask.count();
  LmOutcome out;
  out.theta = theta;
  out.sse = damped_sse(theta, series);
  if (nf == 0) {
    out.converged = true;
    return out;
  }

  std::vector<int> free_idx;
  for (int j = 0; j < 4; ++j) {
    if (mask.free[static_cast<std::size_t>(j)]) free_idx.push_back(j);
  }

  const auto n = static_cast<Eigen::Index>(series.size());
  Eigen::MatrixXd jac(n, nf);
  Eigen::VectorXd resid(n);
  double lambda = 1e-3;

  for (int iter = 0; iter < config.max_iterations; ++iter) {
    out.iterations = iter + 1;
    const Theta& th = out.theta;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = series.start_index() + static_cast<double>(i);
      const double decay = std::exp(-th[1] * t);
      const double angle = th[2] * t + th[3];
      const double c = std::cos(angle);
      const double s = std::sin(angle);
      resid(i) = series.values()[static_cast<std::size_t>(i)] - th[0] * decay * c;
      const std::array<double, 4> partials = {
          decay * c,                    // d f / d alpha
          -t * th[0] * decay * c,       // d f / d beta
          -t * th[0] * decay * s,       // d f / d omega
          -th[0] * decay * s,           // d f / d phi
      };
      for (int j = 0; j < nf; ++j) {
        jac(i, j) = partials[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(j)])];
      }
    }
    const Eigen::MatrixXd hessian = jac.transpose() * jac;
    const Eigen::VectorXd gradient = jac.transpose() * resid;
    if (gradient.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + out.sse)) {
      out.converged = true;
      break;
    }

    bool stepped = false;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd damped = hessian;
      for (int j = 0; j < nf; ++j) {
        damped(j, j) += lambda * std::max(hessian(j, j), 1e-12);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(gradient);
      Theta candidate = out.theta;
      for (int j = 0; j < nf; ++j) {
        candidate[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(j)])] += step(j);
      }
      const double candidate_sse = damped_sse(candidate, series);
      if (std::isfinite(candidate_sse) && candidate_sse < out.sse) {
        double max_rel_change = 0.0;
        for (int j = 0; j < nf; ++j) {
          const auto idx = static_cast<std::size_t>(free_idx[static_cast<std::size_t>(j)]);
          max_rel_change = std::max(
              max_rel_change, std::fabs(step(j)) / (1.0 + std::fabs(out.theta[idx])));
        }
        out.theta = candidate;
        out.sse = candidate_sse;
        lambda = std::max(lambda / 3.0, 1e-15);
        stepped = true;
        if (max_rel_change < config.convergence_tolerance) {
          out.converged = true;
        }
        break;
      }
      lambda = std::min(lambda * 2.5, 1e15);
    }
    if (!stepped || out.converged) {
      // no improving step within the damping schedule counts as converged to
      // a local minimum
      if (!stepped) out.converged = true;
      break;
    }
  }
  return out;
}

std::vector<double> default_frequency_grid(std::size_t n) {
  const double lo = 2.0 * kPi / static_cast<double>(n);
  const double hi = kPi;
  std::vector<double> grid(16);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(grid.size() - 1);
    grid[k] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  return grid;
}

// Canonicalize: alpha >= 0, omega folded into (0, pi], phi in [0, 2pi).
// Only free coordinates are touched.
Theta canonicalize(Theta th, const FreeMask& mask) {
  if (th[0] < 0.0 && mask.free[0] && mask.free[3]) {
    th[0] = -th[0];
    th[3] += kPi;
  }
  if (th[2] < 0.0 && mask.free[2] && mask.free[3]) {
    th[2] = -th[2];
    th[3] = -th[3];
  }
  if (mask.free[2] && mask.free[3]) {
    th[2] = std::fmod(th[2], 2.0 * kPi);
    if (th[2] < 0.0) th[2] += 2.0 * kPi;
    if (th[2] > kPi) {
      th[2] = 2.0 * kPi - th[2];
      th[3] = -th[3];
    }
  }
  if (mask.free[3]) th[3] = normalize_angle(th[3]);
  return th;
}

FitReport fit_damped_sinusoid(const TimeSeries& series, const FitConfig& config) {
  require_length(series, 4, "sinusoid fit");
  const FreeMask mask = mask_from_config(config);

  // With beta and omega pinned the model is linear in (alpha cos phi,
  // alpha sin phi); solve exactly.
  if (!mask.free[1] && !mask.free[2] && mask.free[0] && mask.free[3]) {
    double alpha = 0.0;
    double phase = 0.0;
    seed_amplitude_phase(series, mask.fixed_value[1], mask.fixed_value[2], &alpha, &phase);
    if (alpha <= 0.0) {
      throw FitError("sinusoid fit: degenerate zero amplitude");
    }
    FitReport report;
    report.model = make_model(Family::DampedSinusoid,
                              {alpha, mask.fixed_value[1], mask.fixed_value[2],
                               normalize_angle(phase)});
    report.sse = sse_of(report.model, series);
    return report;
  }

  std::vector<Theta> starts;
  std::vector<double> grid = config.frequency_grid.empty()
                                 ? default_frequency_grid(series.size())
                                 : config.frequency_grid;
  if (!mask.free[2]) grid = {mask.fixed_value[2]};
  if (grid.empty()) {
    throw ConfigError("sinusoid fit requires a non-empty frequency grid");
  }
  for (double omega : grid) {
    Theta th = {1.0, mask.free[1] ? 0.0 : mask.fixed_value[1], omega,
                mask.free[3] ? 0.0 : mask.fixed_value[3]};
    double alpha = 1.0;
    double phase = 0.0;
    seed_amplitude_phase(series, th[1], omega, &alpha, &phase);
    th[0] = mask.free[0] ? std::max(alpha, 1e-12) : mask.fixed_value[0];
    if (mask.free[3]) th[3] = phase;
    starts.push_back(th);
  }
  for (const auto& warm : config.warm_starts) {
    if (warm.size() != 4) {
      throw ConfigError("sinusoid warm start must have 4 parameters");
    }
    Theta th = {warm[0], warm[1], warm[2], warm[3]};
    for (std::size_t j = 0; j < 4; ++j) {
      if (!mask.free[j]) th[j] = mask.fixed_value[j];
    }
    starts.push_back(th);
  }

  LmOutcome best;
  best.sse = std::numeric_limits<double>::infinity();
  for (const Theta& start : starts) {
    const LmOutcome outcome = levenberg_marquardt(series, start, mask, config);
    if (outcome.sse < best.sse) {
      best = outcome;
    }
  }
  const Theta th = canonicalize(best.theta, mask);
  if (!(th[0] > 0.0)) {
    throw FitError("sinusoid fit: non-positive amplitude at optimum");
  }
  if (!(th[2] > 0.0)) {
    throw FitError("sinusoid fit: non-positive frequency at optimum");
  }
  FitReport report;
  report.model = make_model(Family::DampedSinusoid, {th[0], th[1], th[2], th[3]});
  report.converged = best.converged;
  report.iterations = best.iterations;
  report.sse = best.sse;
  return report;
}

// ---------------------------------------------------------------------------
// AR(2)
// ---------------------------------------------------------------------------

struct Ar2Row {
  int index;
  double target, lag1, lag2;
};

std::vector<Ar2Row> ar2_rows(const TimeSeries& series) {
  std::vector<Ar2Row> rows;
  rows.reserve(series.size());
  for (int t = series.start_index() + 2; t <= series.last_index(); ++t) {
    rows.push_back({t, series.at(t), series.at(t - 1), series.at(t - 2)});
  }
  return rows;
}

std::pair<double, double> ar2_ols(const std::vector<Ar2Row>& rows) {
  if (rows.size() < 2) {
    throw FitError("AR(2) fit: fewer than two usable lag rows");
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = rows[i].lag1;
    design(static_cast<Eigen::Index>(i), 1) = rows[i].lag2;
    rhs(static_cast<Eigen::Index>(i)) = rows[i].target;
  }
  const Eigen::VectorXd coef = solve_least_squares(design, rhs, "AR(2) fit");
  return {coef(0), coef(1)};
}

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

FitReport fit_ar2_plain(const TimeSeries& series) {
  require_length(series, 4, "AR(2) fit");
  const auto rows = ar2_rows(series);
  const auto [phi1, phi2] = ar2_ols(rows);
  FitReport report;
  report.model = make_model(Family::AR2,
                            {series.values()[0], series.values()[1], phi1, phi2});
  double sum = 0.0;
  for (const auto& row : rows) {
    const double r = row.target - phi1 * row.lag1 - phi2 * row.lag2;
    sum += r * r;
  }
  report.sse = sum;
  return report;
}

}  // namespace

void FitConfig::validate() const {
  if (!(convergence_tolerance > 0.0)) {
    throw ConfigError("convergence_tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw ConfigError("max_iterations must be positive");
  }
  if (!(robust_k > 0.0)) {
    throw ConfigError("robust_k must be positive");
  }
}

RobustAr2Fit fit_ar2_robust(const TimeSeries& series, const FitConfig& config) {
  config.validate();
  if (series.size() < 5) {
    throw FitError("robust AR(2) fit requires at least 5 observations");
  }
  auto rows = ar2_rows(series);
  double scale = 1.0;
  for (const auto& row : rows) scale = std::max(scale, std::fabs(row.target));

  RobustAr2Fit out;
  std::pair<double, double> coef{0.0, 0.0};
  for (int round = 0; round < 10; ++round) {
    coef = ar2_ols(rows);
    std::vector<double> residuals(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      residuals[i] = rows[i].target - coef.first * rows[i].lag1 - coef.second * rows[i].lag2;
    }
    const double med = median_of(residuals);
    std::vector<double> deviations(residuals.size());
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      deviations[i] = std::fabs(residuals[i] - med);
    }
    const double mad = median_of(deviations);
    if (mad <= 1e-12 * scale) break;  // residuals at numerical noise level
    const double threshold = config.robust_k * mad;
    std::vector<Ar2Row> kept;
    kept.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (std::fabs(residuals[i]) > threshold) {
        out.removed_indices.insert(rows[i].index);
      } else {
        kept.push_back(rows[i]);
      }
    }
    if (kept.size() == rows.size()) break;
    if (kept.size() < 2) {
      throw FitError("robust AR(2) fit: outlier removal left fewer than two rows");
    }
    rows = std::move(kept);
  }
  coef = ar2_ols(rows);
  out.model = make_model(Family::AR2,
                         {series.values()[0], series.values()[1], coef.first, coef.second});
  return out;
}

FitReport fit_detailed(Family family, const TimeSeries& series, const FitConfig& config) {
  config.validate();
  switch (family) {
    case Family::Constant:
      return fit_constant(series);
    case Family::Linear:
      return fit_linear(series);
    case Family::PolySeasonal:
      return fit_poly_seasonal(series, config);
    case Family::DampedSinusoid:
      return fit_damped_sinusoid(series, config);
    case Family::AR2:
      if (config.robust) {
        FitReport report;
        report.model = fit_ar2_robust(series, config).model;
        report.sse = 0.0;
        return report;
      }
      return fit_ar2_plain(series);
  }
  throw ConfigError("unknown family");
}

BaseModel fit(Family family, const TimeSeries& series, const FitConfig& config) {
  return fit_detailed(family, series, config).model;
}

}  // namespace bapc
