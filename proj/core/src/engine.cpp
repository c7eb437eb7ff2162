#include "bapc/engine.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "bapc/errors.hpp"

namespace bapc {

double eval_on_window(const BaseModel& model, double t, int window_start) {
  if (model.family == Family::AR2) {
    return eval(model, t - static_cast<double>(window_start) + 1.0);
  }
  return eval(model, t);
}

BapcResult bapc(const TimeSeries& series, const BapcConfig& config) {
  config.window.validate();
  config.fit.validate();
  const int n = config.window.train_size;
  const int r = config.window.correction_size;
  if (static_cast<int>(series.size()) != n) {
    throw ConfigError("bapc: series length " + std::to_string(series.size()) +
                      " does not match train_size " + std::to_string(n));
  }
  const int start = series.start_index();
  const int last = series.last_index();

  BapcResult result;
  result.window = config.window;
  result.base_family = config.base_family;
  result.start_index = start;

  // Step-1: first application of the base model
  if (config.base_family == Family::AR2) {
    auto robust = fit_ar2_robust(series, config.fit);
    result.theta0 = std::move(robust.model);
    result.removed_step1 = std::move(robust.removed_indices);
  } else {
    auto report = fit_detailed(config.base_family, series, config.fit);
    result.theta0 = std::move(report.model);
    result.fit_warning = result.fit_warning || !report.converged;
  }

  result.residuals.reserve(static_cast<std::size_t>(n));
  for (int t = start; t <= last; ++t) {
    result.residuals.push_back(series.at(t) - eval_on_window(result.theta0, t, start));
  }
  const TimeSeries residual_series(result.residuals, start);

  // Step-2: correction model on the residuals
  const CorrectionModel correction =
      fit_correction(config.correction, residual_series, config.correction_options);

  // Step-3: subtract the correction on the window and refit
  std::vector<double> modified = series.values();
  result.correction.reserve(static_cast<std::size_t>(r));
  for (int t = last - r + 1; t <= last; ++t) {
    const double predicted = predict_correction(correction, t, residual_series);
    result.correction.push_back(predicted);
    modified[static_cast<std::size_t>(t - start)] -= predicted;
  }
  result.modified_series = TimeSeries(std::move(modified), start,
                                      series.has_labels() ? series.labels()
                                                          : std::vector<std::string>{});

  if (r == 0) {
    result.theta_r = result.theta0;
  } else if (config.base_family == Family::AR2) {
    auto robust = fit_ar2_robust(result.modified_series, config.fit);
    result.theta_r = std::move(robust.model);
    result.removed_step3 = std::move(robust.removed_indices);
  } else {
    FitConfig refit = config.fit;
    if (config.base_family == Family::DampedSinusoid) {
      refit.warm_starts.push_back(result.theta0.params);
    }
    auto report = fit_detailed(config.base_family, result.modified_series, refit);
    result.theta_r = std::move(report.model);
    result.fit_warning = result.fit_warning || !report.converged;
  }

  result.delta_theta.resize(result.theta0.params.size());
  for (std::size_t k = 0; k < result.delta_theta.size(); ++k) {
    result.delta_theta[k] = result.theta0.params[k] - result.theta_r.params[k];
  }
  return result;
}

double surrogate_correction(const BapcResult& result, double t) {
  return eval_on_window(result.theta0, t, result.start_index) -
         eval_on_window(result.theta_r, t, result.start_index);
}

void parallel_for_index(int count, const std::function<void(int)>& body) {
  if (count <= 0) return;
  const unsigned hardware = std::max(1u, std::thread::hardware_concurrency());
  const int workers = static_cast<int>(std::min<unsigned>({hardware, 8u,
                                                           static_cast<unsigned>(count)}));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        body(i);
      }
    });
  }
  for (auto& thread : pool) thread.join();
}

SbapcResult sbapc(const TimeSeries& series, const BapcConfig& config) {
  config.window.validate();
  const int n = config.window.train_size;
  const int m = static_cast<int>(series.size());
  if (n > m) {
    throw ConfigError("sbapc: train_size exceeds series length");
  }
  const int first_anchor = series.start_index() + n - 1;
  const int last_anchor = series.last_index();

  SbapcResult out;
  out.train_size = n;
  out.correction_size = config.window.correction_size;
  out.base_family = config.base_family;
  for (int s = first_anchor; s <= last_anchor; ++s) out.anchors.push_back(s);
  const int count = static_cast<int>(out.anchors.size());
  out.per_anchor.resize(static_cast<std::size_t>(count));
  out.surrogate.assign(static_cast<std::size_t>(count),
                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::vector<std::optional<AnchorFailure>> failures(static_cast<std::size_t>(count));

  parallel_for_index(count, [&](int i) {
    const int s = out.anchors[static_cast<std::size_t>(i)];
    try {
      BapcConfig anchor_config = config;
      anchor_config.correction_options.seed =
          config.correction_options.seed + static_cast<std::uint64_t>(s);
      const TimeSeries window = slice(series, s - n + 1, s);
      BapcResult result = bapc(window, anchor_config);
      auto& row = out.surrogate[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) {
        row[static_cast<std::size_t>(j)] = surrogate_correction(result, s - n + 1 + j);
      }
      out.per_anchor[static_cast<std::size_t>(i)] = std::move(result);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(i)] = AnchorFailure{s, e.what()};
      auto& row = out.surrogate[static_cast<std::size_t>(i)];
      row.assign(row.size(), std::numeric_limits<double>::quiet_NaN());
    }
  });
  for (const auto& failure : failures) {
    if (failure) out.failures.push_back(*failure);
  }
  return out;
}

WindowScanResult window_scan(const TimeSeries& series, Family base_family,
                             CorrectionKind correction, int t_eval,
                             const FitConfig& fit_config,
                             const CorrectionOptions& correction_options) {
  if (!series.contains(t_eval)) {
    throw ConfigError("window_scan: t_eval outside the series range");
  }
  const int n = static_cast<int>(series.size());
  WindowScanResult out;
  out.t_eval = t_eval;
  out.entries.resize(static_cast<std::size_t>(n + 1));

  parallel_for_index(n + 1, [&](int r) {
    auto& entry = out.entries[static_cast<std::size_t>(r)];
    entry.r = r;
    try {
      BapcConfig config;
      config.base_family = base_family;
      config.correction = correction;
      config.window = WindowConfig{n, r};
      config.fit = fit_config;
      config.correction_options = correction_options;
      const BapcResult result = bapc(series, config);
      entry.delta_f = surrogate_correction(result, t_eval);
      entry.ok = true;
    } catch (const std::exception& e) {
      entry.ok = false;
      entry.error = e.what();
      entry.delta_f = std::numeric_limits<double>::quiet_NaN();
    }
  });

  double best = -1.0;
  for (const auto& entry : out.entries) {
    if (entry.ok && std::fabs(entry.delta_f) > best) {
      best = std::fabs(entry.delta_f);
      out.argmax_r = entry.r;
    }
  }
  return out;
}

}  // namespace bapc
