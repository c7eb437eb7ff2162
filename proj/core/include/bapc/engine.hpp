#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bapc/base_model.hpp"
#include "bapc/correction.hpp"
#include "bapc/fitting.hpp"
#include "bapc/time_series.hpp"

namespace bapc {

struct BapcConfig {
  Family base_family = Family::Constant;
  CorrectionKind correction = CorrectionKind::NearestNeighbor1;
  WindowConfig window;
  FitConfig fit;
  CorrectionOptions correction_options;
};

/// Output of the three BAPC steps on one training window.
struct BapcResult {
  BaseModel theta0;
  BaseModel theta_r;
  std::vector<double> delta_theta;  // theta0 - theta_r, componentwise
  std::vector<double> residuals;    // eps_t over the whole window
  std::vector<double> correction;   // predicted eps over the correction window
  TimeSeries modified_series = TimeSeries({0.0});  // y'; placeholder until Step-3
  WindowConfig window;
  Family base_family = Family::Constant;
  int start_index = 1;
  bool fit_warning = false;               // a fitter stopped before convergence
  std::set<int> removed_step1, removed_step3;  // robust AR(2) outlier rows
};

/// Evaluate the base model at absolute index t; AR2 models are anchored at
/// the window start (relative position t - window_start + 1).
double eval_on_window(const BaseModel& model, double t, int window_start);

/// The three BAPC steps. The series length must equal window.train_size.
/// Correction values inside the window use true lagged residuals (teacher
/// forcing). With r = 0 the Step-3 refit is the Step-1 model exactly.
BapcResult bapc(const TimeSeries& series, const BapcConfig& config);

/// Delta f_r(t) = f_theta0(t) - f_thetar(t) at absolute index t.
double surrogate_correction(const BapcResult& result, double t);

struct AnchorFailure {
  int s = 0;
  std::string message;
};

/// Sliding-window BAPC over anchors s = first+n-1 .. last. Anchors are
/// independent work items merged by index; the correction seed for anchor s
/// is options.seed + s so results match a standalone bapc() on the slice.
struct SbapcResult {
  int train_size = 0;
  int correction_size = 0;
  Family base_family = Family::Constant;
  std::vector<int> anchors;
  std::vector<std::optional<BapcResult>> per_anchor;
  /// surrogate[i][j] = Delta f^{s_i}(s_i - n + 1 + j), j = 0..n-1
  std::vector<std::vector<double>> surrogate;
  std::vector<AnchorFailure> failures;
};

SbapcResult sbapc(const TimeSeries& series, const BapcConfig& config);

struct WindowScanEntry {
  int r = 0;
  double delta_f = 0.0;
  bool ok = false;
  std::string error;
};

struct WindowScanResult {
  int t_eval = 0;
  std::vector<WindowScanEntry> entries;  // r = 0..n
  int argmax_r = 0;                      // maximizes |delta_f| over ok entries
};

/// BAPC for every correction window size r = 0..n, reporting the surrogate
/// correction at t_eval. Per-r failures are recorded and the scan continues.
WindowScanResult window_scan(const TimeSeries& series, Family base_family,
                             CorrectionKind correction, int t_eval,
                             const FitConfig& fit_config = {},
                             const CorrectionOptions& correction_options = {});

/// Deterministic-by-slot parallel loop used by sbapc, window_scan and the
/// attribution heatmaps: items may run on any thread but land in their own
/// output slot.
void parallel_for_index(int count, const std::function<void(int)>& body);

}  // namespace bapc
