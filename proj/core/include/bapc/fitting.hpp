#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bapc/base_model.hpp"
#include "bapc/time_series.hpp"

namespace bapc {

struct FitConfig {
  int max_iterations = 200;
  double convergence_tolerance = 1e-10;  // relative parameter change
  /// Multi-start omega seeds for DampedSinusoid. Empty selects the default
  /// 16 values log-spaced in [2 pi / n, pi].
  std::vector<double> frequency_grid;
  bool robust = false;      // AR2: route fit() through the robust variant
  double robust_k = 3.0;    // MAD multiplier for outlier removal
  std::uint64_t seed = 0;
  double period = 12.0;     // PolySeasonal period
  /// Parameters pinned to fixed values during fitting, keyed by name
  /// (e.g. {"beta": 0.0, "omega": 2 pi / 24} for a pure sinusoid).
  std::map<std::string, double> fixed_params;
  /// Additional full-parameter starting points for the multi-start search.
  std::vector<std::vector<double>> warm_starts;

  void validate() const;
};

struct FitReport {
  BaseModel model;
  bool converged = true;
  int iterations = 0;
  double sse = 0.0;
};

/// Least-squares fit of the family to the series, indexed by the series'
/// absolute indices (AR2 uses window-relative positions for its recursion
/// seed). Linear-in-parameter families are solved exactly; DampedSinusoid
/// runs damped Gauss-Newton from every frequency-grid start.
FitReport fit_detailed(Family family, const TimeSeries& series, const FitConfig& config = {});
BaseModel fit(Family family, const TimeSeries& series, const FitConfig& config = {});

struct RobustAr2Fit {
  BaseModel model;
  /// Absolute target indices t of lag rows removed as outliers.
  std::set<int> removed_indices;
};

/// Iterative AR(2) least squares with residual-MAD outlier removal
/// (threshold robust_k * MAD, at most 10 refit rounds). y1, y2 are taken
/// from the first two observations, never fitted.
RobustAr2Fit fit_ar2_robust(const TimeSeries& series, const FitConfig& config = {});

}  // namespace bapc
