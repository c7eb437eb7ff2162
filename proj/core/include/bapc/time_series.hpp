#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bapc {

/// Finite real-valued sequence indexed by consecutive absolute indices
/// start_index .. start_index + n - 1, with optional calendar labels.
///
/// Immutable after construction; every value is checked to be finite and
/// labels, when present, must have exactly one entry per value.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values, int start_index = 1,
                      std::vector<std::string> labels = {});

  int start_index() const { return start_; }
  int last_index() const { return start_ + static_cast<int>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }

  /// Value at absolute index t. Throws ConfigError when t is out of range.
  double at(int t) const;
  bool contains(int t) const { return t >= start_ && t <= last_index(); }

  const std::vector<double>& values() const { return values_; }
  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  /// Label at absolute index t; empty string when the series is unlabeled.
  std::string label_at(int t) const;

 private:
  std::vector<double> values_;
  std::vector<std::string> labels_;
  int start_ = 1;
};

/// Contiguous sub-series [first, last], preserving absolute indexing and labels.
TimeSeries slice(const TimeSeries& series, int first, int last);

/// Training window of size n whose most recent r samples form the
/// correction window.
struct WindowConfig {
  int train_size = 0;       // n
  int correction_size = 0;  // r, 0 <= r <= n

  void validate() const;
};

struct LagRow {
  int index = 0;             // absolute index t of the target
  double target = 0.0;       // value at t
  std::vector<double> lags;  // (x_{t-1}, ..., x_{t-p}), most recent first
};

/// Autoregressive design of order p: one row per index t = start+p .. last.
struct LagMatrix {
  int order = 0;
  std::vector<LagRow> rows;
};

LagMatrix build_lag_matrix(const TimeSeries& series, int p);

/// CSV reader accepting a single value column (optional header "value") or
/// two columns with header "t,value" (consecutive integer index) or
/// "label,value". Non-numeric value rows are rejected.
TimeSeries read_series_csv(std::istream& in);
TimeSeries read_series_csv(const std::string& path);

}  // namespace bapc
