#include "bapc/time_series.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bapc/errors.hpp"

namespace bapc {

TimeSeries::TimeSeries(std::vector<double> values, int start_index,
                       std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)), start_(start_index) {
  if (values_.empty()) {
    throw ConfigError("time series must contain at least one value");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw ConfigError("non-finite value at position " + std::to_string(i));
    }
  }
  if (!labels_.empty() && labels_.size() != values_.size()) {
    throw ConfigError("label count (" + std::to_string(labels_.size()) +
                      ") does not match value count (" + std::to_string(values_.size()) + ")");
  }
}

double TimeSeries::at(int t) const {
  if (!contains(t)) {
    throw ConfigError("index " + std::to_string(t) + " outside series range [" +
                      std::to_string(start_) + ", " + std::to_string(last_index()) + "]");
  }
  return values_[static_cast<std::size_t>(t - start_)];
}

std::string TimeSeries::label_at(int t) const {
  if (!contains(t)) {
    throw ConfigError("index " + std::to_string(t) + " outside series range");
  }
  if (labels_.empty()) return {};
  return labels_[static_cast<std::size_t>(t - start_)];
}

TimeSeries slice(const TimeSeries& series, int first, int last) {
  if (first > last || !series.contains(first) || !series.contains(last)) {
    throw ConfigError("slice [" + std::to_string(first) + ", " + std::to_string(last) +
                      "] outside series range [" + std::to_string(series.start_index()) +
                      ", " + std::to_string(series.last_index()) + "]");
  }
  const auto offset = static_cast<std::size_t>(first - series.start_index());
  const auto count = static_cast<std::size_t>(last - first + 1);
  std::vector<double> values(series.values().begin() + offset,
                             series.values().begin() + offset + count);
  std::vector<std::string> labels;
  if (series.has_labels()) {
    labels.assign(series.labels().begin() + offset, series.labels().begin() + offset + count);
  }
  return TimeSeries(std::move(values), first, std::move(labels));
}

void WindowConfig::validate() const {
  if (train_size < 1) {
    throw ConfigError("train_size must be positive");
  }
  if (correction_size < 0 || correction_size > train_size) {
    throw ConfigError("correction_size must satisfy 0 <= r <= n");
  }
}

LagMatrix build_lag_matrix(const TimeSeries& series, int p) {
  if (p < 1) {
    throw ConfigError("lag order must be >= 1");
  }
  const int n = static_cast<int>(series.size());
  if (n <= p) {
    throw ConfigError("series of length " + std::to_string(n) +
                      " too short for lag order " + std::to_string(p));
  }
  LagMatrix out;
  out.order = p;
  out.rows.reserve(static_cast<std::size_t>(n - p));
  for (int t = series.start_index() + p; t <= series.last_index(); ++t) {
    LagRow row;
    row.index = t;
    row.target = series.at(t);
    row.lags.reserve(static_cast<std::size_t>(p));
    for (int j = 1; j <= p; ++j) {
      row.lags.push_back(series.at(t - j));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double* out) {
  const std::string v = trim(s);
  if (v.empty()) return false;
  std::size_t pos = 0;
  try {
    *out = std::stod(v, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == v.size() && std::isfinite(*out);
}

bool parse_int(const std::string& s, int* out) {
  const std::string v = trim(s);
  if (v.empty()) return false;
  std::size_t pos = 0;
  long parsed = 0;
  try {
    parsed = std::stol(v, &pos);
  } catch (const std::exception&) {
    return false;
  }
  if (pos != v.size()) return false;
  *out = static_cast<int>(parsed);
  return true;
}

}  // namespace

TimeSeries read_series_csv(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (!t.empty()) lines.push_back(t);
  }
  if (lines.empty()) {
    throw ConfigError("empty CSV input");
  }

  enum class Mode { Plain, Indexed, Labeled };
  Mode mode = Mode::Plain;
  std::size_t first_row = 0;

  const auto head = split_csv_line(lines[0]);
  if (head.size() == 2) {
    const std::string a = trim(head[0]);
    const std::string b = trim(head[1]);
    if (a == "t" && b == "value") {
      mode = Mode::Indexed;
      first_row = 1;
    } else if (a == "label" && b == "value") {
      mode = Mode::Labeled;
      first_row = 1;
    } else {
      throw ConfigError("two-column CSV requires header 't,value' or 'label,value'");
    }
  } else if (head.size() == 1) {
    double ignored = 0.0;
    if (!parse_double(head[0], &ignored)) {
      if (trim(head[0]) != "value") {
        throw ConfigError("unrecognized CSV header '" + head[0] + "'");
      }
      first_row = 1;
    }
  } else {
    throw ConfigError("CSV must have one or two columns");
  }

  std::vector<double> values;
  std::vector<std::string> labels;
  int start_index = 1;
  int expected_t = 0;
  for (std::size_t i = first_row; i < lines.size(); ++i) {
    const auto fields = split_csv_line(lines[i]);
    const std::size_t want = mode == Mode::Plain ? 1 : 2;
    if (fields.size() != want) {
      throw ConfigError("row " + std::to_string(i + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(want));
    }
    double value = 0.0;
    if (!parse_double(fields[want - 1], &value)) {
      throw ConfigError("non-numeric value in row " + std::to_string(i + 1) + ": '" +
                        fields[want - 1] + "'");
    }
    if (mode == Mode::Indexed) {
      int t = 0;
      if (!parse_int(fields[0], &t)) {
        throw ConfigError("non-integer index in row " + std::to_string(i + 1));
      }
      if (values.empty()) {
        start_index = t;
        expected_t = t;
      } else if (t != expected_t) {
        throw ConfigError("index column must be consecutive; saw " + std::to_string(t) +
                          ", expected " + std::to_string(expected_t));
      }
      ++expected_t;
    } else if (mode == Mode::Labeled) {
      labels.push_back(trim(fields[0]));
    }
    values.push_back(value);
  }
  if (values.empty()) {
    throw ConfigError("CSV contains a header but no data rows");
  }
  return TimeSeries(std::move(values), start_index, std::move(labels));
}

TimeSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open CSV file: " + path);
  }
  return read_series_csv(in);
}

}  // namespace bapc
