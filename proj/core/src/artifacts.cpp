#include "bapc/artifacts.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "bapc/errors.hpp"

namespace bapc {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  const fs::path temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw ConfigError("cannot open output file: " + temp.string());
    }
    out << content;
    out.flush();
    if (!out) {
      throw ConfigError("write failed: " + temp.string());
    }
  }
  fs::rename(temp, path);
}

std::string json_escape(const std::string& text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

JsonObject& JsonObject::put(const std::string& key, const std::string& value) {
  fields_.emplace_back(key, "\"" + json_escape(value) + "\"");
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, const char* value) {
  return put(key, std::string(value));
}

JsonObject& JsonObject::put(const std::string& key, double value) {
  fields_.emplace_back(key, format_double(value));
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, int value) {
  fields_.emplace_back(key, std::to_string(value));
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, std::uint64_t value) {
  fields_.emplace_back(key, std::to_string(value));
  return *this;
}

JsonObject& JsonObject::put(const std::string& key, bool value) {
  fields_.emplace_back(key, value ? "true" : "false");
  return *this;
}

JsonObject& JsonObject::put_raw(const std::string& key, const std::string& raw_json) {
  fields_.emplace_back(key, raw_json);
  return *this;
}

JsonObject& JsonObject::put_numbers(const std::string& key, const std::vector<double>& values) {
  std::string raw = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    raw += format_double(values[i]);
    if (i + 1 < values.size()) raw += ", ";
  }
  raw += "]";
  fields_.emplace_back(key, std::move(raw));
  return *this;
}

JsonObject& JsonObject::put_named_numbers(const std::string& key,
                                          const std::vector<std::string>& names,
                                          const std::vector<double>& values) {
  if (names.size() != values.size()) {
    throw ConfigError("put_named_numbers: size mismatch");
  }
  std::string raw = "{";
  for (std::size_t i = 0; i < names.size(); ++i) {
    raw += "\"" + json_escape(names[i]) + "\": " + format_double(values[i]);
    if (i + 1 < names.size()) raw += ", ";
  }
  raw += "}";
  fields_.emplace_back(key, std::move(raw));
  return *this;
}

std::string JsonObject::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    out += "\"" + json_escape(fields_[i].first) + "\": " + fields_[i].second;
    if (i + 1 < fields_.size()) out += ", ";
  }
  out += "}\n";
  return out;
}

std::string series_csv(const TimeSeries& series) {
  std::string out = "t,value\n";
  for (int t = series.start_index(); t <= series.last_index(); ++t) {
    out += std::to_string(t) + "," + format_double(series.at(t)) + "\n";
  }
  return out;
}

std::string window_scan_csv(const WindowScanResult& scan) {
  std::string out = "r,delta_f\n";
  for (const auto& entry : scan.entries) {
    out += std::to_string(entry.r) + ",";
    out += entry.ok ? format_double(entry.delta_f) : "nan";
    out += "\n";
  }
  return out;
}

std::string surrogate_matrix_csv(const SbapcResult& sweep) {
  std::string out = "s,t,delta_f\n";
  for (std::size_t i = 0; i < sweep.anchors.size(); ++i) {
    const int s = sweep.anchors[i];
    for (std::size_t j = 0; j < sweep.surrogate[i].size(); ++j) {
      const int t = s - sweep.train_size + 1 + static_cast<int>(j);
      out += std::to_string(s) + "," + std::to_string(t) + "," +
             format_double(sweep.surrogate[i][j]) + "\n";
    }
  }
  return out;
}

std::string heatmap_csv(const IgHeatmaps& maps, std::size_t param_index) {
  if (param_index >= maps.per_param.size()) {
    throw ConfigError("heatmap_csv: parameter index out of range");
  }
  std::string out = "s,t,ig\n";
  const auto& matrix = maps.per_param[param_index];
  for (std::size_t i = 0; i < maps.anchors.size(); ++i) {
    const int s = maps.anchors[i];
    for (std::size_t j = 0; j < matrix[i].size(); ++j) {
      const int t = s - maps.train_size + 1 + static_cast<int>(j);
      out += std::to_string(s) + "," + std::to_string(t) + "," +
             format_double(matrix[i][j]) + "\n";
    }
  }
  return out;
}

std::string completeness_csv(const IgHeatmaps& maps) {
  std::string out = "s,t,residual\n";
  for (std::size_t i = 0; i < maps.anchors.size(); ++i) {
    const int s = maps.anchors[i];
    for (std::size_t j = 0; j < maps.completeness[i].size(); ++j) {
      const int t = s - maps.train_size + 1 + static_cast<int>(j);
      out += std::to_string(s) + "," + std::to_string(t) + "," +
             format_double(maps.completeness[i][j]) + "\n";
    }
  }
  return out;
}

std::string lime_csv(const LimeExplanation& explanation) {
  std::string out = "lag_index,coefficient\n";
  // ascending time order t-p .. t-1
  for (int j = explanation.order; j >= 1; --j) {
    out += std::to_string(explanation.t - j) + "," +
           format_double(explanation.coefficients[static_cast<std::size_t>(j - 1)]) + "\n";
  }
  return out;
}

std::string correction_metadata_json(CorrectionKind kind, const CorrectionOptions& options) {
  JsonObject meta;
  meta.put("kind", kind == CorrectionKind::NearestNeighbor1 ? "nn1" : "arnet");
  if (kind == CorrectionKind::AutoregressiveNet) {
    meta.put("order", options.order)
        .put("hidden", options.hidden)
        .put("epochs", options.epochs)
        .put("learning_rate", options.learning_rate)
        .put("seed", options.seed);
  }
  std::string out = meta.str();
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string bapc_result_json(const BapcResult& result, std::uint64_t seed,
                             const CorrectionOptions& correction,
                             CorrectionKind correction_kind) {
  const auto& names = param_names(result.base_family);
  JsonObject json;
  json.put("family", family_name(result.base_family));
  json.put_named_numbers("theta0", names, result.theta0.params);
  json.put_named_numbers("theta_r", names, result.theta_r.params);
  json.put_named_numbers("delta_theta", names, result.delta_theta);
  JsonObject window;
  window.put("n", result.window.train_size).put("r", result.window.correction_size);
  std::string window_raw = window.str();
  window_raw.pop_back();
  json.put_raw("window", window_raw);
  json.put("start_index", result.start_index);
  json.put("seed", seed);
  json.put_raw("correction", correction_metadata_json(correction_kind, correction));
  json.put("fit_warning", result.fit_warning);
  if (result.base_family == Family::AR2) {
    const auto set_to_raw = [](const std::set<int>& values) {
      std::string raw = "[";
      bool first = true;
      for (int v : values) {
        if (!first) raw += ", ";
        raw += std::to_string(v);
        first = false;
      }
      raw += "]";
      return raw;
    };
    json.put_raw("removed_step1", set_to_raw(result.removed_step1));
    json.put_raw("removed_step3", set_to_raw(result.removed_step3));
  }
  return json.str();
}

}  // namespace bapc
