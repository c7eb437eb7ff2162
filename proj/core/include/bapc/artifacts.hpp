#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bapc/attribution.hpp"
#include "bapc/engine.hpp"
#include "bapc/lime.hpp"
#include "bapc/time_series.hpp"

namespace bapc {

/// 17-significant-digit decimal form used by every artifact writer.
std::string format_double(double value);

/// Write via a temp file in the same directory plus rename.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Minimal ordered JSON assembler for run artifacts.
class JsonObject {
 public:
  JsonObject& put(const std::string& key, const std::string& value);
  JsonObject& put(const std::string& key, const char* value);
  JsonObject& put(const std::string& key, double value);
  JsonObject& put(const std::string& key, int value);
  JsonObject& put(const std::string& key, std::uint64_t value);
  JsonObject& put(const std::string& key, bool value);
  JsonObject& put_raw(const std::string& key, const std::string& raw_json);
  JsonObject& put_numbers(const std::string& key, const std::vector<double>& values);
  JsonObject& put_named_numbers(const std::string& key,
                                const std::vector<std::string>& names,
                                const std::vector<double>& values);
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

std::string json_escape(const std::string& text);

// artifact bodies ------------------------------------------------------------

std::string series_csv(const TimeSeries& series);       // header t,value
std::string window_scan_csv(const WindowScanResult&);   // header r,delta_f
std::string surrogate_matrix_csv(const SbapcResult&);   // header s,t,delta_f
std::string heatmap_csv(const IgHeatmaps&, std::size_t param_index);  // s,t,ig
std::string completeness_csv(const IgHeatmaps&);        // s,t,residual
std::string lime_csv(const LimeExplanation&);           // lag_index,coefficient
std::string bapc_result_json(const BapcResult&, std::uint64_t seed,
                             const CorrectionOptions& correction,
                             CorrectionKind correction_kind);
std::string correction_metadata_json(CorrectionKind kind, const CorrectionOptions& options);

}  // namespace bapc
