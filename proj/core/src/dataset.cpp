#include "bapc/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bapc/errors.hpp"

namespace bapc {

namespace {

constexpr std::array<double, 144> kAirPassengers = {
    112, 118, 132, 129, 121, 135, 148, 148, 136, 119, 104, 118,  // 1949
    115, 126, 141, 135, 125, 149, 170, 170, 158, 133, 114, 140,  // 1950
    145, 150, 178, 163, 172, 178, 199, 199, 184, 162, 146, 166,  // 1951
    171, 180, 193, 181, 183, 218, 230, 242, 209, 191, 172, 194,  // 1952
    196, 196, 236, 235, 229, 243, 264, 272, 237, 211, 180, 201,  // 1953
    204, 188, 235, 227, 234, 264, 302, 293, 259, 229, 203, 229,  // 1954
    242, 233, 267, 269, 270, 315, 364, 347, 312, 274, 237, 278,  // 1955
    284, 277, 317, 313, 318, 374, 413, 405, 355, 306, 271, 306,  // 1956
    315, 301, 356, 348, 355, 422, 465, 467, 404, 347, 305, 336,  // 1957
    340, 318, 362, 348, 363, 435, 491, 505, 404, 359, 310, 337,  // 1958
    360, 342, 406, 396, 420, 472, 548, 559, 463, 407, 362, 405,  // 1959
    417, 391, 419, 461, 472, 535, 622, 606, 508, 461, 390, 432,  // 1960
};

std::string month_label(int index) {
  const int year = 1949 + (index - 1) / 12;
  const int month = (index - 1) % 12 + 1;
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
  return buf;
}

bool parse_month(const std::string& label, int* year, int* month) {
  if (label.size() != 7 || label[4] != '-') return false;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i == 4) continue;
    if (label[i] < '0' || label[i] > '9') return false;
  }
  *year = std::stoi(label.substr(0, 4));
  *month = std::stoi(label.substr(5, 2));
  return *month >= 1 && *month <= 12;
}

}  // namespace

const std::array<double, 144>& air_passengers_values() { return kAirPassengers; }

TimeSeries air_passengers() {
  std::vector<double> values(kAirPassengers.begin(), kAirPassengers.end());
  std::vector<std::string> labels;
  labels.reserve(values.size());
  for (int i = 1; i <= 144; ++i) labels.push_back(month_label(i));
  return TimeSeries(std::move(values), 1, std::move(labels));
}

TimeSeries load_air_passengers(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open air-passenger CSV: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("air-passenger CSV is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "month,passengers") {
    throw ConfigError("air-passenger CSV must start with header 'month,passengers'");
  }
  std::vector<double> values;
  std::vector<std::string> labels;
  int prev_year = 0, prev_month = 0;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("air-passenger CSV row " + std::to_string(row) + " has no comma");
    }
    const std::string label = line.substr(0, comma);
    const std::string value_text = line.substr(comma + 1);
    int year = 0, month = 0;
    if (!parse_month(label, &year, &month)) {
      throw ConfigError("air-passenger CSV row " + std::to_string(row) +
                        ": bad month label '" + label + "'");
    }
    if (!labels.empty()) {
      const bool consecutive = (month == prev_month + 1 && year == prev_year) ||
                               (month == 1 && prev_month == 12 && year == prev_year + 1);
      if (!consecutive) {
        throw ConfigError("air-passenger CSV months are not consecutive at row " +
                          std::to_string(row));
      }
    }
    double value = 0.0;
    try {
      std::size_t pos = 0;
      value = std::stod(value_text, &pos);
      if (pos != value_text.size()) throw std::invalid_argument(value_text);
    } catch (const std::exception&) {
      throw ConfigError("air-passenger CSV row " + std::to_string(row) +
                        ": non-numeric value '" + value_text + "'");
    }
    prev_year = year;
    prev_month = month;
    labels.push_back(label);
    values.push_back(value);
  }
  if (values.size() != 144) {
    throw ConfigError("air-passenger CSV must contain exactly 144 rows, found " +
                      std::to_string(values.size()));
  }
  return TimeSeries(std::move(values), 1, std::move(labels));
}

}  // namespace bapc
