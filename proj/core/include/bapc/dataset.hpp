#pragma once

#include <array>
#include <string>

#include "bapc/time_series.hpp"

namespace bapc {

/// Monthly international airline passenger totals (thousands),
/// January 1949 through December 1960.
const std::array<double, 144>& air_passengers_values();

/// Built-in copy of the dataset with "YYYY-MM" calendar labels.
TimeSeries air_passengers();

/// Load and validate an air-passenger CSV: header "month,passengers",
/// exactly 144 rows with consecutive "YYYY-MM" months.
TimeSeries load_air_passengers(const std::string& path);

}  // namespace bapc
