#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "walign/timeseries.hpp"

namespace walign::csv {

/// Frame text format: header `step,hours,<channel>...`, one row per step,
/// floats with 9 significant digits, LF line endings.
std::string to_string(const TimeSeriesFrame& frame);

void write_frame(const TimeSeriesFrame& frame,
                 const std::filesystem::path& path);

/// Inverse of to_string. dt is recovered from the hours column when the
/// frame has at least two rows, otherwise fallback_dt is used.
TimeSeriesFrame parse(std::string_view text, double fallback_dt = 3600.0);

TimeSeriesFrame read_frame(const std::filesystem::path& path,
                           double fallback_dt = 3600.0);

}  // namespace walign::csv
