#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "walign/types.hpp"

namespace walign {

/// Channel names plus sampling info, everything about a frame except the
/// values themselves.
struct FrameMeta {
  double dt = 3600.0;  // seconds per step
  std::int64_t start_index = 0;
  std::vector<std::string> channels;
};

/// Uniformly sampled multi-channel series. Rows are timesteps, columns are
/// named channels.
struct TimeSeriesFrame {
  double dt = 3600.0;
  std::int64_t start_index = 0;
  std::vector<std::string> channels;
  Mat values;  // steps x channels

  Index steps() const { return values.rows(); }
  Index channel_count() const { return values.cols(); }
  double hours(Index row) const {
    return static_cast<double>(start_index + row) * dt / 3600.0;
  }

  bool has_channel(const std::string& name) const;
  Index channel_index(const std::string& name) const;  // throws if absent
  Vec channel(const std::string& name) const;

  /// Rows [first, first + count), start_index shifted accordingly.
  TimeSeriesFrame slice(Index first, Index count) const;
  /// Channel subset in the requested order.
  TimeSeriesFrame select(const std::vector<std::string>& names) const;

  FrameMeta meta() const { return {dt, start_index, channels}; }

  /// Enforces the structural invariants: at least one row, unique channel
  /// names matching the column count, finite values, positive dt.
  void validate() const;
};

TimeSeriesFrame make_frame(const FrameMeta& meta, Mat values);

}  // namespace walign
