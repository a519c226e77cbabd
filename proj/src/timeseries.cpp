#include "walign/timeseries.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace walign {

bool TimeSeriesFrame::has_channel(const std::string& name) const {
  return std::find(channels.begin(), channels.end(), name) != channels.end();
}

Index TimeSeriesFrame::channel_index(const std::string& name) const {
  const auto it = std::find(channels.begin(), channels.end(), name);
  if (it == channels.end()) {
    throw std::invalid_argument("frame: no channel named '" + name + "'");
  }
  return static_cast<Index>(it - channels.begin());
}

Vec TimeSeriesFrame::channel(const std::string& name) const {
  return values.col(channel_index(name));
}

TimeSeriesFrame TimeSeriesFrame::slice(Index first, Index count) const {
  if (first < 0 || count < 1 || first + count > steps()) {
    throw std::invalid_argument("frame: slice out of range");
  }
  TimeSeriesFrame out;
  out.dt = dt;
  out.start_index = start_index + first;
  out.channels = channels;
  out.values = values.middleRows(first, count);
  return out;
}

TimeSeriesFrame TimeSeriesFrame::select(
    const std::vector<std::string>& names) const {
  TimeSeriesFrame out;
  out.dt = dt;
  out.start_index = start_index;
  out.channels = names;
  out.values.resize(steps(), static_cast<Index>(names.size()));
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.values.col(static_cast<Index>(i)) = values.col(channel_index(names[i]));
  }
  return out;
}

void TimeSeriesFrame::validate() const {
  if (!(dt > 0)) throw std::invalid_argument("frame: dt must be positive");
  if (values.rows() < 1) throw std::invalid_argument("frame: needs >= 1 row");
  if (static_cast<Index>(channels.size()) != values.cols()) {
    throw std::invalid_argument("frame: channel names do not match columns");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : channels) {
    if (name.empty()) throw std::invalid_argument("frame: empty channel name");
    if (name.find(',') != std::string::npos ||
        name.find('\n') != std::string::npos) {
      throw std::invalid_argument("frame: channel name '" + name +
                                  "' contains a separator");
    }
    if (!seen.insert(name).second) {
      throw std::invalid_argument("frame: duplicate channel '" + name + "'");
    }
  }
  if (!values.allFinite()) {
    throw std::invalid_argument("frame: non-finite values");
  }
}

TimeSeriesFrame make_frame(const FrameMeta& meta, Mat values) {
  TimeSeriesFrame frame;
  frame.dt = meta.dt;
  frame.start_index = meta.start_index;
  frame.channels = meta.channels;
  frame.values = std::move(values);
  frame.validate();
  return frame;
}

}  // namespace walign
