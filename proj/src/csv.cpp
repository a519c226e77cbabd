#include "walign/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace walign::csv {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string_view::npos) {
      out.emplace_back(line.substr(begin));
      return out;
    }
    out.emplace_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
}

double parse_double(const std::string& token, std::size_t line_no) {
  std::size_t consumed = 0;
  double value = 0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("csv: bad number '" + token + "' on line " +
                                std::to_string(line_no));
  }
  if (consumed != token.size()) {
    throw std::invalid_argument("csv: bad number '" + token + "' on line " +
                                std::to_string(line_no));
  }
  return value;
}

}  // namespace

std::string to_string(const TimeSeriesFrame& frame) {
  frame.validate();
  std::string out = "step,hours";
  for (const auto& name : frame.channels) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (Index r = 0; r < frame.steps(); ++r) {
    out += std::to_string(frame.start_index + r);
    out += ',';
    out += format_value(frame.hours(r));
    for (Index c = 0; c < frame.channel_count(); ++c) {
      out += ',';
      out += format_value(frame.values(r, c));
    }
    out += '\n';
  }
  return out;
}

void write_frame(const TimeSeriesFrame& frame,
                 const std::filesystem::path& path) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) {
    throw std::runtime_error("csv: cannot open '" + path.string() +
                             "' for writing");
  }
  stream << to_string(frame);
  if (!stream) {
    throw std::runtime_error("csv: write to '" + path.string() + "' failed");
  }
}

TimeSeriesFrame parse(std::string_view text, double fallback_dt) {
  std::istringstream stream{std::string(text)};
  std::string line;
  if (!std::getline(stream, line)) {
    throw std::invalid_argument("csv: empty document");
  }
  auto header = split_line(line);
  if (header.size() < 3 || header[0] != "step" || header[1] != "hours") {
    throw std::invalid_argument("csv: header must start with 'step,hours'");
  }

  TimeSeriesFrame frame;
  frame.channels.assign(header.begin() + 2, header.end());
  const std::size_t cols = frame.channels.size();

  std::vector<std::int64_t> steps;
  std::vector<double> hours;
  std::vector<double> data;
  std::size_t line_no = 1;
  while (std::getline(stream, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto tokens = split_line(line);
    if (tokens.size() != cols + 2) {
      throw std::invalid_argument("csv: line " + std::to_string(line_no) +
                                  " has " + std::to_string(tokens.size()) +
                                  " fields, expected " +
                                  std::to_string(cols + 2));
    }
    steps.push_back(static_cast<std::int64_t>(parse_double(tokens[0], line_no)));
    hours.push_back(parse_double(tokens[1], line_no));
    for (std::size_t c = 0; c < cols; ++c) {
      data.push_back(parse_double(tokens[c + 2], line_no));
    }
  }
  if (steps.empty()) throw std::invalid_argument("csv: no data rows");

  frame.start_index = steps.front();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i] != frame.start_index + static_cast<std::int64_t>(i)) {
      throw std::invalid_argument("csv: step column is not contiguous");
    }
  }
  if (steps.size() >= 2) {
    const double dt = (hours[1] - hours[0]) * 3600.0;
    if (!(dt > 0)) throw std::invalid_argument("csv: hours not increasing");
    for (std::size_t i = 1; i < hours.size(); ++i) {
      const double gap = (hours[i] - hours[i - 1]) * 3600.0;
      if (std::abs(gap - dt) > 1e-6 * dt) {
        throw std::invalid_argument("csv: non-uniform step spacing");
      }
    }
    frame.dt = dt;
  } else {
    frame.dt = fallback_dt;
  }

  frame.values.resize(static_cast<Index>(steps.size()),
                      static_cast<Index>(cols));
  for (std::size_t r = 0; r < steps.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      frame.values(static_cast<Index>(r), static_cast<Index>(c)) =
          data[r * cols + c];
    }
  }
  frame.validate();
  return frame;
}

TimeSeriesFrame read_frame(const std::filesystem::path& path,
                           double fallback_dt) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw std::runtime_error("csv: cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse(buffer.str(), fallback_dt);
}

}  // namespace walign::csv
