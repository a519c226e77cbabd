#include "walign/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "walign/csv.hpp"

namespace walign::config {

namespace {

std::string trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin])))
    ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1])))
    --end;
  return std::string(s.substr(begin, end - begin));
}

}  // namespace

ConfigDoc ConfigDoc::parse(std::string_view text) {
  ConfigDoc doc;
  std::istringstream stream{std::string(text)};
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw std::invalid_argument("config: malformed section header on line " +
                                    std::to_string(line_no));
      }
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty()) {
        throw std::invalid_argument("config: empty section name on line " +
                                    std::to_string(line_no));
      }
      doc.sections_[section];  // section may legitimately stay empty
      continue;
    }
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected key=value on line " +
                                  std::to_string(line_no));
    }
    if (section.empty()) {
      throw std::invalid_argument("config: key outside any [section] on line " +
                                  std::to_string(line_no));
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw std::invalid_argument("config: empty key on line " +
                                  std::to_string(line_no));
    }
    if (!doc.sections_[section].emplace(key, value).second) {
      throw std::invalid_argument("config: duplicate key '" + key +
                                  "' in section [" + section + "]");
    }
  }
  return doc;
}

ConfigDoc ConfigDoc::load(const std::filesystem::path& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) {
    throw std::invalid_argument("config: cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse(buffer.str());
}

bool ConfigDoc::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

const std::string& ConfigDoc::raw(const std::string& section,
                                  const std::string& key) {
  const auto sec = sections_.find(section);
  if (sec == sections_.end() || !sec->second.count(key)) {
    throw std::invalid_argument("config: missing required key '" + key +
                                "' in section [" + section + "]");
  }
  consumed_.insert(section + "." + key);
  return sec->second.at(key);
}

std::string ConfigDoc::get_string(const std::string& section,
                                  const std::string& key) {
  return raw(section, key);
}

double ConfigDoc::get_double(const std::string& section,
                             const std::string& key) {
  const std::string& value = raw(section, key);
  std::size_t consumed = 0;
  double out = 0;
  try {
    out = std::stod(value, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != value.size() || value.empty()) {
    throw std::invalid_argument("config: key '" + key + "' in [" + section +
                                "] is not a number: '" + value + "'");
  }
  return out;
}

std::int64_t ConfigDoc::get_int(const std::string& section,
                                const std::string& key) {
  const double v = get_double(section, key);
  const auto out = static_cast<std::int64_t>(v);
  if (static_cast<double>(out) != v) {
    throw std::invalid_argument("config: key '" + key + "' in [" + section +
                                "] must be an integer");
  }
  return out;
}

bool ConfigDoc::get_bool(const std::string& section, const std::string& key) {
  const std::string value = raw(section, key);
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw std::invalid_argument("config: key '" + key + "' in [" + section +
                              "] must be true/false");
}

Mat ConfigDoc::get_matrix(const std::string& section, const std::string& key) {
  const std::string value = raw(section, key);
  std::vector<std::vector<double>> rows;
  std::size_t begin = 0;
  while (begin <= value.size()) {
    const std::size_t semi = value.find(';', begin);
    const std::string row_text =
        value.substr(begin, semi == std::string::npos ? std::string::npos
                                                      : semi - begin);
    std::istringstream stream(row_text);
    std::vector<double> row;
    double v = 0;
    while (stream >> v) row.push_back(v);
    if (!stream.eof()) {
      throw std::invalid_argument("config: matrix key '" + key +
                                  "' holds non-numeric data");
    }
    if (!row.empty()) rows.push_back(std::move(row));
    if (semi == std::string::npos) break;
    begin = semi + 1;
  }
  if (rows.empty()) {
    throw std::invalid_argument("config: matrix key '" + key + "' is empty");
  }
  const std::size_t cols = rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != cols) {
      throw std::invalid_argument("config: matrix key '" + key +
                                  "' has ragged rows");
    }
  }
  Mat m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  return m;
}

template <typename T>
T ConfigDoc::get_or(const std::string& section, const std::string& key,
                    T fallback) {
  if (!has(section, key)) return fallback;
  if constexpr (std::is_same_v<T, double>) {
    return get_double(section, key);
  } else if constexpr (std::is_same_v<T, std::int64_t>) {
    return get_int(section, key);
  } else if constexpr (std::is_same_v<T, bool>) {
    return get_bool(section, key);
  } else {
    return get_string(section, key);
  }
}

template double ConfigDoc::get_or(const std::string&, const std::string&,
                                  double);
template std::int64_t ConfigDoc::get_or(const std::string&, const std::string&,
                                        std::int64_t);
template bool ConfigDoc::get_or(const std::string&, const std::string&, bool);
template std::string ConfigDoc::get_or(const std::string&, const std::string&,
                                       std::string);

void ConfigDoc::require_fully_consumed() const {
  std::vector<std::string> unknown;
  for (const auto& [section, keys] : sections_) {
    for (const auto& [key, value] : keys) {
      if (!consumed_.count(section + "." + key)) {
        unknown.push_back("[" + section + "] " + key);
      }
    }
  }
  if (!unknown.empty()) {
    std::string message = "config: unknown key(s):";
    for (const auto& entry : unknown) message += " " + entry;
    throw std::invalid_argument(message);
  }
}

namespace {

thermal::StateSpaceModel load_source_model(ConfigDoc& doc);

thermal::WallSpec load_wall(ConfigDoc& doc, const std::string& section) {
  thermal::WallSpec wall;
  wall.thickness = doc.get_double(section, "thickness");
  const double face_area = doc.get_or(section, "face_area", 9.0);
  wall.layer_volume =
      doc.get_or(section, "volume", face_area * wall.thickness);
  wall.material.conductivity = doc.get_or(section, "conductivity", 0.72);
  wall.material.density = doc.get_or(section, "density", 1920.0);
  wall.material.specific_heat = doc.get_or(section, "specific_heat", 780.0);
  wall.h_out = doc.get_or(section, "h_out", 25.0);
  wall.h_in = doc.get_or(section, "h_in", 8.0);
  wall.indoor_branch = doc.get_or(section, "indoor_branch", false);
  wall.validate();
  return wall;
}

thermal::StateSpaceModel load_source_model(ConfigDoc& doc) {
  if (doc.has("source", "A")) {
    const Mat a = doc.get_matrix("source", "A");
    if (!doc.has("source", "B")) {
      throw std::invalid_argument(
          "config: explicit source A also needs an explicit B");
    }
    return thermal::explicit_ssm(a, doc.get_matrix("source", "B"));
  }
  return thermal::wall_ssm(load_wall(doc, "source"));
}

}  // namespace

ScenarioConfig load_scenario(ConfigDoc& doc,
                             std::optional<std::uint64_t> seed_override) {
  ScenarioConfig out;
  auto& scenario = out.scenario;

  out.seed = seed_override.value_or(static_cast<std::uint64_t>(
      doc.get_or(std::string("run"), std::string("seed"), std::int64_t{17})));

  // Source: explicit matrices win over wall parameters.
  if (doc.has("source", "A")) {
    scenario.source_system = load_source_model(doc);
  } else {
    scenario.source_wall = load_wall(doc, "source");
  }

  scenario.target_wall = load_wall(doc, "target");
  const std::string kind = doc.get_or(std::string("target"),
                                      std::string("kind"), std::string("fd"));
  if (kind == "fd") {
    scenario.target_kind = align::TargetKind::fd;
  } else if (kind == "rollout") {
    scenario.target_kind = align::TargetKind::rollout;
  } else {
    throw std::invalid_argument("config: target kind must be fd or rollout");
  }
  scenario.fd_cells = static_cast<int>(
      doc.get_or(std::string("target"), std::string("cells"), std::int64_t{20}));

  if (doc.has("weather", "csv")) {
    scenario.weather_series =
        csv::read_frame(doc.get_string("weather", "csv"));
  } else {
    auto& weather = scenario.weather;
    weather.mean_c = doc.get_or(std::string("weather"), std::string("mean"),
                                weather.mean_c);
    weather.diurnal_amplitude =
        doc.get_or(std::string("weather"), std::string("diurnal_amplitude"),
                   weather.diurnal_amplitude);
    weather.diurnal_phase = doc.get_or(
        std::string("weather"), std::string("diurnal_phase"),
        weather.diurnal_phase);
    weather.annual_amplitude =
        doc.get_or(std::string("weather"), std::string("annual_amplitude"),
                   weather.annual_amplitude);
    weather.ar1_coefficient =
        doc.get_or(std::string("weather"), std::string("ar1_coefficient"),
                   weather.ar1_coefficient);
    weather.ar1_noise_sd = doc.get_or(
        std::string("weather"), std::string("ar1_noise_sd"),
        weather.ar1_noise_sd);
    weather.seed = static_cast<std::uint64_t>(
        doc.get_or(std::string("weather"), std::string("seed"),
                   static_cast<std::int64_t>(out.seed)));
    weather.validate();
  }

  scenario.dt =
      doc.get_or(std::string("run"), std::string("dt"), 3600.0);
  scenario.train_hours = static_cast<Index>(doc.get_or(
      std::string("run"), std::string("train_hours"), std::int64_t{2000}));
  out.forecast_hours = static_cast<Index>(doc.get_or(
      std::string("run"), std::string("forecast_hours"), std::int64_t{1000}));
  if (out.forecast_hours < 1) {
    throw std::invalid_argument("config: forecast_hours must be >= 1");
  }

  const std::string rom = doc.get_or(std::string("run"), std::string("rom"),
                                     std::string("pod"));
  if (rom == "pod") {
    scenario.rom_method = align::RomMethod::pod;
  } else if (rom == "dmd") {
    scenario.rom_method = align::RomMethod::dmd;
  } else {
    throw std::invalid_argument("config: rom must be pod or dmd");
  }

  const std::string alignment = doc.get_or(
      std::string("run"), std::string("alignment"), std::string("procrustes"));
  if (alignment == "procrustes") {
    scenario.alignment = align::Method::procrustes;
  } else if (alignment == "bergman") {
    scenario.alignment = align::Method::bergman;
  } else {
    throw std::invalid_argument(
        "config: alignment must be procrustes or bergman");
  }

  if (doc.has_section("noise")) {
    align::NoiseSpec noise;
    noise.mean = doc.get_or(std::string("noise"), std::string("mean"), 0.0);
    noise.sd = doc.get_or(std::string("noise"), std::string("sd"), 0.0);
    noise.seed = static_cast<std::uint64_t>(
        doc.get_or(std::string("noise"), std::string("seed"),
                   static_cast<std::int64_t>(out.seed + 1)));
    scenario.noise = noise;
  }

  scenario.validate();
  return out;
}

ScenarioConfig load_scenario_file(const std::filesystem::path& path,
                                  std::optional<std::uint64_t> seed_override) {
  ConfigDoc doc = ConfigDoc::load(path);
  ScenarioConfig out = load_scenario(doc, seed_override);
  doc.require_fully_consumed();
  return out;
}

PortraitConfig load_portrait(ConfigDoc& doc,
                             const std::optional<ScenarioConfig>& data) {
  PortraitConfig out;
  auto& request = out.request;

  const std::string source = doc.get_or(
      std::string("portrait"), std::string("source"), std::string("physics"));
  if (source == "physics") {
    request.source = portrait::OperatorSource::physics;
  } else if (source == "dmd") {
    request.source = portrait::OperatorSource::dmd;
  } else {
    throw std::invalid_argument("config: portrait source must be physics or dmd");
  }
  request.side_by_side = doc.get_or(std::string("portrait"),
                                    std::string("side_by_side"), false);
  request.x_min = doc.get_or(std::string("portrait"), std::string("x_min"),
                             request.x_min);
  request.x_max = doc.get_or(std::string("portrait"), std::string("x_max"),
                             request.x_max);
  request.y_min = doc.get_or(std::string("portrait"), std::string("y_min"),
                             request.y_min);
  request.y_max = doc.get_or(std::string("portrait"), std::string("y_max"),
                             request.y_max);
  request.resolution = static_cast<Index>(doc.get_or(
      std::string("portrait"), std::string("resolution"), std::int64_t{15}));
  request.steps = static_cast<Index>(doc.get_or(
      std::string("portrait"), std::string("steps"), std::int64_t{300}));
  if (doc.has("portrait", "trajectories")) {
    const Mat seeds = doc.get_matrix("portrait", "trajectories");
    if (seeds.cols() != 2) {
      throw std::invalid_argument(
          "config: portrait trajectories must be pairs 'x y; x y; ...'");
    }
    for (Index r = 0; r < seeds.rows(); ++r) {
      request.initial_states.emplace_back(seeds(r, 0), seeds(r, 1));
    }
  }
  request.validate();

  out.source_model = load_source_model(doc);
  out.dt = doc.get_or(std::string("run"), std::string("dt"), 3600.0);

  const bool needs_data =
      request.side_by_side || request.source == portrait::OperatorSource::dmd;
  if (needs_data) {
    if (!data) {
      throw std::invalid_argument(
          "config: a DMD portrait needs the scenario sections "
          "([target]/[weather]/[run]) for its data run");
    }
    out.data = data;
  }
  return out;
}

PortraitConfig load_portrait_file(const std::filesystem::path& path,
                                  std::optional<std::uint64_t> seed_override) {
  ConfigDoc doc = ConfigDoc::load(path);
  std::optional<ScenarioConfig> data;
  if (doc.has_section("target")) data = load_scenario(doc, seed_override);
  PortraitConfig out = load_portrait(doc, data);
  doc.require_fully_consumed();
  return out;
}

}  // namespace walign::config
