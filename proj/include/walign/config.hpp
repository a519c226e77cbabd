#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "walign/align.hpp"
#include "walign/portrait.hpp"

namespace walign::config {

/// Flat sectioned key=value document. `#` starts a comment line, `[name]`
/// opens a section. Every key must be consumed by the loader; leftovers are
/// hard errors so typos cannot silently corrupt an experiment.
class ConfigDoc {
 public:
  static ConfigDoc parse(std::string_view text);
  static ConfigDoc load(const std::filesystem::path& path);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key);
  double get_double(const std::string& section, const std::string& key);
  std::int64_t get_int(const std::string& section, const std::string& key);
  bool get_bool(const std::string& section, const std::string& key);
  /// Rows separated by ';', entries by whitespace.
  Mat get_matrix(const std::string& section, const std::string& key);

  template <typename T>
  T get_or(const std::string& section, const std::string& key, T fallback);

  /// Throws listing every key that was never read.
  void require_fully_consumed() const;

 private:
  const std::string& raw(const std::string& section, const std::string& key);
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::set<std::string> consumed_;  // "section.key"
};

struct ScenarioConfig {
  align::TransferScenario scenario;
  Index forecast_hours = 1000;
  std::uint64_t seed = 42;
};

/// Builds a transfer scenario from the [source]/[target]/[weather]/[run]
/// ([noise]) sections. The optional seed overrides the [run] seed; per
/// section seeds given explicitly always win.
ScenarioConfig load_scenario(ConfigDoc& doc,
                             std::optional<std::uint64_t> seed_override = {});
ScenarioConfig load_scenario_file(const std::filesystem::path& path,
                                  std::optional<std::uint64_t> seed_override = {});

struct PortraitConfig {
  portrait::PortraitRequest request;
  thermal::StateSpaceModel source_model;  // from [source]
  std::optional<ScenarioConfig> data;     // target data when DMD is involved
  double dt = 3600.0;
};

/// Builds a portrait job from the [portrait] and [source] sections. A DMD
/// (or side-by-side) portrait needs the full scenario for its data run;
/// pass the one loaded from the same document.
PortraitConfig load_portrait(ConfigDoc& doc,
                             const std::optional<ScenarioConfig>& data);
PortraitConfig load_portrait_file(const std::filesystem::path& path,
                                  std::optional<std::uint64_t> seed_override = {});

}  // namespace walign::config
