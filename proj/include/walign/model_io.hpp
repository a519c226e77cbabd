#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "walign/align.hpp"

namespace walign::model_io {

/// Flat text document: one `key value...` line per field, matrices
/// row-major, floats with full precision. Round-trips exactly.
std::string to_string(const align::AlignmentModel& model);

align::AlignmentModel parse(std::string_view text);

void write_model(const align::AlignmentModel& model,
                 const std::filesystem::path& path);

align::AlignmentModel read_model(const std::filesystem::path& path);

}  // namespace walign::model_io
