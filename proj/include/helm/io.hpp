#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

namespace helm {

/// %.17g, with "NaN", "Infinity", "-Infinity" for non-finite values.
std::string format_double(double v);

/// Pretty JSON whose floating-point numbers use format_double; non-finite values become null.
std::string dump_json(const nlohmann::json& j);

/// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace helm
