#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace warpkit::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Pretty-printed JSON with floating-point numbers at 17 significant digits.
std::string to_json_text(const Json& value);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace warpkit::cli
