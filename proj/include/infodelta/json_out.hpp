#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace infodelta {

/// Serialises JSON with every floating-point number printed in fixed
/// 6-decimal notation, keys in sorted order and two-space indentation.
/// Non-finite floats are written as null.
std::string dump_fixed(const nlohmann::json& value);

/// Formats a double with 6 decimals ("-0.000000" is normalised to "0.000000").
std::string fixed6(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace infodelta
