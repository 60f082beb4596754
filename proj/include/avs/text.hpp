#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the file formats.
namespace avs::text {

/// Shortest-general formatting with `precision` significant digits.
std::string format_double(double value, int precision = 17);
bool parse_double(std::string_view token, double& out);
std::vector<std::string_view> split_ws(std::string_view line);
std::string_view trim(std::string_view s);

/// Throws IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace avs::text
