#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace litkg {

std::string read_text_file(const std::filesystem::path& path);

/// Writes via a temporary sibling and rename, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::vector<std::string> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Fixed-precision decimal rendering used in CSV reports.
std::string format_double(double v, int precision = 10);

/// Quotes a CSV field when it contains a comma, quote, or newline.
std::string csv_field(std::string_view s);

} // namespace litkg
