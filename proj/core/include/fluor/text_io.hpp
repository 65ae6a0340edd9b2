#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fluor::text_io {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::vector<std::string> split(std::string_view line, char separator);
std::string_view trim(std::string_view text);

/// Whole-field parse; nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view text);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Non-empty, non-comment ('#') lines.
std::vector<std::string> data_lines(const std::string& contents);

}  // namespace fluor::text_io
