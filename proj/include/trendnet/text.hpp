#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trendnet {

// Shortest text that reads back as the same double ("%.17g").
std::string format_real(double v);
std::optional<double> parse_real(std::string_view s);

std::string_view trim(std::string_view s);

// Splits on \n, dropping a trailing \r from each line and a UTF-8 BOM from
// the first.
std::vector<std::string_view> split_lines(std::string_view text);

// One CSV record; handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_row(std::string_view line);
std::string csv_quote(std::string_view field);

std::string xml_escape(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string sha256_hex(std::string_view data);

}  // namespace trendnet
