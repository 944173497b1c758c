// Copyright 2026 The MPD Toolkit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mpd {

/// Tab-separated table with a single header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a named column; throws SchemaError when absent.
  std::size_t column(std::string_view name) const;
};

/// Reads a TSV file. Blank lines and lines starting with '#' are skipped.
/// Every row must have as many fields as the header.
Table read_table(const std::filesystem::path& path);
void write_table(const std::filesystem::path& path, const Table& table);

/// Shortest representation that round-trips through strtod.
std::string format_double(double v);
double parse_double(std::string_view text, std::string_view context);
long long parse_int(std::string_view text, std::string_view context);

std::vector<std::string> split(std::string_view s, char sep);

/// Reads a whole file into a string. Throws MissingInput.
std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for batch use: write to temp then rename.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mpd
