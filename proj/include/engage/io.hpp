#pragma once

// Small file and text helpers shared by the artifact readers and writers.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace engage::io {

/// Splits a CSV line on commas. Artifacts never quote fields.
std::vector<std::string_view> split_csv(std::string_view line);

std::string_view trim(std::string_view s);

/// Strict parsing of a whole field. Returns false on failure.
bool parse_int(std::string_view field, std::int64_t& out);
bool parse_real(std::string_view field, double& out);

/// Shortest decimal text that round-trips to the same double.
std::string format_real(double value);

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string sha256_hex(std::string_view data);

}  // namespace engage::io
