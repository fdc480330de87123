#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gspnetmon {

/// Decimal rendering with 17 significant digits ("%.17g"); zero prints as "0".
std::string format_real(double value);

/// Writes `contents` to `path` through a temporary sibling and a rename, so
/// readers never observe a half-written file. Creates parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Whole file as a string; throws FormatError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace gspnetmon
