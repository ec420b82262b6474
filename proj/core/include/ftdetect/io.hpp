#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ftdetect {

/// Whole-file binary read. Throws DataError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes through a sibling temporary file and renames it into place.
/// Throws DataError on failure.
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace ftdetect
