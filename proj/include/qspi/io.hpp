#pragma once

#include <filesystem>
#include <string>

namespace qspi {

// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_g17(double value);

// Writes via a temp file in the same directory, then renames over the target.
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace qspi
