#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace improver {

// Collapse whitespace runs to single spaces and trim. Used as the
// candidate-dedup key and as the verifier replay key so formatting drift
// does not break matches.
std::string normalize_whitespace(std::string_view text);

std::string read_file(const std::filesystem::path& path);

// Write via temp file + atomic rename so a crash mid-run leaves prior
// output intact.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace improver
