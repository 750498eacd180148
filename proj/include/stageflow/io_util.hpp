#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace stageflow {

std::string_view trim(std::string_view text);

// Drops everything from the first '#' and trims whitespace.
std::string_view strip_comment(std::string_view line);

std::vector<std::string_view> split_ws(std::string_view text);

// Writes to "<path>.tmp" and renames over `path`, so readers never observe a
// half-written artifact.
void write_file_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace stageflow
