#pragma once

#include <filesystem>
#include <string>

namespace medalqa::util {

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over the target, so a failed
// run never leaves a partial artifact behind.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Resolves a path relative to the repository root (assets/, data/). Checks
// the MEDALQA_ROOT environment variable first, then the compiled-in source
// directory, then the current directory.
std::filesystem::path repo_path(const std::string& relative);

}  // namespace medalqa::util
