#pragma once

#include <filesystem>
#include <string>

namespace snnlz {

// Writes to a sibling temp file and renames it into place, so readers never
// observe a partially written file.
void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents);

std::string ReadFile(const std::filesystem::path& path);

}  // namespace snnlz
