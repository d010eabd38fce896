#pragma once

#include <filesystem>
#include <string>

namespace sonine {

// 17 significant digits, round-trip exact.
std::string fmt17(double x);

// Creates the directory (and parents) if missing.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace sonine
