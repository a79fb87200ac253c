#pragma once

#include <string>

namespace dlo::io {

// Writes contents to path via a temp file + rename so a killed process never
// leaves a truncated file behind.
void atomic_write_file(const std::string& path, const std::string& contents);

std::string read_file(const std::string& path);

bool file_exists(const std::string& path);

void ensure_directory(const std::string& path);

} // namespace dlo::io
