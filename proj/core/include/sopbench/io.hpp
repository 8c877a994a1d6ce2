#pragma once

#include <string>
#include <string_view>

namespace sopbench {

// Whole-file read; DataError when the file cannot be opened.
std::string read_text_file(const std::string& path);

// Overwrite; DataError when the file cannot be written.
void write_text_file(const std::string& path, std::string_view content);

}  // namespace sopbench
