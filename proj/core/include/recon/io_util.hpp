#pragma once

#include <string>

namespace recon::io {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace recon::io
