// SPDX-License-Identifier: Apache-2.0
#include "brain/io.hpp"

#include <fstream>
#include <sstream>

#include "brain/error.hpp"

namespace brain {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::not_found, path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::not_found, path.string(), "cannot write file");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace brain
