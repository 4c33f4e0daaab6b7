#include "funk/driver.hpp"

#include <fstream>
#include <sstream>

namespace funk {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Compiled compile_source(const std::string& source, const std::string& path) {
  Compiled out;
  out.source = frontend(source, path);
  out.checked = check_program(out.source.unique);
  return out;
}

Compiled compile_file(const std::string& path) {
  return compile_source(read_file(path), path);
}

}  // namespace funk
