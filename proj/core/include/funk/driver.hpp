#pragma once

#include <string>

#include "funk/frontend.hpp"
#include "funk/typecheck.hpp"

namespace funk {

struct Compiled {
  SourceProgram source;
  CheckedProgram checked;  // elaborated
};

// parse -> desugar -> uniquify -> check. Throws ParseError / TypeError.
Compiled compile_source(const std::string& source, const std::string& path);
Compiled compile_file(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace funk
