#pragma once

#include <string>

#include "funk/ast.hpp"
#include "funk/lexer.hpp"

namespace funk {

// Parses the concrete syntax, sugar included (`proc`, capture lists,
// multi-binder effect abstraction and application). Throws ParseError.
Program parse(const std::string& source);

// Convenience for parsing a type in isolation (used by tests).
TypePtr parse_type(const std::string& source);

}  // namespace funk
