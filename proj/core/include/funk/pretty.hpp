#pragma once

#include <string>

#include "funk/ast.hpp"

// Canonical, deterministic rendering. Parsing the output of `pretty` yields
// the original term back for every location-free program, which the test
// suite relies on for round-trip checks.

namespace funk {

std::string pretty(const TypePtr& t);
std::string pretty(const Effect& eff);
std::string pretty(const EffectAtom& atom);
std::string pretty(const ExprPtr& e);
std::string pretty(const StmtPtr& s);
std::string pretty(const Program& p);

}  // namespace funk
