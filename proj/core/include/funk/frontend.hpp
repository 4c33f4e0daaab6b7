#pragma once

#include <map>
#include <string>

#include "funk/ast.hpp"

namespace funk {

// Expands all sugar: `proc` definitions become var/fix/let chains and
// capture lists become let-copies. The result contains no Proc statements
// and no Fun captures.
Program desugar(const Program& p);

struct NameInfo {
  std::string original;
  Span span;
};

struct UniquifyResult {
  Program program;
  std::map<std::string, NameInfo> name_table;
};

// Renames every binder to a globally fresh `base$k` (deterministic counter,
// pre-order), resolving each use to its binding site. Effect-quantifier
// binders inside types are renamed with the same counter. Throws TypeError
// (unbound-var) on unresolved names. Expects a desugared program.
UniquifyResult uniquify(const Program& p);

// A parsed source file together with its uniquified form.
struct SourceProgram {
  std::string path;
  std::string source;
  Program ast;  // surface form as parsed
  Program desugared;
  Program unique;
  std::map<std::string, NameInfo> name_table;
};

// parse + desugar + uniquify. Throws ParseError / TypeError.
SourceProgram frontend(const std::string& source, const std::string& path);

}  // namespace funk
