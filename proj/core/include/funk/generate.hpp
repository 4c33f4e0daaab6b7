#pragma once

#include <cstdint>
#include <vector>

#include "funk/ast.hpp"
#include "funk/typecheck.hpp"

namespace funk {

// Goal-directed generation of well-typed programs: terms are built by
// instantiating the typing rules, so every output checks by construction
// (the tests verify that too). Same seed, same program. Generated programs
// never recurse, so they always terminate.
class Generator {
 public:
  Generator(std::uint64_t seed, int size_bound);

  Program program();

  // Pieces used by the property suites.
  struct Ctx {
    TypeEnv env;
    Effect reads;
    Effect locals;
  };

  TypePtr random_type(int depth);
  ExprPtr typed_expr(const Ctx& ctx, const TypePtr& target, int depth);
  StmtPtr typed_stmt(const Ctx& ctx, const TypePtr& target, int depth);

  // A random context of plain and copy bindings whose reads cover a subset
  // of the plain ones.
  Ctx random_ctx(int bindings);

  std::uint64_t pick(std::uint64_t n);  // uniform in [0, n)
  std::string fresh(const char* base);

 private:
  std::uint64_t rng_state_;
  int budget_ = 0;
  int name_counter_ = 0;
};

// Deterministic batch generation; program i uses seed + i.
std::vector<Program> generate_programs(std::uint64_t seed, int count,
                                       int size_bound);
Program generate_program(std::uint64_t seed, int size_bound);

}  // namespace funk
