#pragma once

#include <string>
#include <vector>

#include "funk/typecheck.hpp"

namespace funk {

// One program run under all three semantics. The erased comparison maps an
// `abs` observation of the direct run to `fun` (the erased language has a
// single function form); the region comparison is exact.
struct DiffEntry {
  std::string name;
  std::string direct;
  std::string erased;
  std::string region;
  bool agree = false;
  std::vector<std::string> caveats;
};

DiffEntry diff_program(const std::string& name, const CheckedProgram& p,
                       std::uint64_t fuel = 1000000);

}  // namespace funk
