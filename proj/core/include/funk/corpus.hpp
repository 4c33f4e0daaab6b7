#pragma once

#include <optional>
#include <string>
#include <vector>

#include "funk/errors.hpp"
#include "funk/machine.hpp"

namespace funk {

// The golden program corpus: the worked examples with their expected
// verdicts, plus synthesized edge cases. Accepted entries pin the program
// type (compared up to quantifier renaming) and the observation.
struct CorpusEntry {
  std::string name;
  std::string file;  // relative to the corpus directory
  bool accept = false;
  std::string type;             // accepts: expected type, source syntax
  Observation observation;      // accepts: expected result
  std::optional<ErrorKind> reject_kind;  // rejects: expected diagnostic
};

const std::vector<CorpusEntry>& corpus();

// The tail-call workload parameterized by recursion depth and list length
// (the shipped tailcall_lists.fk is this program at n = 100).
std::string tailcall_lists_source(int n);

}  // namespace funk
