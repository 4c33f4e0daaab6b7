#pragma once

#include <functional>
#include <map>

#include "funk/machine.hpp"
#include "funk/typecheck.hpp"

namespace funk {

// Caches value typings across steps. Values are immutable and shared
// between consecutive states; entries pin their key, so a pointer can
// never be reused while cached.
class ValueTypeCache {
 public:
  TypePtr type_of(const Value& v);

 private:
  std::map<const Expr*, std::pair<Value, TypePtr>> entries_;
};

// Types a machine state. The read effect of the statement (and of each
// suspended frame) is not stored in the state, so it is reconstructed as
// the least effect demanded by the typing derivation, which the weakening
// properties make a sufficient witness. Throws TypeError on any violated
// premise.
TypePtr type_state(const State& st, ValueTypeCache* cache = nullptr);

// Observation typing: n matches int, fun matches any function type, abs any
// effect-quantified type, a list matches int list.
bool observation_matches(const Observation& o, const TypePtr& t);

// A per-state hook for run() asserting that every reachable state types at
// the program's type.
std::function<void(const State&, std::uint64_t)> state_typing_oracle(
    TypePtr program_type);

}  // namespace funk
