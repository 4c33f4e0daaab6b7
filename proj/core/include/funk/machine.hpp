#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "funk/ast.hpp"

namespace funk {

// Values are exactly the value-form expressions (numbers, list literals,
// functions, effect abstractions); substitution splices them back into
// terms, so no separate value representation is needed.
using Value = ExprPtr;

bool is_value(const ExprPtr& e);

// The value stack. Index i is back-index i (sigma{i}); push_back pushes onto
// the front of the conceptual stack, so existing back-indices never move.
using ValueStack = std::vector<Value>;

// Removes the n most recently pushed entries.
template <class T>
std::vector<T> drop(std::size_t n, std::vector<T> stack) {
  if (n > stack.size()) throw std::logic_error("drop: n exceeds stack size");
  stack.resize(stack.size() - n);
  return stack;
}

// A suspended call: the variable receiving the return value, its type, the
// statement to resume, and the caller's locals count.
struct Frame {
  std::string var;
  TypePtr annot;
  StmtPtr rest;
  std::size_t locals = 0;
};

struct State {
  StmtPtr stmt;
  std::vector<Frame> control;  // back() is the innermost frame
  ValueStack values;
  std::size_t locals = 0;
};

struct Observation {
  enum class Kind { Num, Fun, Abs, List };
  Kind kind = Kind::Num;
  long long num = 0;
  std::vector<long long> list;

  static Observation number(long long n) { return {Kind::Num, n, {}}; }
  static Observation fun() { return {Kind::Fun, 0, {}}; }
  static Observation abs() { return {Kind::Abs, 0, {}}; }
  static Observation of_list(std::vector<long long> xs) {
    return {Kind::List, 0, std::move(xs)};
  }
};

bool operator==(const Observation& a, const Observation& b);
std::string to_string(const Observation& o);

enum class StuckKind {
  LocOutOfRange,
  FreeVariable,
  NotAFunction,
  NotAnAbstraction,
  ArityMismatch,
  DeltaDomain,
  EmptyListOp,
  BadCondition,
};

std::string to_string(StuckKind kind);

// An untrapped error; well-typed programs never raise one.
struct StuckError : std::runtime_error {
  StuckError(StuckKind kind, const std::string& message)
      : std::runtime_error(message), kind(kind) {}
  StuckKind kind;
};

struct FuelExhausted : std::runtime_error {
  FuelExhausted() : std::runtime_error("fuel exhausted") {}
  explicit FuelExhausted(const std::string& what) : std::runtime_error(what) {}
};

// A shared step budget. Evaluation burns fuel on each expansion step
// (fix unrolling, let splicing, effect application), so a diverging
// expression also runs out rather than spinning. A depth bound caps native
// recursion in the tree-walking evaluators; exceeding it is reported as
// resource exhaustion, like running out of fuel.
class Fuel {
 public:
  explicit Fuel(std::uint64_t amount, std::size_t max_depth = 10000)
      : remaining_(amount), max_depth_(max_depth) {}

  void burn() {
    if (remaining_ == 0) throw FuelExhausted();
    --remaining_;
  }
  std::uint64_t remaining() const { return remaining_; }

  // Guards one level of evaluator recursion.
  class Scope {
   public:
    explicit Scope(Fuel& fuel) : fuel_(fuel) {
      if (fuel_.depth_ >= fuel_.max_depth_)
        throw FuelExhausted("evaluation depth limit exceeded");
      ++fuel_.depth_;
    }
    ~Scope() { --fuel_.depth_; }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    Fuel& fuel_;
  };

 private:
  std::uint64_t remaining_;
  std::size_t depth_ = 0;
  std::size_t max_depth_;
};

// Closed-expression evaluation against a value stack. Throws StuckError /
// FuelExhausted.
Value eval_expr(const ExprPtr& e, const ValueStack& sigma, Fuel& fuel);
Value eval_expr(const ExprPtr& e, const ValueStack& sigma);

// Primitive operator semantics.
Value delta(const std::string& op, const std::vector<Value>& args, Span span);

Observation observe(const Value& v);

struct StepOutcome {
  bool final = false;
  State next;             // meaningful when !final
  const char* rule = "";  // Init / Call / TailCall / Return / If
};

// One reduction. `no_tailcall` executes a tail call as a call followed by
// an immediate return, retaining the caller's locals until it finishes.
StepOutcome step(const State& st, Fuel& fuel, bool no_tailcall = false);

struct RunStats {
  std::uint64_t steps = 0;
  std::size_t max_value_stack = 0;
  std::size_t max_control_stack = 0;
  std::size_t max_retained_cells = 0;
};

struct StepRecord {
  std::uint64_t step = 0;
  const char* rule = "";
  std::string stmt;
  std::size_t stack_depth = 0;
  std::size_t locals = 0;
  std::size_t control_depth = 0;
};

struct RunOptions {
  std::uint64_t fuel = 1000000;
  bool no_tailcall = false;
  // Called on the initial state and after every step (the preservation
  // oracle hooks in here). Throwing aborts the run.
  std::function<void(const State&, std::uint64_t step)> per_state;
  std::function<void(const StepRecord&)> trace;
};

struct RunResult {
  enum class Status { Final, Stuck, FuelExhausted };
  Status status = Status::Final;
  Observation observation;  // meaningful when Final
  RunStats stats;
  std::optional<StuckKind> stuck_kind;
  std::string message;  // stuck diagnostics with a state dump
};

State initial_state(const Program& p);

// Iterates `step` from the initial state. The program must be elaborated
// (checker-inserted annotations present).
RunResult run(const Program& p, const RunOptions& opts = {});

// Total list cells embedded in a value (closures included); the retained-
// cell statistic sums this over the value stack.
std::size_t cell_count(const Value& v);

}  // namespace funk
