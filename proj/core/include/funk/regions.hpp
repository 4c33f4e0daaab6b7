#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "funk/machine.hpp"
#include "funk/typecheck.hpp"

// A prototypical region calculus and the type-directed translation into it:
// every stack-allocated variable gets its own region, reads become
// dereferences, and region lifetimes follow the allocating scope (LIFO).

namespace funk::region {

class Type;
class Term;
using TypePtr = std::shared_ptr<const Type>;
using TermPtr = std::shared_ptr<const Term>;

// Region effects are finite sets of region names.
using RegionSet = std::set<std::string>;

class Type {
 public:
  enum class Kind { Int, IntList, Arrow, All, At };

  Kind kind() const { return kind_; }

  // Arrow
  const std::vector<TypePtr>& params() const { return params_; }
  const TypePtr& ret() const { return ret_; }
  const RegionSet& latent() const { return latent_; }

  // All
  const std::string& var() const { return var_; }
  const TypePtr& body() const { return body_; }

  // At
  const TypePtr& inner() const { return body_; }
  const std::string& at() const { return var_; }

  static TypePtr integer();
  static TypePtr int_list();
  static TypePtr arrow(std::vector<TypePtr> params, TypePtr ret,
                       RegionSet latent);
  static TypePtr all(std::string var, TypePtr body);
  static TypePtr at_region(TypePtr inner, std::string region);

 private:
  explicit Type(Kind k) : kind_(k) {}
  Kind kind_;
  std::vector<TypePtr> params_;
  TypePtr ret_;
  RegionSet latent_;
  std::string var_;  // All binder / At region
  TypePtr body_;     // All body / At inner
};

bool type_equal(const TypePtr& a, const TypePtr& b);  // All binders up to renaming
RegionSet free_regions(const TypePtr& t);
TypePtr subst_region_type(const std::string& from, const std::string& to,
                          const TypePtr& t);
std::string pretty(const TypePtr& t);

// ---------------------------------------------------------------------------
// Terms

struct VarTerm {
  std::string name;
};
struct NumTerm {
  long long value;
};
struct ListTerm {
  std::vector<long long> elems;
};
struct PrimTerm {
  std::string op;
  std::vector<TermPtr> args;
};
// Lambdas carry parameter types and a latent effect; the translation fills
// them in so the checker can synthesize without inference.
struct LamTerm {
  std::vector<std::pair<std::string, TypePtr>> params;
  RegionSet latent;
  TermPtr body;
};
struct AppTerm {
  TermPtr fn;
  std::vector<TermPtr> args;
};
struct FixTerm {
  std::string var;
  TypePtr annot;
  TermPtr body;
};
struct NewTerm {
  std::string region;
  TermPtr body;
};
struct AtTerm {
  TermPtr body;
  std::string region;
};
struct DerefTerm {
  TermPtr body;
  std::string region;
};
struct RegLamTerm {
  std::string region;
  TermPtr body;
};
struct RegAppTerm {
  TermPtr fn;
  std::string region;
};
struct IfTerm {
  TermPtr cond;
  TermPtr then_branch;
  TermPtr else_branch;
};
// A location value; exists only during evaluation.
struct LocTerm {
  std::string region;
  std::size_t index;
};

class Term {
 public:
  using Node = std::variant<VarTerm, NumTerm, ListTerm, PrimTerm, LamTerm,
                            AppTerm, FixTerm, NewTerm, AtTerm, DerefTerm,
                            RegLamTerm, RegAppTerm, IfTerm, LocTerm>;
  enum class Kind {
    Var,
    Num,
    List,
    Prim,
    Lam,
    App,
    Fix,
    New,
    At,
    Deref,
    RegLam,
    RegApp,
    If,
    Loc,
  };

  explicit Term(Node node) : node_(std::move(node)) {}
  Kind kind() const { return static_cast<Kind>(node_.index()); }
  template <class T>
  const T& as() const {
    return std::get<T>(node_);
  }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&node_);
  }

 private:
  Node node_;
};

TermPtr make_term(Term::Node node);
std::string pretty(const TermPtr& t);

// let x = r1 in r2 is sugar for (\x. r2) r1; built and printed as such.
TermPtr let_in(std::string var, TypePtr var_type, RegionSet latent,
               TermPtr rhs, TermPtr body);

TermPtr subst_term(const std::string& name, const TermPtr& value,
                   const TermPtr& target);
TermPtr subst_region(const std::string& from, const std::string& to,
                     const TermPtr& target);

// New and RegLam binders in order of appearance (freshness checks).
std::vector<std::string> region_binders(const TermPtr& t);

// ---------------------------------------------------------------------------
// Static semantics

struct Env {
  std::map<std::string, TypePtr> vars;
  RegionSet regions;  // regions in scope

  Env with_var(const std::string& name, TypePtr t) const {
    Env out = *this;
    out.vars[name] = std::move(t);
    return out;
  }
  Env with_region(const std::string& r) const {
    Env out = *this;
    out.regions.insert(r);
    return out;
  }
};

// Synthesizes a type under an ambient permitted effect. At/Deref require
// their region in the ambient effect; Arrow latent effects are checked
// against it at application sites; New hides its region and rejects escape
// through the result type. Throws TypeError.
TypePtr typecheck(const Env& env, const RegionSet& effect, const TermPtr& t);

// ---------------------------------------------------------------------------
// Translation from the source calculus

// The variable-to-region map driving the translation; a variable is mapped
// exactly when it is bound on the stack (including effect parameters).
using RegionMap = std::map<std::string, std::string>;

TypePtr translate_type(const funk::TypePtr& t, const RegionMap& r);
RegionSet translate_effect(const funk::Effect& eff, const RegionMap& r);

// Related region environment: top bindings vanish, copies stay plain, stack
// bindings become located types (the single-binding variant).
Env relate_env(const TypeEnv& gamma, const RegionMap& r);

class Translator {
 public:
  TermPtr program(const CheckedProgram& p);

  // Exposed for tests translating open fragments.
  TermPtr stmt(const StmtPtr& s, const TypeEnv& gamma, const Effect& reads,
               const RegionMap& r);
  TermPtr expr(const ExprPtr& e, const TypeEnv& gamma, const Effect& reads,
               const RegionMap& r);

 private:
  std::string fresh_region();
  std::string fresh_value();
  int region_counter_ = 0;
  int value_counter_ = 0;
};

TermPtr translate(const CheckedProgram& p);

// ---------------------------------------------------------------------------
// Dynamic semantics

struct RunStats {
  std::uint64_t allocations = 0;
  std::size_t peak_live_regions = 0;
  std::size_t peak_live_values = 0;
  std::size_t peak_live_list_cells = 0;
};

struct RunResult {
  enum class Status { Final, TrapDangling, TrapStuck, FuelExhausted };
  Status status = Status::Final;
  Observation observation;     // meaningful when Final
  bool opaque_location = false;  // result was a bare location
  RunStats stats;
  std::string message;
};

// Environment-free evaluation with a region store: regions are allocated on
// entry to `new`, deallocated (tombstoned) on exit, and dangling access
// traps.
RunResult run(const TermPtr& t, std::uint64_t fuel = 1000000);

}  // namespace funk::region
