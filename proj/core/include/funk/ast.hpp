#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

// Core syntax: effects, types, expressions and statements, in both surface
// form (as parsed) and internal form (carrying stack locations and the
// annotations inserted by the checker). All nodes are immutable; passes
// rebuild instead of mutating, so subtrees are shared freely.

namespace funk {

struct Span {
  int line = 0;
  int col = 0;
  bool valid() const { return line > 0; }
};

class Type;
using TypePtr = std::shared_ptr<const Type>;

// ---------------------------------------------------------------------------
// Effects

// An effect atom is either a named variable or a stack location. Location
// atoms carry a type annotation; the annotation is ignored by evaluation and
// exists for the static oracle and for traces.
struct EffectAtom {
  enum class Kind { Var, Loc };

  Kind kind = Kind::Var;
  std::string name;       // Kind::Var
  std::size_t index = 0;  // Kind::Loc
  TypePtr annot;          // Kind::Loc

  static EffectAtom var(std::string n);
  static EffectAtom loc(std::size_t index, TypePtr annot);

  bool is_var() const { return kind == Kind::Var; }
  bool is_loc() const { return kind == Kind::Loc; }
};

bool operator==(const EffectAtom& a, const EffectAtom& b);
inline bool operator!=(const EffectAtom& a, const EffectAtom& b) { return !(a == b); }

// Total order used to keep effects canonical: Var atoms by name first, then
// Loc atoms by index.
bool atom_less(const EffectAtom& a, const EffectAtom& b);

// A finite set of effect atoms. Stored sorted and deduplicated, so equality
// is independent of insertion order.
class Effect {
 public:
  Effect() = default;
  explicit Effect(std::vector<EffectAtom> atoms);

  static Effect single(EffectAtom a);
  static Effect vars(std::initializer_list<std::string> names);

  bool contains(const EffectAtom& a) const;
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<EffectAtom>& atoms() const { return atoms_; }

  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

 private:
  std::vector<EffectAtom> atoms_;
};

bool operator==(const Effect& a, const Effect& b);
inline bool operator!=(const Effect& a, const Effect& b) { return !(a == b); }

Effect effect_union(const Effect& a, const Effect& b);
Effect effect_minus(const Effect& a, const Effect& b);
bool effect_subset(const Effect& a, const Effect& b);
bool effect_disjoint(const Effect& a, const Effect& b);
Effect effect_insert(const Effect& a, EffectAtom atom);

// ---------------------------------------------------------------------------
// Types

class Type {
 public:
  enum class Kind { Top, Int, IntList, Func, EffAll };

  Kind kind() const { return kind_; }

  // Func
  const std::vector<TypePtr>& params() const { return params_; }
  const TypePtr& ret() const { return ret_; }
  const Effect& effect() const { return effect_; }

  // EffAll
  const std::string& var() const { return var_; }
  const TypePtr& body() const { return body_; }

  static TypePtr top();
  static TypePtr integer();
  static TypePtr int_list();
  static TypePtr func(std::vector<TypePtr> params, TypePtr ret, Effect effect);
  static TypePtr eff_all(std::string var, TypePtr body);

  // An abstraction type: a function type or an effect-quantified one.
  bool is_abstraction_type() const {
    return kind_ == Kind::Func || kind_ == Kind::EffAll;
  }

 private:
  explicit Type(Kind k) : kind_(k) {}

  Kind kind_;
  std::vector<TypePtr> params_;
  TypePtr ret_;
  Effect effect_;
  std::string var_;
  TypePtr body_;
};

// Structural equality; effect-quantifier binders are compared up to
// consistent renaming (there is no subtyping, this is the one equality).
bool type_equal(const TypePtr& a, const TypePtr& b);

// Deterministic total order over types; used only to canonicalize effect
// atom order and for stable diagnostics.
int type_compare(const TypePtr& a, const TypePtr& b);

// Free atoms of a type: effect variables and locations not bound by an
// effect quantifier.
Effect fv_type(const TypePtr& t);

// ---------------------------------------------------------------------------
// Expressions and statements

class Expr;
class Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Param {
  std::string name;
  TypePtr type;
};

struct VarExpr {
  std::string name;
};

// A stack location; arises only during reduction, never in parsed programs.
struct LocExpr {
  std::size_t index;
  TypePtr annot;
};

struct NumExpr {
  long long value;
};

// Integer-list literal. `nil` parses to the empty literal; non-empty
// literals arise when evaluated list values are substituted into terms.
struct ListExpr {
  std::vector<long long> elems;
};

struct PrimExpr {
  std::string op;
  std::vector<ExprPtr> args;
};

struct FunExpr {
  std::vector<Param> params;
  // Capture-list sugar `fun(x:T; y, z)[φ]{s}`: names copied into
  // function-local storage. Empty after desugaring.
  std::vector<std::string> captures;
  Effect effect;
  TypePtr ret;  // null in surface form; present after elaboration
  StmtPtr body;
};

struct EffAbsExpr {
  std::string var;
  ExprPtr body;  // grammatically an abstraction (Fun or EffAbs)
};

struct EffAppExpr {
  ExprPtr fn;
  EffectAtom arg;
};

struct LetExpr {
  std::string var;
  ExprPtr rhs;
  ExprPtr body;
};

struct FixExpr {
  std::string var;
  TypePtr annot;
  ExprPtr body;  // grammatically an abstraction
};

class Expr {
 public:
  using Node = std::variant<VarExpr, LocExpr, NumExpr, ListExpr, PrimExpr,
                            FunExpr, EffAbsExpr, EffAppExpr, LetExpr, FixExpr>;
  enum class Kind { Var, Loc, Num, List, Prim, Fun, EffAbs, EffApp, Let, Fix };

  Expr(Node node, Span span) : node_(std::move(node)), span_(span) {}

  Kind kind() const { return static_cast<Kind>(node_.index()); }
  Span span() const { return span_; }

  template <class T>
  const T& as() const {
    return std::get<T>(node_);
  }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&node_);
  }

  bool is_abstraction() const {
    return kind() == Kind::Fun || kind() == Kind::EffAbs;
  }

 private:
  Node node_;
  Span span_;
};

struct VarInitStmt {
  std::string var;
  TypePtr annot;  // null in surface form; present after elaboration
  ExprPtr rhs;
  StmtPtr rest;
};

struct LetCallStmt {
  std::string var;
  ExprPtr fn;
  std::vector<ExprPtr> args;
  StmtPtr rest;
};

struct TailCallStmt {
  ExprPtr fn;
  std::vector<ExprPtr> args;
};

struct ReturnStmt {
  ExprPtr value;
};

struct IfStmt {
  ExprPtr cond;
  StmtPtr then_branch;
  StmtPtr else_branch;
};

// Named, recursive, effect-polymorphic definition sugar. Exists only in
// parsed surface programs; desugaring rewrites it to var/let/fix.
struct ProcStmt {
  std::vector<std::string> effect_binders;
  std::string name;
  std::vector<Param> params;
  std::vector<std::string> captures;
  TypePtr ret;
  Effect effect;
  StmtPtr body;
  StmtPtr rest;
};

class Stmt {
 public:
  using Node = std::variant<VarInitStmt, LetCallStmt, TailCallStmt, ReturnStmt,
                            IfStmt, ProcStmt>;
  enum class Kind { VarInit, LetCall, TailCall, Return, If, Proc };

  Stmt(Node node, Span span) : node_(std::move(node)), span_(span) {}

  Kind kind() const { return static_cast<Kind>(node_.index()); }
  Span span() const { return span_; }

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
  Span span_;
};

struct Program {
  StmtPtr body;
};

ExprPtr make_expr(Expr::Node node, Span span = {});
StmtPtr make_stmt(Stmt::Node node, Span span = {});

// Structural equality, names compared verbatim (uniquified programs need no
// alpha-comparison).
bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool stmt_equal(const StmtPtr& a, const StmtPtr& b);
inline bool program_equal(const Program& a, const Program& b) {
  return stmt_equal(a.body, b.body);
}

// Free term variables (both stack- and copy-bound occurrences).
std::vector<std::string> free_vars(const ExprPtr& e);
std::vector<std::string> free_vars(const StmtPtr& s);

// Stack locations occurring anywhere in a term: as location expressions, in
// effect-application arguments, and inside the effects of annotation types.
Effect locations_in(const StmtPtr& s);
Effect locations_in(const ExprPtr& e);

}  // namespace funk
