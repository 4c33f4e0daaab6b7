#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "funk/ast.hpp"
#include "funk/machine.hpp"

// The erased language: the same terms with every type and effect removed,
// effect abstractions collapsed to their bodies and effect applications to
// their heads. A separate term kind keeps "no effect operations at runtime"
// structurally true rather than a convention.

namespace funk::erased {

class Expr;
class Stmt;
using ExprPtr = std::shared_ptr<const Expr>;
using StmtPtr = std::shared_ptr<const Stmt>;

struct VarExpr {
  std::string name;
};
struct LocExpr {
  std::size_t index;  // bare index; no annotation survives erasure
};
struct NumExpr {
  long long value;
};
struct ListExpr {
  std::vector<long long> elems;
};
struct PrimExpr {
  std::string op;
  std::vector<ExprPtr> args;
};
struct FunExpr {
  std::vector<std::string> params;
  StmtPtr body;
};
struct LetExpr {
  std::string var;
  ExprPtr rhs;
  ExprPtr body;
};
struct FixExpr {
  std::string var;
  ExprPtr body;
};

class Expr {
 public:
  using Node = std::variant<VarExpr, LocExpr, NumExpr, ListExpr, PrimExpr,
                            FunExpr, LetExpr, FixExpr>;
  enum class Kind { Var, Loc, Num, List, Prim, Fun, Let, Fix };

  explicit Expr(Node node) : node_(std::move(node)) {}
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

struct VarInitStmt {
  std::string var;
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

class Stmt {
 public:
  using Node =
      std::variant<VarInitStmt, LetCallStmt, TailCallStmt, ReturnStmt, IfStmt>;
  enum class Kind { VarInit, LetCall, TailCall, Return, If };

  explicit Stmt(Node node) : node_(std::move(node)) {}
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

struct Program {
  StmtPtr body;
};

ExprPtr make_expr(Expr::Node node);
StmtPtr make_stmt(Stmt::Node node);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool stmt_equal(const StmtPtr& a, const StmtPtr& b);

std::string pretty(const ExprPtr& e);
std::string pretty(const StmtPtr& s);
std::string pretty(const Program& p);

// Term substitution for the erased machine (values and bare locations).
ExprPtr subst(const std::string& name, const ExprPtr& replacement,
              const ExprPtr& target);
StmtPtr subst(const std::string& name, const ExprPtr& replacement,
              const StmtPtr& target);

// Runs an erased program with the same reduction rules minus every type and
// effect operation. Observations never include `abs`: erasure leaves a
// single function form.
RunResult run(const Program& p, std::uint64_t fuel = 1000000);

}  // namespace funk::erased

namespace funk {

// The erasure function: drops annotations, collapses effect abstraction and
// application. Idempotent on already-erased shapes.
erased::ExprPtr erase(const ExprPtr& e);
erased::StmtPtr erase(const StmtPtr& s);
erased::Program erase(const Program& p);

// The observation mapping for the erasure property: an `abs` observation of
// the source corresponds to `fun` after erasure.
Observation erased_view(const Observation& o);

}  // namespace funk
