#pragma once

#include <memory>
#include <vector>

#include "funk/ast.hpp"
#include "funk/errors.hpp"

namespace funk {

// An ordered type environment. Lookup returns the rightmost binding; the
// order is significant (variables appear in types) and is never permuted.
// Copy bindings mark let/fix-bound variables, whose reads are not effects.
struct Binding {
  std::string name;
  TypePtr type;
  bool is_copy = false;
};

class TypeEnv {
 public:
  TypeEnv() = default;

  const Binding* lookup(const std::string& name) const {
    for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }

  TypeEnv extended(std::string name, TypePtr type, bool is_copy) const {
    TypeEnv out = *this;
    out.bindings_.push_back(Binding{std::move(name), std::move(type), is_copy});
    return out;
  }

  const std::vector<Binding>& bindings() const { return bindings_; }

 private:
  std::vector<Binding> bindings_;
};

// The effect context a term is checked under. In strict mode membership is
// decided against a fixed set; in collecting mode unknown atoms are recorded
// as demands instead, which reconstructs the least read effect of a
// mid-execution statement (used by state typing).
class EffectCtx {
 public:
  static EffectCtx strict(Effect allowed) {
    EffectCtx c;
    c.allowed_ = std::move(allowed);
    return c;
  }

  static EffectCtx collecting(Effect known) {
    EffectCtx c;
    c.allowed_ = std::move(known);
    c.demanded_ = std::make_shared<Effect>();
    return c;
  }

  bool allows(const EffectAtom& a) const {
    if (allowed_.contains(a)) return true;
    if (!demanded_) return false;
    *demanded_ = effect_insert(*demanded_, a);
    return true;
  }

  EffectCtx extended(EffectAtom a) const {
    EffectCtx out = *this;
    out.allowed_ = effect_insert(out.allowed_, std::move(a));
    return out;
  }

  const Effect& allowed() const { return allowed_; }
  Effect demanded() const { return demanded_ ? *demanded_ : Effect(); }

 private:
  Effect allowed_;
  std::shared_ptr<Effect> demanded_;
};

// Primitive operator signatures.
struct OpSignature {
  std::vector<TypePtr> params;
  TypePtr ret;
};
const OpSignature& typeof_op(const std::string& op, Span span = {});

// Well-formedness. Both throw TypeError.
void wf_effect(const TypeEnv& env, const Effect& eff, Span span);
void wf_type(const TypeEnv& env, const TypePtr& t, Span span);

struct ExprTyping {
  TypePtr type;
  ExprPtr elaborated;
};

struct StmtTyping {
  TypePtr type;
  StmtPtr elaborated;
};

// Expression and statement typing; elaboration fills in function return
// types and variable-initialization annotations. Throws TypeError.
ExprTyping type_expr(const TypeEnv& env, const EffectCtx& reads,
                     const ExprPtr& e);
StmtTyping type_stmt(const TypeEnv& env, const EffectCtx& reads,
                     const Effect& locals, const StmtPtr& s);

inline ExprTyping type_expr(const TypeEnv& env, const Effect& reads,
                            const ExprPtr& e) {
  return type_expr(env, EffectCtx::strict(reads), e);
}
inline StmtTyping type_stmt(const TypeEnv& env, const Effect& reads,
                            const Effect& locals, const StmtPtr& s) {
  return type_stmt(env, EffectCtx::strict(reads), locals, s);
}

struct CheckedProgram {
  Program program;  // elaborated
  TypePtr type;
};

// Checks a desugared, uniquified program under empty environment and empty
// effects. Throws TypeError.
CheckedProgram check_program(const Program& p);

// ---------------------------------------------------------------------------
// Stack typings (used by the runtime preservation oracle)

// Types classifying the value stack; index i is back-index i, mirroring the
// machine's stack layout.
using StackTyping = std::vector<TypePtr>;

// True iff every location atom's annotation matches the stack typing at its
// back-index. Var atoms and out-of-range indices are unsatisfiable.
bool satisfies(const StackTyping& sigma, const Effect& eff);

// Types each stack value under empty environment and empty effect.
StackTyping type_value_stack(const std::vector<ExprPtr>& values);

// Types that compare equal once every effect annotation is ignored; used to
// tell effect disagreements apart from structural mismatches in diagnostics.
bool equal_ignoring_effects(const TypePtr& a, const TypePtr& b);

}  // namespace funk
