#pragma once

#include "funk/ast.hpp"

// Substitution. Programs are uniquified before any substitution runs and
// replacements are closed, so neither operation needs capture avoidance
// beyond respecting shadowing binders.

namespace funk {

// Replaces free term occurrences of `name` by the closed expression
// `replacement`. Does not touch effects or types (a copy-bound variable
// cannot occur there in a checked program).
ExprPtr subst_expr(const std::string& name, const ExprPtr& replacement,
                   const ExprPtr& target);
StmtPtr subst_expr(const std::string& name, const ExprPtr& replacement,
                   const StmtPtr& target);

// Replaces the variable `name` by an effect atom everywhere it can occur:
// in term position, in effect-application arguments, and inside effects
// (which live in types, so substitution descends into annotations).
TypePtr subst_atom(const std::string& name, const EffectAtom& atom,
                   const TypePtr& target);
Effect subst_atom(const std::string& name, const EffectAtom& atom,
                  const Effect& target);
ExprPtr subst_atom(const std::string& name, const EffectAtom& atom,
                   const ExprPtr& target);
StmtPtr subst_atom(const std::string& name, const EffectAtom& atom,
                   const StmtPtr& target);

}  // namespace funk
