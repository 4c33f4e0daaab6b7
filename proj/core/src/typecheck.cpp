#include "funk/typecheck.hpp"

#include <map>
#include <stdexcept>

#include "funk/pretty.hpp"
#include "funk/subst.hpp"

namespace funk {

namespace {

TypePtr strip_effects(const TypePtr& t) {
  if (!t) return t;
  switch (t->kind()) {
    case Type::Kind::Top:
    case Type::Kind::Int:
    case Type::Kind::IntList:
      return t;
    case Type::Kind::Func: {
      std::vector<TypePtr> params;
      params.reserve(t->params().size());
      for (const auto& p : t->params()) params.push_back(strip_effects(p));
      return Type::func(std::move(params), strip_effects(t->ret()), Effect());
    }
    case Type::Kind::EffAll:
      return Type::eff_all(t->var(), strip_effects(t->body()));
  }
  return t;
}

[[noreturn]] void mismatch_arg(const TypePtr& want, const TypePtr& got,
                               Span span, const std::string& what) {
  if (equal_ignoring_effects(want, got))
    throw TypeError(ErrorKind::EffectViolation, span,
                    what + " has effect-incompatible type " + pretty(got) +
                        ", expected " + pretty(want));
  throw TypeError(ErrorKind::Mismatch, span,
                  what + " has type " + pretty(got) + ", expected " +
                      pretty(want));
}

}  // namespace

bool equal_ignoring_effects(const TypePtr& a, const TypePtr& b) {
  return type_equal(strip_effects(a), strip_effects(b));
}

const OpSignature& typeof_op(const std::string& op, Span span) {
  static const std::map<std::string, OpSignature> table = [] {
    TypePtr i = Type::integer();
    TypePtr l = Type::int_list();
    std::map<std::string, OpSignature> t;
    t["+"] = OpSignature{{i, i}, i};
    t["-"] = OpSignature{{i, i}, i};
    t["*"] = OpSignature{{i, i}, i};
    t["iszero"] = OpSignature{{i}, i};
    t["dec"] = OpSignature{{i}, i};
    t["inc"] = OpSignature{{i}, i};
    t["cons"] = OpSignature{{i, l}, l};
    t["length"] = OpSignature{{l}, i};
    t["head"] = OpSignature{{l}, i};
    t["tail"] = OpSignature{{l}, l};
    return t;
  }();
  auto it = table.find(op);
  if (it == table.end())
    throw TypeError(ErrorKind::Mismatch, span, "unknown operator '" + op + "'");
  return it->second;
}

void wf_effect(const TypeEnv& env, const Effect& eff, Span span) {
  for (const auto& a : eff) {
    if (a.is_loc()) continue;  // locations are checked against stack typings
    const Binding* b = env.lookup(a.name);
    if (!b)
      throw TypeError(ErrorKind::MalformedEffect, span,
                      "effect names unbound variable '" + a.name + "'");
    if (b->is_copy)
      throw TypeError(ErrorKind::MalformedEffect, span,
                      "effect names copy-bound variable '" + a.name +
                          "' (reads of copies are not effects)");
  }
}

void wf_type(const TypeEnv& env, const TypePtr& t, Span span) {
  if (!t) return;
  switch (t->kind()) {
    case Type::Kind::Top:
    case Type::Kind::Int:
    case Type::Kind::IntList:
      return;
    case Type::Kind::Func: {
      for (const auto& p : t->params()) wf_type(env, p, span);
      wf_type(env, t->ret(), span);
      wf_effect(env, t->effect(), span);
      return;
    }
    case Type::Kind::EffAll:
      wf_type(env.extended(t->var(), Type::top(), false), t->body(), span);
      return;
  }
}

namespace {

ExprTyping infer_expr(const TypeEnv& env, const EffectCtx& reads,
                      const ExprPtr& e);
StmtTyping infer_stmt(const TypeEnv& env, const EffectCtx& reads,
                      const Effect& locals, const StmtPtr& s);

struct TypedArgs {
  std::vector<ExprPtr> elaborated;
  TypePtr func_type;
  ExprPtr fn;
};

// Types a callee and its arguments against the callee's parameter list.
TypedArgs type_call(const TypeEnv& env, const EffectCtx& reads,
                    const ExprPtr& fn, const std::vector<ExprPtr>& args,
                    Span span) {
  ExprTyping f = infer_expr(env, reads, fn);
  if (f.type->kind() != Type::Kind::Func)
    throw TypeError(ErrorKind::Mismatch, span,
                    "calling a value of non-function type " + pretty(f.type));
  if (f.type->params().size() != args.size())
    throw TypeError(ErrorKind::Arity, span,
                    "call expects " + std::to_string(f.type->params().size()) +
                        " argument(s), got " + std::to_string(args.size()));
  TypedArgs out;
  out.func_type = f.type;
  out.fn = f.elaborated;
  for (std::size_t i = 0; i < args.size(); ++i) {
    ExprTyping a = infer_expr(env, reads, args[i]);
    if (!type_equal(a.type, f.type->params()[i]))
      mismatch_arg(f.type->params()[i], a.type, args[i]->span(),
                   "argument " + std::to_string(i + 1));
    out.elaborated.push_back(a.elaborated);
  }
  return out;
}

// Callee effect must be permitted by the ambient effect; in a tail call it
// must additionally avoid the current frame's locals, which are popped
// before the call happens.
void check_callee_effect(const Effect& callee, const EffectCtx& reads,
                         const Effect& locals, bool tail, Span span) {
  for (const auto& a : callee) {
    if (tail && locals.contains(a))
      throw TypeError(ErrorKind::TailCallOverlap, span,
                      "tail call reads '" + pretty(a) +
                          "', which is popped before the call");
    if (!reads.allows(a))
      throw TypeError(ErrorKind::EffectViolation, span,
                      "callee effect mentions '" + pretty(a) +
                          "', which is not available here");
  }
}

ExprTyping infer_expr(const TypeEnv& env, const EffectCtx& reads,
                      const ExprPtr& e) {
  Span span = e->span();
  switch (e->kind()) {
    case Expr::Kind::Var: {
      const auto& v = e->as<VarExpr>();
      const Binding* b = env.lookup(v.name);
      if (!b)
        throw TypeError(ErrorKind::UnboundVar, span,
                        "unbound variable '" + v.name + "'");
      if (!b->is_copy && !reads.allows(EffectAtom::var(v.name)))
        throw TypeError(ErrorKind::NotInEffect, span,
                        "variable '" + v.name +
                            "' is stack-allocated but not in the effect");
      return {b->type, e};
    }
    case Expr::Kind::Loc: {
      const auto& l = e->as<LocExpr>();
      if (!reads.allows(EffectAtom::loc(l.index, l.annot)))
        throw TypeError(ErrorKind::NotInEffect, span,
                        "location #" + std::to_string(l.index) +
                            " is not in the effect");
      return {l.annot, e};
    }
    case Expr::Kind::Num:
      return {Type::integer(), e};
    case Expr::Kind::List:
      return {Type::int_list(), e};
    case Expr::Kind::Prim: {
      const auto& p = e->as<PrimExpr>();
      const OpSignature& sig = typeof_op(p.op, span);
      if (sig.params.size() != p.args.size())
        throw TypeError(ErrorKind::Arity, span,
                        "operator '" + p.op + "' expects " +
                            std::to_string(sig.params.size()) +
                            " argument(s), got " +
                            std::to_string(p.args.size()));
      std::vector<ExprPtr> args;
      args.reserve(p.args.size());
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        ExprTyping a = infer_expr(env, reads, p.args[i]);
        if (!type_equal(a.type, sig.params[i]))
          mismatch_arg(sig.params[i], a.type, p.args[i]->span(),
                       "operand " + std::to_string(i + 1) + " of '" + p.op +
                           "'");
        args.push_back(a.elaborated);
      }
      return {sig.ret, make_expr(PrimExpr{p.op, std::move(args)}, span)};
    }
    case Expr::Kind::Fun: {
      const auto& f = e->as<FunExpr>();
      if (!f.captures.empty())
        throw TypeError(ErrorKind::MalformedType, span,
                        "capture list survived desugaring");
      for (const auto& p : f.params) wf_type(env, p.type, span);
      wf_effect(env, f.effect, span);
      // The body reads the declared effect plus the parameters; the
      // parameters are what gets popped on return.
      TypeEnv body_env = env;
      Effect param_eff;
      for (const auto& p : f.params) {
        body_env = body_env.extended(p.name, p.type, false);
        param_eff = effect_insert(param_eff, EffectAtom::var(p.name));
      }
      EffectCtx body_reads =
          EffectCtx::strict(effect_union(f.effect, param_eff));
      StmtTyping body = infer_stmt(body_env, body_reads, param_eff, f.body);
      TypePtr ret = f.ret;
      if (ret) {
        wf_type(env, ret, span);
        if (!type_equal(ret, body.type))
          mismatch_arg(ret, body.type, span, "declared return type");
      } else {
        ret = body.type;
      }
      std::vector<TypePtr> param_types;
      param_types.reserve(f.params.size());
      for (const auto& p : f.params) param_types.push_back(p.type);
      TypePtr ty = Type::func(std::move(param_types), ret, f.effect);
      wf_type(env, ty, span);
      return {ty, make_expr(FunExpr{f.params, {}, f.effect, ret,
                                    body.elaborated},
                            span)};
    }
    case Expr::Kind::EffAbs: {
      const auto& f = e->as<EffAbsExpr>();
      // The body is checked with an empty read effect under x : top.
      ExprTyping body =
          infer_expr(env.extended(f.var, Type::top(), false),
                     EffectCtx::strict(Effect()), f.body);
      return {Type::eff_all(f.var, body.type),
              make_expr(EffAbsExpr{f.var, body.elaborated}, span)};
    }
    case Expr::Kind::EffApp: {
      const auto& a = e->as<EffAppExpr>();
      ExprTyping fn = infer_expr(env, reads, a.fn);
      if (fn.type->kind() != Type::Kind::EffAll)
        throw TypeError(ErrorKind::Mismatch, span,
                        "effect application of a value of type " +
                            pretty(fn.type));
      if (a.arg.is_var()) {
        const Binding* b = env.lookup(a.arg.name);
        if (!b)
          throw TypeError(ErrorKind::MalformedEffect, span,
                          "effect argument names unbound variable '" +
                              a.arg.name + "'");
        if (b->is_copy)
          throw TypeError(ErrorKind::MalformedEffect, span,
                          "effect argument '" + a.arg.name +
                              "' is copy-bound");
      }
      TypePtr out = subst_atom(fn.type->var(), a.arg, fn.type->body());
      return {out, make_expr(EffAppExpr{fn.elaborated, a.arg}, span)};
    }
    case Expr::Kind::Let: {
      const auto& l = e->as<LetExpr>();
      ExprTyping rhs = infer_expr(env, reads, l.rhs);
      ExprTyping body =
          infer_expr(env.extended(l.var, rhs.type, true), reads, l.body);
      return {body.type,
              make_expr(LetExpr{l.var, rhs.elaborated, body.elaborated},
                        span)};
    }
    case Expr::Kind::Fix: {
      const auto& f = e->as<FixExpr>();
      wf_type(env, f.annot, span);
      ExprTyping body =
          infer_expr(env.extended(f.var, f.annot, true), reads, f.body);
      if (!type_equal(body.type, f.annot))
        mismatch_arg(f.annot, body.type, span, "fix body");
      return {f.annot,
              make_expr(FixExpr{f.var, f.annot, body.elaborated}, span)};
    }
  }
  throw TypeError(ErrorKind::Mismatch, span, "unreachable expression kind");
}

StmtTyping infer_stmt(const TypeEnv& env, const EffectCtx& reads,
                      const Effect& locals, const StmtPtr& s) {
  Span span = s->span();
  StmtTyping result;
  switch (s->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& v = s->as<VarInitStmt>();
      ExprTyping rhs = infer_expr(env, reads, v.rhs);
      if (v.annot && !type_equal(v.annot, rhs.type))
        mismatch_arg(v.annot, rhs.type, span, "initializer");
      EffectAtom self = EffectAtom::var(v.var);
      StmtTyping rest = infer_stmt(env.extended(v.var, rhs.type, false),
                                   reads.extended(self),
                                   effect_insert(locals, self), v.rest);
      result = {rest.type,
                make_stmt(VarInitStmt{v.var, rhs.type, rhs.elaborated,
                                      rest.elaborated},
                          span)};
      break;
    }
    case Stmt::Kind::LetCall: {
      const auto& c = s->as<LetCallStmt>();
      TypedArgs call = type_call(env, reads, c.fn, c.args, span);
      check_callee_effect(call.func_type->effect(), reads, locals,
                          /*tail=*/false, span);
      EffectAtom self = EffectAtom::var(c.var);
      StmtTyping rest =
          infer_stmt(env.extended(c.var, call.func_type->ret(), false),
                     reads.extended(self), effect_insert(locals, self),
                     c.rest);
      result = {rest.type,
                make_stmt(LetCallStmt{c.var, call.fn,
                                      std::move(call.elaborated),
                                      rest.elaborated},
                          span)};
      break;
    }
    case Stmt::Kind::TailCall: {
      const auto& c = s->as<TailCallStmt>();
      TypedArgs call = type_call(env, reads, c.fn, c.args, span);
      check_callee_effect(call.func_type->effect(), reads, locals,
                          /*tail=*/true, span);
      TypePtr ret = call.func_type->ret();
      if (!effect_disjoint(fv_type(ret), locals))
        throw TypeError(ErrorKind::UpwardFunarg, span,
                        "tail call returns type " + pretty(ret) +
                            ", which mentions a local about to be popped");
      result = {ret, make_stmt(TailCallStmt{call.fn,
                                            std::move(call.elaborated)},
                               span)};
      break;
    }
    case Stmt::Kind::Return: {
      const auto& r = s->as<ReturnStmt>();
      ExprTyping v = infer_expr(env, reads, r.value);
      if (!effect_disjoint(fv_type(v.type), locals))
        throw TypeError(ErrorKind::UpwardFunarg, span,
                        "returned value has type " + pretty(v.type) +
                            ", which mentions a local about to be popped");
      result = {v.type, make_stmt(ReturnStmt{v.elaborated}, span)};
      break;
    }
    case Stmt::Kind::If: {
      const auto& i = s->as<IfStmt>();
      ExprTyping cond = infer_expr(env, reads, i.cond);
      if (!type_equal(cond.type, Type::integer()))
        mismatch_arg(Type::integer(), cond.type, i.cond->span(),
                     "if condition");
      StmtTyping t = infer_stmt(env, reads, locals, i.then_branch);
      StmtTyping f = infer_stmt(env, reads, locals, i.else_branch);
      if (!type_equal(t.type, f.type))
        throw TypeError(ErrorKind::Mismatch, span,
                        "if branches disagree: " + pretty(t.type) + " vs " +
                            pretty(f.type));
      result = {t.type,
                make_stmt(IfStmt{cond.elaborated, t.elaborated, f.elaborated},
                          span)};
      break;
    }
    case Stmt::Kind::Proc:
      throw TypeError(ErrorKind::MalformedType, span,
                      "proc statement survived desugaring");
  }
  // Checker postcondition: a statement's type never mentions its locals.
  if (!effect_disjoint(fv_type(result.type), locals))
    throw std::logic_error("statement type mentions a local: " +
                           pretty(result.type));
  return result;
}

}  // namespace

ExprTyping type_expr(const TypeEnv& env, const EffectCtx& reads,
                     const ExprPtr& e) {
  return infer_expr(env, reads, e);
}

StmtTyping type_stmt(const TypeEnv& env, const EffectCtx& reads,
                     const Effect& locals, const StmtPtr& s) {
  return infer_stmt(env, reads, locals, s);
}

CheckedProgram check_program(const Program& p) {
  StmtTyping t =
      infer_stmt(TypeEnv(), EffectCtx::strict(Effect()), Effect(), p.body);
  return CheckedProgram{Program{t.elaborated}, t.type};
}

bool satisfies(const StackTyping& sigma, const Effect& eff) {
  for (const auto& a : eff) {
    if (a.is_var()) return false;
    if (a.index >= sigma.size()) return false;
    if (!type_equal(sigma[a.index], a.annot)) return false;
  }
  return true;
}

StackTyping type_value_stack(const std::vector<ExprPtr>& values) {
  StackTyping out;
  out.reserve(values.size());
  for (const auto& v : values)
    out.push_back(type_expr(TypeEnv(), Effect(), v).type);
  return out;
}

}  // namespace funk
