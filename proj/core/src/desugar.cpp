#include "funk/frontend.hpp"
#include "funk/parser.hpp"

namespace funk {

namespace {

ExprPtr desugar_expr(const ExprPtr& e);
StmtPtr desugar_stmt(const StmtPtr& s);

// let y1 = y1 in ... let yk = yk in inner, leftmost capture outermost.
ExprPtr wrap_captures(const std::vector<std::string>& captures, ExprPtr inner,
                      Span span) {
  for (auto it = captures.rbegin(); it != captures.rend(); ++it)
    inner = make_expr(
        LetExpr{*it, make_expr(VarExpr{*it}, span), std::move(inner)}, span);
  return inner;
}

ExprPtr desugar_expr(const ExprPtr& e) {
  if (!e) return e;
  switch (e->kind()) {
    case Expr::Kind::Var:
    case Expr::Kind::Loc:
    case Expr::Kind::Num:
    case Expr::Kind::List:
      return e;
    case Expr::Kind::Prim: {
      const auto& p = e->as<PrimExpr>();
      std::vector<ExprPtr> args;
      args.reserve(p.args.size());
      for (const auto& a : p.args) args.push_back(desugar_expr(a));
      return make_expr(PrimExpr{p.op, std::move(args)}, e->span());
    }
    case Expr::Kind::Fun: {
      const auto& f = e->as<FunExpr>();
      ExprPtr fun = make_expr(
          FunExpr{f.params, {}, f.effect, f.ret, desugar_stmt(f.body)},
          e->span());
      return wrap_captures(f.captures, std::move(fun), e->span());
    }
    case Expr::Kind::EffAbs: {
      const auto& f = e->as<EffAbsExpr>();
      return make_expr(EffAbsExpr{f.var, desugar_expr(f.body)}, e->span());
    }
    case Expr::Kind::EffApp: {
      const auto& a = e->as<EffAppExpr>();
      return make_expr(EffAppExpr{desugar_expr(a.fn), a.arg}, e->span());
    }
    case Expr::Kind::Let: {
      const auto& l = e->as<LetExpr>();
      return make_expr(
          LetExpr{l.var, desugar_expr(l.rhs), desugar_expr(l.body)},
          e->span());
    }
    case Expr::Kind::Fix: {
      const auto& f = e->as<FixExpr>();
      return make_expr(FixExpr{f.var, f.annot, desugar_expr(f.body)},
                       e->span());
    }
  }
  return e;
}

StmtPtr desugar_stmt(const StmtPtr& s) {
  if (!s) return s;
  switch (s->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& v = s->as<VarInitStmt>();
      return make_stmt(VarInitStmt{v.var, v.annot, desugar_expr(v.rhs),
                                   desugar_stmt(v.rest)},
                       s->span());
    }
    case Stmt::Kind::LetCall: {
      const auto& c = s->as<LetCallStmt>();
      std::vector<ExprPtr> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args) args.push_back(desugar_expr(a));
      return make_stmt(LetCallStmt{c.var, desugar_expr(c.fn), std::move(args),
                                   desugar_stmt(c.rest)},
                       s->span());
    }
    case Stmt::Kind::TailCall: {
      const auto& c = s->as<TailCallStmt>();
      std::vector<ExprPtr> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args) args.push_back(desugar_expr(a));
      return make_stmt(TailCallStmt{desugar_expr(c.fn), std::move(args)},
                       s->span());
    }
    case Stmt::Kind::Return:
      return make_stmt(ReturnStmt{desugar_expr(s->as<ReturnStmt>().value)},
                       s->span());
    case Stmt::Kind::If: {
      const auto& i = s->as<IfStmt>();
      return make_stmt(IfStmt{desugar_expr(i.cond),
                              desugar_stmt(i.then_branch),
                              desugar_stmt(i.else_branch)},
                       s->span());
    }
    case Stmt::Kind::Proc: {
      // proc <z..> f(x:T1..; y..): T2 [eff] { s1 } s2
      //   ==>  var f = (let y = y in
      //          fix f: <z..> func(T1..,T2,[eff]). <z..> fun(x:T1..)[eff]{s1});
      //        s2
      const auto& p = s->as<ProcStmt>();
      Span span = s->span();

      ExprPtr abs = make_expr(
          FunExpr{p.params, {}, p.effect, nullptr, desugar_stmt(p.body)},
          span);
      for (auto it = p.effect_binders.rbegin(); it != p.effect_binders.rend();
           ++it)
        abs = make_expr(EffAbsExpr{*it, std::move(abs)}, span);

      std::vector<TypePtr> param_types;
      param_types.reserve(p.params.size());
      for (const auto& q : p.params) param_types.push_back(q.type);
      TypePtr fix_ty = Type::func(std::move(param_types), p.ret, p.effect);
      for (auto it = p.effect_binders.rbegin(); it != p.effect_binders.rend();
           ++it)
        fix_ty = Type::eff_all(*it, std::move(fix_ty));

      ExprPtr rhs = make_expr(FixExpr{p.name, std::move(fix_ty),
                                      std::move(abs)},
                              span);
      rhs = wrap_captures(p.captures, std::move(rhs), span);
      return make_stmt(VarInitStmt{p.name, nullptr, std::move(rhs),
                                   desugar_stmt(p.rest)},
                       span);
    }
  }
  return s;
}

}  // namespace

Program desugar(const Program& p) { return Program{desugar_stmt(p.body)}; }

SourceProgram frontend(const std::string& source, const std::string& path) {
  SourceProgram out;
  out.path = path;
  out.source = source;
  out.ast = parse(source);
  out.desugared = desugar(out.ast);
  UniquifyResult u = uniquify(out.desugared);
  out.unique = std::move(u.program);
  out.name_table = std::move(u.name_table);
  return out;
}

}  // namespace funk
