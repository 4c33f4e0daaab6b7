#include "funk/subst.hpp"

namespace funk {

namespace {

// Both substitutions share the same traversal; Mode picks what happens at a
// variable occurrence.
struct TermSubst {
  const std::string& name;
  const ExprPtr& replacement;

  ExprPtr walk(const ExprPtr& e) {
    if (!e) return e;
    switch (e->kind()) {
      case Expr::Kind::Var:
        return e->as<VarExpr>().name == name ? replacement : e;
      case Expr::Kind::Loc:
      case Expr::Kind::Num:
      case Expr::Kind::List:
        return e;
      case Expr::Kind::Prim: {
        const auto& p = e->as<PrimExpr>();
        bool changed = false;
        std::vector<ExprPtr> args;
        args.reserve(p.args.size());
        for (const auto& a : p.args) {
          args.push_back(walk(a));
          changed |= args.back() != a;
        }
        if (!changed) return e;
        return make_expr(PrimExpr{p.op, std::move(args)}, e->span());
      }
      case Expr::Kind::Fun: {
        const auto& f = e->as<FunExpr>();
        for (const auto& p : f.params)
          if (p.name == name) return e;
        for (const auto& c : f.captures)
          if (c == name) return e;
        StmtPtr body = walk(f.body);
        if (body == f.body) return e;
        return make_expr(
            FunExpr{f.params, f.captures, f.effect, f.ret, std::move(body)},
            e->span());
      }
      case Expr::Kind::EffAbs: {
        const auto& f = e->as<EffAbsExpr>();
        if (f.var == name) return e;
        ExprPtr body = walk(f.body);
        if (body == f.body) return e;
        return make_expr(EffAbsExpr{f.var, std::move(body)}, e->span());
      }
      case Expr::Kind::EffApp: {
        const auto& a = e->as<EffAppExpr>();
        ExprPtr fn = walk(a.fn);
        if (fn == a.fn) return e;
        return make_expr(EffAppExpr{std::move(fn), a.arg}, e->span());
      }
      case Expr::Kind::Let: {
        const auto& l = e->as<LetExpr>();
        ExprPtr rhs = walk(l.rhs);
        ExprPtr body = l.var == name ? l.body : walk(l.body);
        if (rhs == l.rhs && body == l.body) return e;
        return make_expr(LetExpr{l.var, std::move(rhs), std::move(body)},
                         e->span());
      }
      case Expr::Kind::Fix: {
        const auto& f = e->as<FixExpr>();
        if (f.var == name) return e;
        ExprPtr body = walk(f.body);
        if (body == f.body) return e;
        return make_expr(FixExpr{f.var, f.annot, std::move(body)}, e->span());
      }
    }
    return e;
  }

  StmtPtr walk(const StmtPtr& s) {
    if (!s) return s;
    switch (s->kind()) {
      case Stmt::Kind::VarInit: {
        const auto& v = s->as<VarInitStmt>();
        ExprPtr rhs = walk(v.rhs);
        StmtPtr rest = v.var == name ? v.rest : walk(v.rest);
        if (rhs == v.rhs && rest == v.rest) return s;
        return make_stmt(VarInitStmt{v.var, v.annot, std::move(rhs),
                                     std::move(rest)},
                         s->span());
      }
      case Stmt::Kind::LetCall: {
        const auto& c = s->as<LetCallStmt>();
        ExprPtr fn = walk(c.fn);
        bool changed = fn != c.fn;
        std::vector<ExprPtr> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) {
          args.push_back(walk(a));
          changed |= args.back() != a;
        }
        StmtPtr rest = c.var == name ? c.rest : walk(c.rest);
        changed |= rest != c.rest;
        if (!changed) return s;
        return make_stmt(LetCallStmt{c.var, std::move(fn), std::move(args),
                                     std::move(rest)},
                         s->span());
      }
      case Stmt::Kind::TailCall: {
        const auto& c = s->as<TailCallStmt>();
        ExprPtr fn = walk(c.fn);
        bool changed = fn != c.fn;
        std::vector<ExprPtr> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) {
          args.push_back(walk(a));
          changed |= args.back() != a;
        }
        if (!changed) return s;
        return make_stmt(TailCallStmt{std::move(fn), std::move(args)},
                         s->span());
      }
      case Stmt::Kind::Return: {
        const auto& r = s->as<ReturnStmt>();
        ExprPtr v = walk(r.value);
        if (v == r.value) return s;
        return make_stmt(ReturnStmt{std::move(v)}, s->span());
      }
      case Stmt::Kind::If: {
        const auto& i = s->as<IfStmt>();
        ExprPtr cond = walk(i.cond);
        StmtPtr t = walk(i.then_branch);
        StmtPtr f = walk(i.else_branch);
        if (cond == i.cond && t == i.then_branch && f == i.else_branch)
          return s;
        return make_stmt(IfStmt{std::move(cond), std::move(t), std::move(f)},
                         s->span());
      }
      case Stmt::Kind::Proc:
        // Substitution only runs on desugared programs.
        return s;
    }
    return s;
  }
};

struct AtomSubst {
  const std::string& name;
  const EffectAtom& atom;

  EffectAtom walk_atom(const EffectAtom& a, bool& changed) const {
    if (a.is_var()) {
      if (a.name == name) {
        changed = true;
        return atom;
      }
      return a;
    }
    bool inner = false;
    TypePtr annot = walk(a.annot, inner);
    if (!inner) return a;
    changed = true;
    return EffectAtom::loc(a.index, std::move(annot));
  }

  Effect walk(const Effect& eff, bool& changed) const {
    bool any = false;
    std::vector<EffectAtom> atoms;
    atoms.reserve(eff.size());
    for (const auto& a : eff) atoms.push_back(walk_atom(a, any));
    if (!any) return eff;
    changed = true;
    return Effect(std::move(atoms));
  }

  TypePtr walk(const TypePtr& t, bool& changed) const {
    if (!t) return t;
    switch (t->kind()) {
      case Type::Kind::Top:
      case Type::Kind::Int:
      case Type::Kind::IntList:
        return t;
      case Type::Kind::Func: {
        bool any = false;
        std::vector<TypePtr> params;
        params.reserve(t->params().size());
        for (const auto& p : t->params()) params.push_back(walk(p, any));
        TypePtr ret = walk(t->ret(), any);
        Effect eff = walk(t->effect(), any);
        if (!any) return t;
        changed = true;
        return Type::func(std::move(params), std::move(ret), std::move(eff));
      }
      case Type::Kind::EffAll: {
        if (t->var() == name) return t;
        bool any = false;
        TypePtr body = walk(t->body(), any);
        if (!any) return t;
        changed = true;
        return Type::eff_all(t->var(), std::move(body));
      }
    }
    return t;
  }

  // Replacement expression for a term occurrence of the variable.
  ExprPtr term_form(Span span) const {
    if (atom.is_loc()) return make_expr(LocExpr{atom.index, atom.annot}, span);
    return make_expr(VarExpr{atom.name}, span);
  }

  ExprPtr walk(const ExprPtr& e) const {
    if (!e) return e;
    switch (e->kind()) {
      case Expr::Kind::Var:
        return e->as<VarExpr>().name == name ? term_form(e->span()) : e;
      case Expr::Kind::Num:
      case Expr::Kind::List:
        return e;
      case Expr::Kind::Loc: {
        const auto& l = e->as<LocExpr>();
        bool any = false;
        TypePtr annot = walk(l.annot, any);
        if (!any) return e;
        return make_expr(LocExpr{l.index, std::move(annot)}, e->span());
      }
      case Expr::Kind::Prim: {
        const auto& p = e->as<PrimExpr>();
        bool changed = false;
        std::vector<ExprPtr> args;
        args.reserve(p.args.size());
        for (const auto& a : p.args) {
          args.push_back(walk(a));
          changed |= args.back() != a;
        }
        if (!changed) return e;
        return make_expr(PrimExpr{p.op, std::move(args)}, e->span());
      }
      case Expr::Kind::Fun: {
        const auto& f = e->as<FunExpr>();
        bool any = false;
        std::vector<Param> params;
        params.reserve(f.params.size());
        bool shadowed = false;
        for (const auto& p : f.params) {
          params.push_back(Param{p.name, walk(p.type, any)});
          shadowed |= p.name == name;
        }
        for (const auto& c : f.captures) shadowed |= c == name;
        Effect eff = walk(f.effect, any);
        TypePtr ret = walk(f.ret, any);
        StmtPtr body = shadowed ? f.body : walk(f.body);
        any |= body != f.body;
        if (!any) return e;
        return make_expr(FunExpr{std::move(params), f.captures, std::move(eff),
                                 std::move(ret), std::move(body)},
                         e->span());
      }
      case Expr::Kind::EffAbs: {
        const auto& f = e->as<EffAbsExpr>();
        if (f.var == name) return e;
        ExprPtr body = walk(f.body);
        if (body == f.body) return e;
        return make_expr(EffAbsExpr{f.var, std::move(body)}, e->span());
      }
      case Expr::Kind::EffApp: {
        const auto& a = e->as<EffAppExpr>();
        ExprPtr fn = walk(a.fn);
        bool any = fn != a.fn;
        EffectAtom arg = walk_atom(a.arg, any);
        if (!any) return e;
        return make_expr(EffAppExpr{std::move(fn), std::move(arg)}, e->span());
      }
      case Expr::Kind::Let: {
        const auto& l = e->as<LetExpr>();
        ExprPtr rhs = walk(l.rhs);
        ExprPtr body = l.var == name ? l.body : walk(l.body);
        if (rhs == l.rhs && body == l.body) return e;
        return make_expr(LetExpr{l.var, std::move(rhs), std::move(body)},
                         e->span());
      }
      case Expr::Kind::Fix: {
        const auto& f = e->as<FixExpr>();
        bool any = false;
        TypePtr annot = walk(f.annot, any);
        ExprPtr body = f.var == name ? f.body : walk(f.body);
        any |= body != f.body;
        if (!any) return e;
        return make_expr(FixExpr{f.var, std::move(annot), std::move(body)},
                         e->span());
      }
    }
    return e;
  }

  StmtPtr walk(const StmtPtr& s) const {
    if (!s) return s;
    switch (s->kind()) {
      case Stmt::Kind::VarInit: {
        const auto& v = s->as<VarInitStmt>();
        bool any = false;
        TypePtr annot = walk(v.annot, any);
        ExprPtr rhs = walk(v.rhs);
        StmtPtr rest = v.var == name ? v.rest : walk(v.rest);
        any |= rhs != v.rhs || rest != v.rest;
        if (!any) return s;
        return make_stmt(VarInitStmt{v.var, std::move(annot), std::move(rhs),
                                     std::move(rest)},
                         s->span());
      }
      case Stmt::Kind::LetCall: {
        const auto& c = s->as<LetCallStmt>();
        ExprPtr fn = walk(c.fn);
        bool any = fn != c.fn;
        std::vector<ExprPtr> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) {
          args.push_back(walk(a));
          any |= args.back() != a;
        }
        StmtPtr rest = c.var == name ? c.rest : walk(c.rest);
        any |= rest != c.rest;
        if (!any) return s;
        return make_stmt(LetCallStmt{c.var, std::move(fn), std::move(args),
                                     std::move(rest)},
                         s->span());
      }
      case Stmt::Kind::TailCall: {
        const auto& c = s->as<TailCallStmt>();
        ExprPtr fn = walk(c.fn);
        bool any = fn != c.fn;
        std::vector<ExprPtr> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) {
          args.push_back(walk(a));
          any |= args.back() != a;
        }
        if (!any) return s;
        return make_stmt(TailCallStmt{std::move(fn), std::move(args)},
                         s->span());
      }
      case Stmt::Kind::Return: {
        const auto& r = s->as<ReturnStmt>();
        ExprPtr v = walk(r.value);
        if (v == r.value) return s;
        return make_stmt(ReturnStmt{std::move(v)}, s->span());
      }
      case Stmt::Kind::If: {
        const auto& i = s->as<IfStmt>();
        ExprPtr cond = walk(i.cond);
        StmtPtr t = walk(i.then_branch);
        StmtPtr f = walk(i.else_branch);
        if (cond == i.cond && t == i.then_branch && f == i.else_branch)
          return s;
        return make_stmt(IfStmt{std::move(cond), std::move(t), std::move(f)},
                         s->span());
      }
      case Stmt::Kind::Proc:
        return s;
    }
    return s;
  }
};

}  // namespace

ExprPtr subst_expr(const std::string& name, const ExprPtr& replacement,
                   const ExprPtr& target) {
  return TermSubst{name, replacement}.walk(target);
}

StmtPtr subst_expr(const std::string& name, const ExprPtr& replacement,
                   const StmtPtr& target) {
  return TermSubst{name, replacement}.walk(target);
}

TypePtr subst_atom(const std::string& name, const EffectAtom& atom,
                   const TypePtr& target) {
  bool changed = false;
  return AtomSubst{name, atom}.walk(target, changed);
}

Effect subst_atom(const std::string& name, const EffectAtom& atom,
                  const Effect& target) {
  bool changed = false;
  return AtomSubst{name, atom}.walk(target, changed);
}

ExprPtr subst_atom(const std::string& name, const EffectAtom& atom,
                   const ExprPtr& target) {
  return AtomSubst{name, atom}.walk(target);
}

StmtPtr subst_atom(const std::string& name, const EffectAtom& atom,
                   const StmtPtr& target) {
  return AtomSubst{name, atom}.walk(target);
}

}  // namespace funk
