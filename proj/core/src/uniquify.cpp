#include <cctype>

#include "funk/errors.hpp"
#include "funk/frontend.hpp"

namespace funk {

namespace {

class Uniquifier {
 public:
  UniquifyResult run(const Program& p) {
    Program out{walk(p.body)};
    return UniquifyResult{std::move(out), std::move(table_)};
  }

 private:
  struct Scope {
    std::string original;
    std::string unique;
  };

  std::vector<Scope> scope_;
  std::map<std::string, NameInfo> table_;
  int counter_ = 0;

  static std::string base_of(const std::string& name) {
    std::size_t dollar = name.rfind('$');
    if (dollar == std::string::npos || dollar + 1 == name.size()) return name;
    for (std::size_t i = dollar + 1; i < name.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(name[i]))) return name;
    return name.substr(0, dollar);
  }

  std::string bind(const std::string& original, Span span) {
    std::string unique = base_of(original) + "$" + std::to_string(counter_++);
    scope_.push_back(Scope{original, unique});
    table_[unique] = NameInfo{original, span};
    return unique;
  }

  void pop(std::size_t mark) { scope_.resize(mark); }

  std::string resolve(const std::string& name, Span span) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->original == name) return it->unique;
    throw TypeError(ErrorKind::UnboundVar, span,
                    "unbound variable '" + name + "'");
  }

  EffectAtom walk_atom(const EffectAtom& a, Span span) {
    if (a.is_loc())
      throw TypeError(ErrorKind::MalformedEffect, span,
                      "stack location in a source effect");
    return EffectAtom::var(resolve(a.name, span));
  }

  Effect walk_effect(const Effect& eff, Span span) {
    std::vector<EffectAtom> atoms;
    atoms.reserve(eff.size());
    for (const auto& a : eff) atoms.push_back(walk_atom(a, span));
    return Effect(std::move(atoms));
  }

  TypePtr walk_type(const TypePtr& t, Span span) {
    if (!t) return t;
    switch (t->kind()) {
      case Type::Kind::Top:
      case Type::Kind::Int:
      case Type::Kind::IntList:
        return t;
      case Type::Kind::Func: {
        std::vector<TypePtr> params;
        params.reserve(t->params().size());
        for (const auto& p : t->params()) params.push_back(walk_type(p, span));
        TypePtr ret = walk_type(t->ret(), span);
        Effect eff = walk_effect(t->effect(), span);
        return Type::func(std::move(params), std::move(ret), std::move(eff));
      }
      case Type::Kind::EffAll: {
        std::size_t mark = scope_.size();
        std::string fresh = bind(t->var(), span);
        TypePtr body = walk_type(t->body(), span);
        pop(mark);
        return Type::eff_all(std::move(fresh), std::move(body));
      }
    }
    return t;
  }

  ExprPtr walk(const ExprPtr& e) {
    if (!e) return e;
    Span span = e->span();
    switch (e->kind()) {
      case Expr::Kind::Var:
        return make_expr(VarExpr{resolve(e->as<VarExpr>().name, span)}, span);
      case Expr::Kind::Loc:
        throw TypeError(ErrorKind::MalformedType, span,
                        "stack location in a source program");
      case Expr::Kind::Num:
      case Expr::Kind::List:
        return e;
      case Expr::Kind::Prim: {
        const auto& p = e->as<PrimExpr>();
        std::vector<ExprPtr> args;
        args.reserve(p.args.size());
        for (const auto& a : p.args) args.push_back(walk(a));
        return make_expr(PrimExpr{p.op, std::move(args)}, span);
      }
      case Expr::Kind::Fun: {
        const auto& f = e->as<FunExpr>();
        // Annotations resolve in the enclosing scope; the parameters are
        // not visible in their own types or in the declared effect.
        Effect eff = walk_effect(f.effect, span);
        TypePtr ret = walk_type(f.ret, span);
        std::vector<TypePtr> param_types;
        param_types.reserve(f.params.size());
        for (const auto& p : f.params)
          param_types.push_back(walk_type(p.type, span));
        std::size_t mark = scope_.size();
        std::vector<Param> params;
        params.reserve(f.params.size());
        for (std::size_t i = 0; i < f.params.size(); ++i)
          params.push_back(
              Param{bind(f.params[i].name, span), param_types[i]});
        StmtPtr body = walk(f.body);
        pop(mark);
        return make_stmt_fun(std::move(params), std::move(eff), std::move(ret),
                             std::move(body), span);
      }
      case Expr::Kind::EffAbs: {
        const auto& f = e->as<EffAbsExpr>();
        std::size_t mark = scope_.size();
        std::string fresh = bind(f.var, span);
        ExprPtr body = walk(f.body);
        pop(mark);
        return make_expr(EffAbsExpr{std::move(fresh), std::move(body)}, span);
      }
      case Expr::Kind::EffApp: {
        const auto& a = e->as<EffAppExpr>();
        ExprPtr fn = walk(a.fn);
        EffectAtom arg = walk_atom(a.arg, span);
        return make_expr(EffAppExpr{std::move(fn), std::move(arg)}, span);
      }
      case Expr::Kind::Let: {
        const auto& l = e->as<LetExpr>();
        ExprPtr rhs = walk(l.rhs);
        std::size_t mark = scope_.size();
        std::string fresh = bind(l.var, span);
        ExprPtr body = walk(l.body);
        pop(mark);
        return make_expr(
            LetExpr{std::move(fresh), std::move(rhs), std::move(body)}, span);
      }
      case Expr::Kind::Fix: {
        const auto& f = e->as<FixExpr>();
        TypePtr annot = walk_type(f.annot, span);
        std::size_t mark = scope_.size();
        std::string fresh = bind(f.var, span);
        ExprPtr body = walk(f.body);
        pop(mark);
        return make_expr(
            FixExpr{std::move(fresh), std::move(annot), std::move(body)},
            span);
      }
    }
    return e;
  }

  ExprPtr make_stmt_fun(std::vector<Param> params, Effect eff, TypePtr ret,
                        StmtPtr body, Span span) {
    return make_expr(FunExpr{std::move(params), {}, std::move(eff),
                             std::move(ret), std::move(body)},
                     span);
  }

  StmtPtr walk(const StmtPtr& s) {
    if (!s) return s;
    Span span = s->span();
    switch (s->kind()) {
      case Stmt::Kind::VarInit: {
        const auto& v = s->as<VarInitStmt>();
        TypePtr annot = walk_type(v.annot, span);
        ExprPtr rhs = walk(v.rhs);
        std::size_t mark = scope_.size();
        std::string fresh = bind(v.var, span);
        StmtPtr rest = walk(v.rest);
        pop(mark);
        return make_stmt(VarInitStmt{std::move(fresh), std::move(annot),
                                     std::move(rhs), std::move(rest)},
                         span);
      }
      case Stmt::Kind::LetCall: {
        const auto& c = s->as<LetCallStmt>();
        ExprPtr fn = walk(c.fn);
        std::vector<ExprPtr> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) args.push_back(walk(a));
        std::size_t mark = scope_.size();
        std::string fresh = bind(c.var, span);
        StmtPtr rest = walk(c.rest);
        pop(mark);
        return make_stmt(LetCallStmt{std::move(fresh), std::move(fn),
                                     std::move(args), std::move(rest)},
                         span);
      }
      case Stmt::Kind::TailCall: {
        const auto& c = s->as<TailCallStmt>();
        ExprPtr fn = walk(c.fn);
        std::vector<ExprPtr> args;
        args.reserve(c.args.size());
        for (const auto& a : c.args) args.push_back(walk(a));
        return make_stmt(TailCallStmt{std::move(fn), std::move(args)}, span);
      }
      case Stmt::Kind::Return:
        return make_stmt(ReturnStmt{walk(s->as<ReturnStmt>().value)}, span);
      case Stmt::Kind::If: {
        const auto& i = s->as<IfStmt>();
        ExprPtr cond = walk(i.cond);
        StmtPtr t = walk(i.then_branch);
        StmtPtr f = walk(i.else_branch);
        return make_stmt(IfStmt{std::move(cond), std::move(t), std::move(f)},
                         span);
      }
      case Stmt::Kind::Proc:
        throw TypeError(ErrorKind::MalformedType, span,
                        "proc statement survived desugaring");
    }
    return s;
  }
};

}  // namespace

UniquifyResult uniquify(const Program& p) { return Uniquifier().run(p); }

}  // namespace funk
