#include "funk/erasure.hpp"

#include <sstream>

namespace funk::erased {

ExprPtr make_expr(Expr::Node node) {
  return std::make_shared<Expr>(std::move(node));
}

StmtPtr make_stmt(Stmt::Node node) {
  return std::make_shared<Stmt>(std::move(node));
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Expr::Kind::Var:
      return a->as<VarExpr>().name == b->as<VarExpr>().name;
    case Expr::Kind::Loc:
      return a->as<LocExpr>().index == b->as<LocExpr>().index;
    case Expr::Kind::Num:
      return a->as<NumExpr>().value == b->as<NumExpr>().value;
    case Expr::Kind::List:
      return a->as<ListExpr>().elems == b->as<ListExpr>().elems;
    case Expr::Kind::Prim: {
      const auto& x = a->as<PrimExpr>();
      const auto& y = b->as<PrimExpr>();
      if (x.op != y.op || x.args.size() != y.args.size()) return false;
      for (std::size_t i = 0; i < x.args.size(); ++i)
        if (!expr_equal(x.args[i], y.args[i])) return false;
      return true;
    }
    case Expr::Kind::Fun: {
      const auto& x = a->as<FunExpr>();
      const auto& y = b->as<FunExpr>();
      return x.params == y.params && stmt_equal(x.body, y.body);
    }
    case Expr::Kind::Let: {
      const auto& x = a->as<LetExpr>();
      const auto& y = b->as<LetExpr>();
      return x.var == y.var && expr_equal(x.rhs, y.rhs) &&
             expr_equal(x.body, y.body);
    }
    case Expr::Kind::Fix: {
      const auto& x = a->as<FixExpr>();
      const auto& y = b->as<FixExpr>();
      return x.var == y.var && expr_equal(x.body, y.body);
    }
  }
  return false;
}

bool stmt_equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& x = a->as<VarInitStmt>();
      const auto& y = b->as<VarInitStmt>();
      return x.var == y.var && expr_equal(x.rhs, y.rhs) &&
             stmt_equal(x.rest, y.rest);
    }
    case Stmt::Kind::LetCall: {
      const auto& x = a->as<LetCallStmt>();
      const auto& y = b->as<LetCallStmt>();
      if (x.var != y.var || !expr_equal(x.fn, y.fn) ||
          x.args.size() != y.args.size() || !stmt_equal(x.rest, y.rest))
        return false;
      for (std::size_t i = 0; i < x.args.size(); ++i)
        if (!expr_equal(x.args[i], y.args[i])) return false;
      return true;
    }
    case Stmt::Kind::TailCall: {
      const auto& x = a->as<TailCallStmt>();
      const auto& y = b->as<TailCallStmt>();
      if (!expr_equal(x.fn, y.fn) || x.args.size() != y.args.size())
        return false;
      for (std::size_t i = 0; i < x.args.size(); ++i)
        if (!expr_equal(x.args[i], y.args[i])) return false;
      return true;
    }
    case Stmt::Kind::Return:
      return expr_equal(a->as<ReturnStmt>().value, b->as<ReturnStmt>().value);
    case Stmt::Kind::If: {
      const auto& x = a->as<IfStmt>();
      const auto& y = b->as<IfStmt>();
      return expr_equal(x.cond, y.cond) &&
             stmt_equal(x.then_branch, y.then_branch) &&
             stmt_equal(x.else_branch, y.else_branch);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Pretty printing (annotation-free syntax)

namespace {

void render_expr(std::ostringstream& out, const ExprPtr& e, int level);
void render_stmt(std::ostringstream& out, const StmtPtr& s);

void render_list(std::ostringstream& out, const std::vector<long long>& xs,
                 std::size_t from) {
  if (from == xs.size()) {
    out << "nil";
    return;
  }
  out << "cons(" << xs[from] << ", ";
  render_list(out, xs, from + 1);
  out << ")";
}

void render_expr(std::ostringstream& out, const ExprPtr& e, int level) {
  switch (e->kind()) {
    case Expr::Kind::Var:
      out << e->as<VarExpr>().name;
      return;
    case Expr::Kind::Loc:
      out << "#" << e->as<LocExpr>().index;
      return;
    case Expr::Kind::Num:
      out << e->as<NumExpr>().value;
      return;
    case Expr::Kind::List:
      render_list(out, e->as<ListExpr>().elems, 0);
      return;
    case Expr::Kind::Prim: {
      const auto& p = e->as<PrimExpr>();
      bool infix =
          (p.op == "+" || p.op == "-" || p.op == "*") && p.args.size() == 2;
      if (infix) {
        int lv = p.op == "*" ? 2 : 1;
        bool parens = lv < level;
        if (parens) out << "(";
        render_expr(out, p.args[0], lv);
        out << " " << p.op << " ";
        render_expr(out, p.args[1], lv + 1);
        if (parens) out << ")";
        return;
      }
      out << p.op << "(";
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i) out << ", ";
        render_expr(out, p.args[i], 0);
      }
      out << ")";
      return;
    }
    case Expr::Kind::Fun: {
      const auto& f = e->as<FunExpr>();
      out << "fun(";
      for (std::size_t i = 0; i < f.params.size(); ++i) {
        if (i) out << ", ";
        out << f.params[i];
      }
      out << "){ ";
      render_stmt(out, f.body);
      out << " }";
      return;
    }
    case Expr::Kind::Let: {
      const auto& l = e->as<LetExpr>();
      out << "(let " << l.var << " = ";
      render_expr(out, l.rhs, 0);
      out << " in ";
      render_expr(out, l.body, 0);
      out << ")";
      return;
    }
    case Expr::Kind::Fix: {
      const auto& f = e->as<FixExpr>();
      out << "(fix " << f.var << ". ";
      render_expr(out, f.body, 0);
      out << ")";
      return;
    }
  }
}

void render_call(std::ostringstream& out, const ExprPtr& fn,
                 const std::vector<ExprPtr>& args) {
  render_expr(out, fn, 3);
  out << "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out << ", ";
    render_expr(out, args[i], 0);
  }
  out << ")";
}

void render_stmt(std::ostringstream& out, const StmtPtr& s) {
  switch (s->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& v = s->as<VarInitStmt>();
      out << "var " << v.var << " = ";
      render_expr(out, v.rhs, 0);
      out << "; ";
      render_stmt(out, v.rest);
      return;
    }
    case Stmt::Kind::LetCall: {
      const auto& c = s->as<LetCallStmt>();
      out << "var " << c.var << " = ";
      render_call(out, c.fn, c.args);
      out << "; ";
      render_stmt(out, c.rest);
      return;
    }
    case Stmt::Kind::TailCall: {
      const auto& c = s->as<TailCallStmt>();
      out << "return ";
      render_call(out, c.fn, c.args);
      out << ";";
      return;
    }
    case Stmt::Kind::Return:
      out << "return ";
      render_expr(out, s->as<ReturnStmt>().value, 0);
      out << ";";
      return;
    case Stmt::Kind::If: {
      const auto& i = s->as<IfStmt>();
      out << "if (";
      render_expr(out, i.cond, 0);
      out << ") { ";
      render_stmt(out, i.then_branch);
      out << " } else { ";
      render_stmt(out, i.else_branch);
      out << " }";
      return;
    }
  }
}

}  // namespace

std::string pretty(const ExprPtr& e) {
  std::ostringstream out;
  render_expr(out, e, 0);
  return out.str();
}

std::string pretty(const StmtPtr& s) {
  std::ostringstream out;
  render_stmt(out, s);
  return out.str();
}

std::string pretty(const Program& p) { return pretty(p.body); }

// ---------------------------------------------------------------------------
// Substitution

ExprPtr subst(const std::string& name, const ExprPtr& replacement,
              const ExprPtr& e) {
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
        args.push_back(subst(name, replacement, a));
        changed |= args.back() != a;
      }
      return changed ? make_expr(PrimExpr{p.op, std::move(args)}) : e;
    }
    case Expr::Kind::Fun: {
      const auto& f = e->as<FunExpr>();
      for (const auto& p : f.params)
        if (p == name) return e;
      StmtPtr body = subst(name, replacement, f.body);
      return body == f.body ? e : make_expr(FunExpr{f.params, body});
    }
    case Expr::Kind::Let: {
      const auto& l = e->as<LetExpr>();
      ExprPtr rhs = subst(name, replacement, l.rhs);
      ExprPtr body = l.var == name ? l.body : subst(name, replacement, l.body);
      if (rhs == l.rhs && body == l.body) return e;
      return make_expr(LetExpr{l.var, rhs, body});
    }
    case Expr::Kind::Fix: {
      const auto& f = e->as<FixExpr>();
      if (f.var == name) return e;
      ExprPtr body = subst(name, replacement, f.body);
      return body == f.body ? e : make_expr(FixExpr{f.var, body});
    }
  }
  return e;
}

StmtPtr subst(const std::string& name, const ExprPtr& replacement,
              const StmtPtr& s) {
  switch (s->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& v = s->as<VarInitStmt>();
      ExprPtr rhs = subst(name, replacement, v.rhs);
      StmtPtr rest = v.var == name ? v.rest : subst(name, replacement, v.rest);
      if (rhs == v.rhs && rest == v.rest) return s;
      return make_stmt(VarInitStmt{v.var, rhs, rest});
    }
    case Stmt::Kind::LetCall: {
      const auto& c = s->as<LetCallStmt>();
      ExprPtr fn = subst(name, replacement, c.fn);
      bool changed = fn != c.fn;
      std::vector<ExprPtr> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args) {
        args.push_back(subst(name, replacement, a));
        changed |= args.back() != a;
      }
      StmtPtr rest = c.var == name ? c.rest : subst(name, replacement, c.rest);
      changed |= rest != c.rest;
      if (!changed) return s;
      return make_stmt(LetCallStmt{c.var, fn, std::move(args), rest});
    }
    case Stmt::Kind::TailCall: {
      const auto& c = s->as<TailCallStmt>();
      ExprPtr fn = subst(name, replacement, c.fn);
      bool changed = fn != c.fn;
      std::vector<ExprPtr> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args) {
        args.push_back(subst(name, replacement, a));
        changed |= args.back() != a;
      }
      if (!changed) return s;
      return make_stmt(TailCallStmt{fn, std::move(args)});
    }
    case Stmt::Kind::Return: {
      ExprPtr v = subst(name, replacement, s->as<ReturnStmt>().value);
      return v == s->as<ReturnStmt>().value ? s : make_stmt(ReturnStmt{v});
    }
    case Stmt::Kind::If: {
      const auto& i = s->as<IfStmt>();
      ExprPtr cond = subst(name, replacement, i.cond);
      StmtPtr t = subst(name, replacement, i.then_branch);
      StmtPtr f = subst(name, replacement, i.else_branch);
      if (cond == i.cond && t == i.then_branch && f == i.else_branch) return s;
      return make_stmt(IfStmt{cond, t, f});
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Erased machine

namespace {

ExprPtr loc_expr(std::size_t index) { return make_expr(LocExpr{index}); }

ExprPtr eval(const ExprPtr& e, const std::vector<ExprPtr>& sigma, Fuel& fuel) {
  Fuel::Scope depth(fuel);
  switch (e->kind()) {
    case Expr::Kind::Loc: {
      std::size_t i = e->as<LocExpr>().index;
      if (i >= sigma.size())
        throw StuckError(
            StuckKind::LocOutOfRange,
            "location #" + std::to_string(i) + " is outside the stack");
      return sigma[i];
    }
    case Expr::Kind::Var:
      throw StuckError(StuckKind::FreeVariable,
                       "free variable '" + e->as<VarExpr>().name + "'");
    case Expr::Kind::Num:
    case Expr::Kind::List:
    case Expr::Kind::Fun:
      return e;
    case Expr::Kind::Prim: {
      const auto& p = e->as<PrimExpr>();
      // Route through the main machine's delta via plain numbers and lists.
      std::vector<funk::Value> vals;
      vals.reserve(p.args.size());
      for (const auto& a : p.args) {
        ExprPtr v = eval(a, sigma, fuel);
        if (const auto* n = v->get_if<NumExpr>())
          vals.push_back(funk::make_expr(funk::NumExpr{n->value}));
        else if (const auto* l = v->get_if<ListExpr>())
          vals.push_back(funk::make_expr(funk::ListExpr{l->elems}));
        else
          throw StuckError(StuckKind::DeltaDomain,
                           "operator '" + p.op + "' applied to a function");
      }
      funk::Value out = funk::delta(p.op, vals, Span{});
      if (const auto* n = out->get_if<funk::NumExpr>())
        return make_expr(NumExpr{n->value});
      return make_expr(ListExpr{out->as<funk::ListExpr>().elems});
    }
    case Expr::Kind::Let: {
      const auto& l = e->as<LetExpr>();
      ExprPtr rhs = eval(l.rhs, sigma, fuel);
      fuel.burn();
      return eval(subst(l.var, rhs, l.body), sigma, fuel);
    }
    case Expr::Kind::Fix: {
      const auto& f = e->as<FixExpr>();
      fuel.burn();
      return eval(subst(f.var, e, f.body), sigma, fuel);
    }
  }
  throw StuckError(StuckKind::DeltaDomain, "unreachable erased expression");
}

struct EFrame {
  std::string var;
  StmtPtr rest;
  std::size_t locals;
};

}  // namespace

RunResult run(const Program& p, std::uint64_t fuel_amount) {
  RunResult result;
  StmtPtr stmt = p.body;
  std::vector<EFrame> control;
  std::vector<ExprPtr> values;
  std::size_t locals = 0;
  Fuel fuel(fuel_amount);

  auto bind_params = [](const FunExpr& f, std::size_t base, StmtPtr body) {
    for (std::size_t i = 0; i < f.params.size(); ++i)
      body = subst(f.params[i], loc_expr(base + i), body);
    return body;
  };

  try {
    while (true) {
      fuel.burn();
      switch (stmt->kind()) {
        case Stmt::Kind::VarInit: {
          const auto& v = stmt->as<VarInitStmt>();
          ExprPtr val = eval(v.rhs, values, fuel);
          std::size_t loc = values.size();
          values.push_back(val);
          stmt = subst(v.var, loc_expr(loc), v.rest);
          locals += 1;
          break;
        }
        case Stmt::Kind::LetCall: {
          const auto& c = stmt->as<LetCallStmt>();
          ExprPtr fn = eval(c.fn, values, fuel);
          const auto* f = fn->get_if<FunExpr>();
          if (!f)
            throw StuckError(StuckKind::NotAFunction, "calling " + pretty(fn));
          if (f->params.size() != c.args.size())
            throw StuckError(StuckKind::ArityMismatch, "arity mismatch");
          std::size_t base = values.size();
          for (const auto& a : c.args) values.push_back(eval(a, values, fuel));
          control.push_back(EFrame{c.var, c.rest, locals});
          stmt = bind_params(*f, base, f->body);
          locals = f->params.size();
          break;
        }
        case Stmt::Kind::TailCall: {
          const auto& c = stmt->as<TailCallStmt>();
          ExprPtr fn = eval(c.fn, values, fuel);
          const auto* f = fn->get_if<FunExpr>();
          if (!f)
            throw StuckError(StuckKind::NotAFunction, "calling " + pretty(fn));
          if (f->params.size() != c.args.size())
            throw StuckError(StuckKind::ArityMismatch, "arity mismatch");
          std::vector<ExprPtr> args;
          args.reserve(c.args.size());
          for (const auto& a : c.args) args.push_back(eval(a, values, fuel));
          values.resize(values.size() - locals);
          std::size_t base = values.size();
          for (auto& a : args) values.push_back(std::move(a));
          stmt = bind_params(*f, base, f->body);
          locals = f->params.size();
          break;
        }
        case Stmt::Kind::Return: {
          const auto& r = stmt->as<ReturnStmt>();
          ExprPtr v = eval(r.value, values, fuel);
          if (control.empty()) {
            result.status = RunResult::Status::Final;
            switch (v->kind()) {
              case Expr::Kind::Num:
                result.observation =
                    Observation::number(v->as<NumExpr>().value);
                break;
              case Expr::Kind::Fun:
                result.observation = Observation::fun();
                break;
              case Expr::Kind::List:
                result.observation =
                    Observation::of_list(v->as<ListExpr>().elems);
                break;
              default:
                throw StuckError(StuckKind::DeltaDomain,
                                 "observing a non-value");
            }
            return result;
          }
          EFrame frame = control.back();
          control.pop_back();
          values.resize(values.size() - locals);
          std::size_t loc = values.size();
          values.push_back(v);
          stmt = subst(frame.var, loc_expr(loc), frame.rest);
          locals = frame.locals + 1;
          break;
        }
        case Stmt::Kind::If: {
          const auto& i = stmt->as<IfStmt>();
          ExprPtr c = eval(i.cond, values, fuel);
          const auto* n = c->get_if<NumExpr>();
          if (!n)
            throw StuckError(StuckKind::BadCondition, "non-integer condition");
          stmt = n->value != 0 ? i.then_branch : i.else_branch;
          break;
        }
      }
      ++result.stats.steps;
      result.stats.max_value_stack =
          std::max(result.stats.max_value_stack, values.size());
      result.stats.max_control_stack =
          std::max(result.stats.max_control_stack, control.size());
    }
  } catch (const StuckError& e) {
    result.status = RunResult::Status::Stuck;
    result.stuck_kind = e.kind;
    result.message = std::string("stuck (") + to_string(e.kind) +
                     "): " + e.what() + "\n  stmt: " + pretty(stmt);
    return result;
  } catch (const FuelExhausted&) {
    result.status = RunResult::Status::FuelExhausted;
    result.message = "fuel exhausted";
    return result;
  }
}

}  // namespace funk::erased

// ---------------------------------------------------------------------------
// The erasure function

namespace funk {

namespace {

std::vector<erased::ExprPtr> erase_all(const std::vector<ExprPtr>& xs) {
  std::vector<erased::ExprPtr> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(erase(x));
  return out;
}

}  // namespace

erased::ExprPtr erase(const ExprPtr& e) {
  switch (e->kind()) {
    case Expr::Kind::Var:
      return erased::make_expr(erased::VarExpr{e->as<VarExpr>().name});
    case Expr::Kind::Loc:
      return erased::make_expr(erased::LocExpr{e->as<LocExpr>().index});
    case Expr::Kind::Num:
      return erased::make_expr(erased::NumExpr{e->as<NumExpr>().value});
    case Expr::Kind::List:
      return erased::make_expr(erased::ListExpr{e->as<ListExpr>().elems});
    case Expr::Kind::Prim: {
      const auto& p = e->as<PrimExpr>();
      return erased::make_expr(erased::PrimExpr{p.op, erase_all(p.args)});
    }
    case Expr::Kind::Fun: {
      const auto& f = e->as<FunExpr>();
      std::vector<std::string> params;
      params.reserve(f.params.size());
      for (const auto& p : f.params) params.push_back(p.name);
      return erased::make_expr(
          erased::FunExpr{std::move(params), erase(f.body)});
    }
    case Expr::Kind::EffAbs:
      return erase(e->as<EffAbsExpr>().body);
    case Expr::Kind::EffApp:
      return erase(e->as<EffAppExpr>().fn);
    case Expr::Kind::Let: {
      const auto& l = e->as<LetExpr>();
      return erased::make_expr(
          erased::LetExpr{l.var, erase(l.rhs), erase(l.body)});
    }
    case Expr::Kind::Fix: {
      const auto& f = e->as<FixExpr>();
      return erased::make_expr(erased::FixExpr{f.var, erase(f.body)});
    }
  }
  throw std::logic_error("unreachable expression kind in erase");
}

erased::StmtPtr erase(const StmtPtr& s) {
  switch (s->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& v = s->as<VarInitStmt>();
      return erased::make_stmt(
          erased::VarInitStmt{v.var, erase(v.rhs), erase(v.rest)});
    }
    case Stmt::Kind::LetCall: {
      const auto& c = s->as<LetCallStmt>();
      return erased::make_stmt(erased::LetCallStmt{c.var, erase(c.fn),
                                                   erase_all(c.args),
                                                   erase(c.rest)});
    }
    case Stmt::Kind::TailCall: {
      const auto& c = s->as<TailCallStmt>();
      return erased::make_stmt(
          erased::TailCallStmt{erase(c.fn), erase_all(c.args)});
    }
    case Stmt::Kind::Return:
      return erased::make_stmt(
          erased::ReturnStmt{erase(s->as<ReturnStmt>().value)});
    case Stmt::Kind::If: {
      const auto& i = s->as<IfStmt>();
      return erased::make_stmt(erased::IfStmt{
          erase(i.cond), erase(i.then_branch), erase(i.else_branch)});
    }
    case Stmt::Kind::Proc:
      throw std::logic_error("erasing a proc statement");
  }
  throw std::logic_error("unreachable statement kind in erase");
}

erased::Program erase(const Program& p) { return erased::Program{erase(p.body)}; }

Observation erased_view(const Observation& o) {
  if (o.kind == Observation::Kind::Abs) return Observation::fun();
  return o;
}

}  // namespace funk
