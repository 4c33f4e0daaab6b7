#include "funk/pretty.hpp"

#include <sstream>

namespace funk {

namespace {

bool is_infix(const std::string& op) {
  return op == "+" || op == "-" || op == "*";
}

int infix_level(const std::string& op) { return op == "*" ? 2 : 1; }

void render_expr(std::ostringstream& out, const ExprPtr& e, int level);

void render_list(std::ostringstream& out, const std::vector<long long>& elems,
                 std::size_t from) {
  if (from == elems.size()) {
    out << "nil";
    return;
  }
  out << "cons(" << elems[from] << ", ";
  render_list(out, elems, from + 1);
  out << ")";
}

void render_stmt(std::ostringstream& out, const StmtPtr& s);

// Renders a callee or effect-application head; lets and fixes carry their
// own parentheses, everything else binds tightly already.
void render_head(std::ostringstream& out, const ExprPtr& e) {
  render_expr(out, e, 3);
}

void render_expr(std::ostringstream& out, const ExprPtr& e, int level) {
  switch (e->kind()) {
    case Expr::Kind::Var:
      out << e->as<VarExpr>().name;
      return;
    case Expr::Kind::Loc: {
      const auto& l = e->as<LocExpr>();
      out << "#" << l.index << ":" << pretty(l.annot);
      return;
    }
    case Expr::Kind::Num:
      out << e->as<NumExpr>().value;
      return;
    case Expr::Kind::List:
      render_list(out, e->as<ListExpr>().elems, 0);
      return;
    case Expr::Kind::Prim: {
      const auto& p = e->as<PrimExpr>();
      if (is_infix(p.op) && p.args.size() == 2) {
        int lv = infix_level(p.op);
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
        out << f.params[i].name << ": " << pretty(f.params[i].type);
      }
      if (!f.captures.empty()) {
        out << "; ";
        for (std::size_t i = 0; i < f.captures.size(); ++i) {
          if (i) out << ", ";
          out << f.captures[i];
        }
      }
      out << ")";
      if (f.ret) out << ": " << pretty(f.ret) << " ";
      out << pretty(f.effect) << "{ ";
      render_stmt(out, f.body);
      out << " }";
      return;
    }
    case Expr::Kind::EffAbs: {
      const auto& f = e->as<EffAbsExpr>();
      out << "<" << f.var << "> ";
      render_expr(out, f.body, 3);
      return;
    }
    case Expr::Kind::EffApp: {
      const auto& a = e->as<EffAppExpr>();
      render_head(out, a.fn);
      out << "<" << pretty(a.arg) << ">";
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
      out << "(fix " << f.var << ": " << pretty(f.annot) << ". ";
      render_expr(out, f.body, 0);
      out << ")";
      return;
    }
  }
}

void render_call(std::ostringstream& out, const ExprPtr& fn,
                 const std::vector<ExprPtr>& args) {
  render_head(out, fn);
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
      out << "var " << v.var;
      if (v.annot) out << ": " << pretty(v.annot);
      out << " = ";
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
    case Stmt::Kind::Return: {
      out << "return ";
      render_expr(out, s->as<ReturnStmt>().value, 0);
      out << ";";
      return;
    }
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
    case Stmt::Kind::Proc: {
      const auto& p = s->as<ProcStmt>();
      out << "proc ";
      if (!p.effect_binders.empty()) {
        out << "<";
        for (std::size_t i = 0; i < p.effect_binders.size(); ++i) {
          if (i) out << ",";
          out << p.effect_binders[i];
        }
        out << "> ";
      }
      out << p.name << "(";
      for (std::size_t i = 0; i < p.params.size(); ++i) {
        if (i) out << ", ";
        out << p.params[i].name << ": " << pretty(p.params[i].type);
      }
      if (!p.captures.empty()) {
        out << "; ";
        for (std::size_t i = 0; i < p.captures.size(); ++i) {
          if (i) out << ", ";
          out << p.captures[i];
        }
      }
      out << "): " << pretty(p.ret) << " " << pretty(p.effect) << "{ ";
      render_stmt(out, p.body);
      out << " } ";
      render_stmt(out, p.rest);
      return;
    }
  }
}

}  // namespace

std::string pretty(const EffectAtom& atom) {
  if (atom.is_var()) return atom.name;
  return "#" + std::to_string(atom.index) + ":" + pretty(atom.annot);
}

std::string pretty(const Effect& eff) {
  std::string out = "[";
  bool first = true;
  for (const auto& a : eff) {
    if (!first) out += ",";
    first = false;
    out += pretty(a);
  }
  return out + "]";
}

std::string pretty(const TypePtr& t) {
  if (!t) return "?";
  switch (t->kind()) {
    case Type::Kind::Top:
      return "top";
    case Type::Kind::Int:
      return "int";
    case Type::Kind::IntList:
      return "int list";
    case Type::Kind::Func: {
      std::string out = "func(";
      for (const auto& p : t->params()) out += pretty(p) + ",";
      out += pretty(t->ret()) + "," + pretty(t->effect()) + ")";
      return out;
    }
    case Type::Kind::EffAll:
      return "<" + t->var() + "> " + pretty(t->body());
  }
  return "?";
}

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

}  // namespace funk
