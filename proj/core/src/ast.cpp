#include "funk/ast.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace funk {

// ---------------------------------------------------------------------------
// Effect atoms

EffectAtom EffectAtom::var(std::string n) {
  EffectAtom a;
  a.kind = Kind::Var;
  a.name = std::move(n);
  return a;
}

EffectAtom EffectAtom::loc(std::size_t index, TypePtr annot) {
  EffectAtom a;
  a.kind = Kind::Loc;
  a.index = index;
  a.annot = std::move(annot);
  return a;
}

bool operator==(const EffectAtom& a, const EffectAtom& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == EffectAtom::Kind::Var) return a.name == b.name;
  return a.index == b.index && type_equal(a.annot, b.annot);
}

bool atom_less(const EffectAtom& a, const EffectAtom& b) {
  if (a.kind != b.kind) return a.kind == EffectAtom::Kind::Var;
  if (a.kind == EffectAtom::Kind::Var) return a.name < b.name;
  if (a.index != b.index) return a.index < b.index;
  return type_compare(a.annot, b.annot) < 0;
}

// ---------------------------------------------------------------------------
// Effects

Effect::Effect(std::vector<EffectAtom> atoms) : atoms_(std::move(atoms)) {
  std::sort(atoms_.begin(), atoms_.end(), atom_less);
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

Effect Effect::single(EffectAtom a) { return Effect({std::move(a)}); }

Effect Effect::vars(std::initializer_list<std::string> names) {
  std::vector<EffectAtom> atoms;
  for (const auto& n : names) atoms.push_back(EffectAtom::var(n));
  return Effect(std::move(atoms));
}

bool Effect::contains(const EffectAtom& a) const {
  for (const auto& x : atoms_)
    if (x == a) return true;
  return false;
}

bool operator==(const Effect& a, const Effect& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a.atoms()[i] == b.atoms()[i])) return false;
  return true;
}

Effect effect_union(const Effect& a, const Effect& b) {
  std::vector<EffectAtom> atoms(a.begin(), a.end());
  atoms.insert(atoms.end(), b.begin(), b.end());
  return Effect(std::move(atoms));
}

Effect effect_minus(const Effect& a, const Effect& b) {
  std::vector<EffectAtom> atoms;
  for (const auto& x : a)
    if (!b.contains(x)) atoms.push_back(x);
  return Effect(std::move(atoms));
}

bool effect_subset(const Effect& a, const Effect& b) {
  for (const auto& x : a)
    if (!b.contains(x)) return false;
  return true;
}

bool effect_disjoint(const Effect& a, const Effect& b) {
  for (const auto& x : a)
    if (b.contains(x)) return false;
  return true;
}

Effect effect_insert(const Effect& a, EffectAtom atom) {
  return effect_union(a, Effect::single(std::move(atom)));
}

// ---------------------------------------------------------------------------
// Types

TypePtr Type::top() {
  static const TypePtr t(new Type(Kind::Top));
  return t;
}

TypePtr Type::integer() {
  static const TypePtr t(new Type(Kind::Int));
  return t;
}

TypePtr Type::int_list() {
  static const TypePtr t(new Type(Kind::IntList));
  return t;
}

TypePtr Type::func(std::vector<TypePtr> params, TypePtr ret, Effect effect) {
  auto* t = new Type(Kind::Func);
  t->params_ = std::move(params);
  t->ret_ = std::move(ret);
  t->effect_ = std::move(effect);
  return TypePtr(t);
}

TypePtr Type::eff_all(std::string var, TypePtr body) {
  auto* t = new Type(Kind::EffAll);
  t->var_ = std::move(var);
  t->body_ = std::move(body);
  return TypePtr(t);
}

namespace {

// Binder renaming used while comparing effect-quantified types.
struct Renaming {
  std::vector<std::pair<std::string, std::string>> pairs;

  const std::string* lookup(const std::string& a) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it)
      if (it->first == a) return &it->second;
    return nullptr;
  }
};

bool type_eq_rec(const TypePtr& a, const TypePtr& b, Renaming& rn);

EffectAtom rename_atom(const EffectAtom& a, const Renaming& rn) {
  if (a.is_var()) {
    if (const std::string* to = rn.lookup(a.name)) return EffectAtom::var(*to);
  }
  return a;
}

bool effect_eq_rec(const Effect& a, const Effect& b, Renaming& rn) {
  if (a.size() != b.size()) return false;
  std::vector<EffectAtom> renamed;
  renamed.reserve(a.size());
  for (const auto& x : a) renamed.push_back(rename_atom(x, rn));
  std::sort(renamed.begin(), renamed.end(), atom_less);
  for (std::size_t i = 0; i < renamed.size(); ++i) {
    const EffectAtom& x = renamed[i];
    const EffectAtom& y = b.atoms()[i];
    if (x.kind != y.kind) return false;
    if (x.is_var()) {
      if (x.name != y.name) return false;
    } else {
      if (x.index != y.index || !type_eq_rec(x.annot, y.annot, rn)) return false;
    }
  }
  return true;
}

bool type_eq_rec(const TypePtr& a, const TypePtr& b, Renaming& rn) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Type::Kind::Top:
    case Type::Kind::Int:
    case Type::Kind::IntList:
      return true;
    case Type::Kind::Func: {
      if (a->params().size() != b->params().size()) return false;
      for (std::size_t i = 0; i < a->params().size(); ++i)
        if (!type_eq_rec(a->params()[i], b->params()[i], rn)) return false;
      if (!effect_eq_rec(a->effect(), b->effect(), rn)) return false;
      return type_eq_rec(a->ret(), b->ret(), rn);
    }
    case Type::Kind::EffAll: {
      rn.pairs.emplace_back(a->var(), b->var());
      bool ok = type_eq_rec(a->body(), b->body(), rn);
      rn.pairs.pop_back();
      return ok;
    }
  }
  return false;
}

int atom_compare(const EffectAtom& a, const EffectAtom& b) {
  if (a.kind != b.kind) return a.kind == EffectAtom::Kind::Var ? -1 : 1;
  if (a.is_var()) return a.name.compare(b.name);
  if (a.index != b.index) return a.index < b.index ? -1 : 1;
  return type_compare(a.annot, b.annot);
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
  Renaming rn;
  return type_eq_rec(a, b, rn);
}

int type_compare(const TypePtr& a, const TypePtr& b) {
  if (a == b) return 0;
  if (!a) return -1;
  if (!b) return 1;
  if (a->kind() != b->kind())
    return static_cast<int>(a->kind()) < static_cast<int>(b->kind()) ? -1 : 1;
  switch (a->kind()) {
    case Type::Kind::Top:
    case Type::Kind::Int:
    case Type::Kind::IntList:
      return 0;
    case Type::Kind::Func: {
      if (a->params().size() != b->params().size())
        return a->params().size() < b->params().size() ? -1 : 1;
      for (std::size_t i = 0; i < a->params().size(); ++i)
        if (int c = type_compare(a->params()[i], b->params()[i])) return c;
      if (int c = type_compare(a->ret(), b->ret())) return c;
      const auto& ea = a->effect().atoms();
      const auto& eb = b->effect().atoms();
      if (ea.size() != eb.size()) return ea.size() < eb.size() ? -1 : 1;
      for (std::size_t i = 0; i < ea.size(); ++i)
        if (int c = atom_compare(ea[i], eb[i])) return c;
      return 0;
    }
    case Type::Kind::EffAll: {
      if (int c = a->var().compare(b->var())) return c;
      return type_compare(a->body(), b->body());
    }
  }
  return 0;
}

Effect fv_type(const TypePtr& t) {
  if (!t) return Effect();
  switch (t->kind()) {
    case Type::Kind::Top:
    case Type::Kind::Int:
    case Type::Kind::IntList:
      return Effect();
    case Type::Kind::Func: {
      Effect acc = t->effect();
      for (const auto& p : t->params()) acc = effect_union(acc, fv_type(p));
      return effect_union(acc, fv_type(t->ret()));
    }
    case Type::Kind::EffAll:
      return effect_minus(fv_type(t->body()),
                          Effect::single(EffectAtom::var(t->var())));
  }
  return Effect();
}

// ---------------------------------------------------------------------------
// Expressions and statements

ExprPtr make_expr(Expr::Node node, Span span) {
  return std::make_shared<Expr>(std::move(node), span);
}

StmtPtr make_stmt(Stmt::Node node, Span span) {
  return std::make_shared<Stmt>(std::move(node), span);
}

namespace {

bool exprs_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!expr_equal(a[i], b[i])) return false;
  return true;
}

bool opt_type_equal(const TypePtr& a, const TypePtr& b) {
  if (!a || !b) return !a && !b;
  return type_equal(a, b);
}

}  // namespace

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Expr::Kind::Var:
      return a->as<VarExpr>().name == b->as<VarExpr>().name;
    case Expr::Kind::Loc: {
      const auto& x = a->as<LocExpr>();
      const auto& y = b->as<LocExpr>();
      return x.index == y.index && type_equal(x.annot, y.annot);
    }
    case Expr::Kind::Num:
      return a->as<NumExpr>().value == b->as<NumExpr>().value;
    case Expr::Kind::List:
      return a->as<ListExpr>().elems == b->as<ListExpr>().elems;
    case Expr::Kind::Prim: {
      const auto& x = a->as<PrimExpr>();
      const auto& y = b->as<PrimExpr>();
      return x.op == y.op && exprs_equal(x.args, y.args);
    }
    case Expr::Kind::Fun: {
      const auto& x = a->as<FunExpr>();
      const auto& y = b->as<FunExpr>();
      if (x.params.size() != y.params.size()) return false;
      for (std::size_t i = 0; i < x.params.size(); ++i) {
        if (x.params[i].name != y.params[i].name) return false;
        if (!type_equal(x.params[i].type, y.params[i].type)) return false;
      }
      return x.captures == y.captures && x.effect == y.effect &&
             opt_type_equal(x.ret, y.ret) && stmt_equal(x.body, y.body);
    }
    case Expr::Kind::EffAbs: {
      const auto& x = a->as<EffAbsExpr>();
      const auto& y = b->as<EffAbsExpr>();
      return x.var == y.var && expr_equal(x.body, y.body);
    }
    case Expr::Kind::EffApp: {
      const auto& x = a->as<EffAppExpr>();
      const auto& y = b->as<EffAppExpr>();
      return x.arg == y.arg && expr_equal(x.fn, y.fn);
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
      return x.var == y.var && type_equal(x.annot, y.annot) &&
             expr_equal(x.body, y.body);
    }
  }
  return false;
}

bool stmt_equal(const StmtPtr& a, const StmtPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& x = a->as<VarInitStmt>();
      const auto& y = b->as<VarInitStmt>();
      return x.var == y.var && opt_type_equal(x.annot, y.annot) &&
             expr_equal(x.rhs, y.rhs) && stmt_equal(x.rest, y.rest);
    }
    case Stmt::Kind::LetCall: {
      const auto& x = a->as<LetCallStmt>();
      const auto& y = b->as<LetCallStmt>();
      return x.var == y.var && expr_equal(x.fn, y.fn) &&
             exprs_equal(x.args, y.args) && stmt_equal(x.rest, y.rest);
    }
    case Stmt::Kind::TailCall: {
      const auto& x = a->as<TailCallStmt>();
      const auto& y = b->as<TailCallStmt>();
      return expr_equal(x.fn, y.fn) && exprs_equal(x.args, y.args);
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
    case Stmt::Kind::Proc: {
      const auto& x = a->as<ProcStmt>();
      const auto& y = b->as<ProcStmt>();
      if (x.effect_binders != y.effect_binders || x.name != y.name ||
          x.captures != y.captures || x.effect != y.effect)
        return false;
      if (x.params.size() != y.params.size()) return false;
      for (std::size_t i = 0; i < x.params.size(); ++i) {
        if (x.params[i].name != y.params[i].name) return false;
        if (!type_equal(x.params[i].type, y.params[i].type)) return false;
      }
      return opt_type_equal(x.ret, y.ret) && stmt_equal(x.body, y.body) &&
             stmt_equal(x.rest, y.rest);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Free term variables

namespace {

struct FreeVarWalk {
  std::vector<std::string> bound;
  std::map<std::string, bool> seen;
  std::vector<std::string> out;

  bool is_bound(const std::string& n) const {
    return std::find(bound.begin(), bound.end(), n) != bound.end();
  }

  void hit(const std::string& n) {
    if (is_bound(n) || seen.count(n)) return;
    seen[n] = true;
    out.push_back(n);
  }

  void walk(const ExprPtr& e) {
    if (!e) return;
    switch (e->kind()) {
      case Expr::Kind::Var:
        hit(e->as<VarExpr>().name);
        return;
      case Expr::Kind::Loc:
      case Expr::Kind::Num:
      case Expr::Kind::List:
        return;
      case Expr::Kind::Prim:
        for (const auto& a : e->as<PrimExpr>().args) walk(a);
        return;
      case Expr::Kind::Fun: {
        const auto& f = e->as<FunExpr>();
        for (const auto& c : f.captures) hit(c);  // captures read outer names
        std::size_t mark = bound.size();
        for (const auto& p : f.params) bound.push_back(p.name);
        for (const auto& c : f.captures) bound.push_back(c);
        walk(f.body);
        bound.resize(mark);
        return;
      }
      case Expr::Kind::EffAbs: {
        const auto& f = e->as<EffAbsExpr>();
        bound.push_back(f.var);
        walk(f.body);
        bound.pop_back();
        return;
      }
      case Expr::Kind::EffApp:
        walk(e->as<EffAppExpr>().fn);
        return;
      case Expr::Kind::Let: {
        const auto& l = e->as<LetExpr>();
        walk(l.rhs);
        bound.push_back(l.var);
        walk(l.body);
        bound.pop_back();
        return;
      }
      case Expr::Kind::Fix: {
        const auto& f = e->as<FixExpr>();
        bound.push_back(f.var);
        walk(f.body);
        bound.pop_back();
        return;
      }
    }
  }

  void walk(const StmtPtr& s) {
    if (!s) return;
    switch (s->kind()) {
      case Stmt::Kind::VarInit: {
        const auto& v = s->as<VarInitStmt>();
        walk(v.rhs);
        bound.push_back(v.var);
        walk(v.rest);
        bound.pop_back();
        return;
      }
      case Stmt::Kind::LetCall: {
        const auto& c = s->as<LetCallStmt>();
        walk(c.fn);
        for (const auto& a : c.args) walk(a);
        bound.push_back(c.var);
        walk(c.rest);
        bound.pop_back();
        return;
      }
      case Stmt::Kind::TailCall: {
        const auto& c = s->as<TailCallStmt>();
        walk(c.fn);
        for (const auto& a : c.args) walk(a);
        return;
      }
      case Stmt::Kind::Return:
        walk(s->as<ReturnStmt>().value);
        return;
      case Stmt::Kind::If: {
        const auto& i = s->as<IfStmt>();
        walk(i.cond);
        walk(i.then_branch);
        walk(i.else_branch);
        return;
      }
      case Stmt::Kind::Proc: {
        const auto& p = s->as<ProcStmt>();
        for (const auto& c : p.captures) hit(c);
        std::size_t mark = bound.size();
        bound.push_back(p.name);
        for (const auto& q : p.params) bound.push_back(q.name);
        for (const auto& c : p.captures) bound.push_back(c);
        walk(p.body);
        bound.resize(mark);
        bound.push_back(p.name);
        walk(p.rest);
        bound.pop_back();
        return;
      }
    }
  }
};

struct LocWalk {
  std::vector<EffectAtom> out;

  void add(const EffectAtom& a) {
    if (a.is_loc()) out.push_back(a);
  }

  void walk_type(const TypePtr& t) {
    for (const auto& a : fv_type(t)) add(a);
  }

  void walk(const ExprPtr& e) {
    if (!e) return;
    switch (e->kind()) {
      case Expr::Kind::Var:
      case Expr::Kind::Num:
      case Expr::Kind::List:
        return;
      case Expr::Kind::Loc: {
        const auto& l = e->as<LocExpr>();
        out.push_back(EffectAtom::loc(l.index, l.annot));
        walk_type(l.annot);
        return;
      }
      case Expr::Kind::Prim:
        for (const auto& a : e->as<PrimExpr>().args) walk(a);
        return;
      case Expr::Kind::Fun: {
        const auto& f = e->as<FunExpr>();
        for (const auto& p : f.params) walk_type(p.type);
        for (const auto& a : f.effect) add(a);
        walk_type(f.ret);
        walk(f.body);
        return;
      }
      case Expr::Kind::EffAbs:
        walk(e->as<EffAbsExpr>().body);
        return;
      case Expr::Kind::EffApp: {
        const auto& a = e->as<EffAppExpr>();
        walk(a.fn);
        add(a.arg);
        if (a.arg.is_loc()) walk_type(a.arg.annot);
        return;
      }
      case Expr::Kind::Let: {
        const auto& l = e->as<LetExpr>();
        walk(l.rhs);
        walk(l.body);
        return;
      }
      case Expr::Kind::Fix: {
        const auto& f = e->as<FixExpr>();
        walk_type(f.annot);
        walk(f.body);
        return;
      }
    }
  }

  void walk(const StmtPtr& s) {
    if (!s) return;
    switch (s->kind()) {
      case Stmt::Kind::VarInit: {
        const auto& v = s->as<VarInitStmt>();
        walk_type(v.annot);
        walk(v.rhs);
        walk(v.rest);
        return;
      }
      case Stmt::Kind::LetCall: {
        const auto& c = s->as<LetCallStmt>();
        walk(c.fn);
        for (const auto& a : c.args) walk(a);
        walk(c.rest);
        return;
      }
      case Stmt::Kind::TailCall: {
        const auto& c = s->as<TailCallStmt>();
        walk(c.fn);
        for (const auto& a : c.args) walk(a);
        return;
      }
      case Stmt::Kind::Return:
        walk(s->as<ReturnStmt>().value);
        return;
      case Stmt::Kind::If: {
        const auto& i = s->as<IfStmt>();
        walk(i.cond);
        walk(i.then_branch);
        walk(i.else_branch);
        return;
      }
      case Stmt::Kind::Proc: {
        const auto& p = s->as<ProcStmt>();
        for (const auto& q : p.params) walk_type(q.type);
        walk_type(p.ret);
        for (const auto& a : p.effect) add(a);
        walk(p.body);
        walk(p.rest);
        return;
      }
    }
  }
};

}  // namespace

std::vector<std::string> free_vars(const ExprPtr& e) {
  FreeVarWalk w;
  w.walk(e);
  return std::move(w.out);
}

std::vector<std::string> free_vars(const StmtPtr& s) {
  FreeVarWalk w;
  w.walk(s);
  return std::move(w.out);
}

Effect locations_in(const StmtPtr& s) {
  LocWalk w;
  w.walk(s);
  return Effect(std::move(w.out));
}

Effect locations_in(const ExprPtr& e) {
  LocWalk w;
  w.walk(e);
  return Effect(std::move(w.out));
}

}  // namespace funk
