#include "funk/regions.hpp"

#include <sstream>

#include "funk/pretty.hpp"

namespace funk::region {

// ---------------------------------------------------------------------------
// Types

TypePtr Type::integer() {
  static const TypePtr t(new Type(Kind::Int));
  return t;
}

TypePtr Type::int_list() {
  static const TypePtr t(new Type(Kind::IntList));
  return t;
}

TypePtr Type::arrow(std::vector<TypePtr> params, TypePtr ret,
                    RegionSet latent) {
  auto* t = new Type(Kind::Arrow);
  t->params_ = std::move(params);
  t->ret_ = std::move(ret);
  t->latent_ = std::move(latent);
  return TypePtr(t);
}

TypePtr Type::all(std::string var, TypePtr body) {
  auto* t = new Type(Kind::All);
  t->var_ = std::move(var);
  t->body_ = std::move(body);
  return TypePtr(t);
}

TypePtr Type::at_region(TypePtr inner, std::string region) {
  auto* t = new Type(Kind::At);
  t->body_ = std::move(inner);
  t->var_ = std::move(region);
  return TypePtr(t);
}

namespace {

struct RegionRenaming {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string apply(const std::string& a) const {
    for (auto it = pairs.rbegin(); it != pairs.rend(); ++it)
      if (it->first == a) return it->second;
    return a;
  }
};

bool type_eq_rec(const TypePtr& a, const TypePtr& b, RegionRenaming& rn) {
  if (a == b) return true;
  if (!a || !b || a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Type::Kind::Int:
    case Type::Kind::IntList:
      return true;
    case Type::Kind::Arrow: {
      if (a->params().size() != b->params().size()) return false;
      for (std::size_t i = 0; i < a->params().size(); ++i)
        if (!type_eq_rec(a->params()[i], b->params()[i], rn)) return false;
      RegionSet renamed;
      for (const auto& r : a->latent()) renamed.insert(rn.apply(r));
      if (renamed != b->latent()) return false;
      return type_eq_rec(a->ret(), b->ret(), rn);
    }
    case Type::Kind::All: {
      rn.pairs.emplace_back(a->var(), b->var());
      bool ok = type_eq_rec(a->body(), b->body(), rn);
      rn.pairs.pop_back();
      return ok;
    }
    case Type::Kind::At: {
      if (rn.apply(a->at()) != b->at()) return false;
      return type_eq_rec(a->inner(), b->inner(), rn);
    }
  }
  return false;
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
  RegionRenaming rn;
  return type_eq_rec(a, b, rn);
}

RegionSet free_regions(const TypePtr& t) {
  if (!t) return {};
  switch (t->kind()) {
    case Type::Kind::Int:
    case Type::Kind::IntList:
      return {};
    case Type::Kind::Arrow: {
      RegionSet out = t->latent();
      for (const auto& p : t->params()) {
        RegionSet fp = free_regions(p);
        out.insert(fp.begin(), fp.end());
      }
      RegionSet fr = free_regions(t->ret());
      out.insert(fr.begin(), fr.end());
      return out;
    }
    case Type::Kind::All: {
      RegionSet out = free_regions(t->body());
      out.erase(t->var());
      return out;
    }
    case Type::Kind::At: {
      RegionSet out = free_regions(t->inner());
      out.insert(t->at());
      return out;
    }
  }
  return {};
}

TypePtr subst_region_type(const std::string& from, const std::string& to,
                          const TypePtr& t) {
  if (!t) return t;
  switch (t->kind()) {
    case Type::Kind::Int:
    case Type::Kind::IntList:
      return t;
    case Type::Kind::Arrow: {
      std::vector<TypePtr> params;
      params.reserve(t->params().size());
      for (const auto& p : t->params())
        params.push_back(subst_region_type(from, to, p));
      RegionSet latent;
      for (const auto& r : t->latent()) latent.insert(r == from ? to : r);
      return Type::arrow(std::move(params),
                         subst_region_type(from, to, t->ret()),
                         std::move(latent));
    }
    case Type::Kind::All: {
      if (t->var() == from) return t;
      return Type::all(t->var(), subst_region_type(from, to, t->body()));
    }
    case Type::Kind::At:
      return Type::at_region(subst_region_type(from, to, t->inner()),
                             t->at() == from ? to : t->at());
  }
  return t;
}

std::string pretty(const TypePtr& t) {
  if (!t) return "?";
  switch (t->kind()) {
    case Type::Kind::Int:
      return "int";
    case Type::Kind::IntList:
      return "int list";
    case Type::Kind::Arrow: {
      std::string out = "(";
      for (std::size_t i = 0; i < t->params().size(); ++i) {
        if (i) out += ", ";
        out += pretty(t->params()[i]);
      }
      out += ") -{";
      bool first = true;
      for (const auto& r : t->latent()) {
        if (!first) out += ",";
        first = false;
        out += r;
      }
      out += "}-> " + pretty(t->ret());
      return out;
    }
    case Type::Kind::All:
      return "forall " + t->var() + ". " + pretty(t->body());
    case Type::Kind::At:
      return pretty(t->inner()) + " at " + t->at();
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Terms

TermPtr make_term(Term::Node node) {
  return std::make_shared<Term>(std::move(node));
}

TermPtr let_in(std::string var, TypePtr var_type, RegionSet latent,
               TermPtr rhs, TermPtr body) {
  TermPtr lam = make_term(LamTerm{
      {{std::move(var), std::move(var_type)}}, std::move(latent),
      std::move(body)});
  return make_term(AppTerm{std::move(lam), {std::move(rhs)}});
}

namespace {

bool atomic_term(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Var:
    case Term::Kind::Num:
    case Term::Kind::List:
    case Term::Kind::Loc:
      return true;
    default:
      return false;
  }
}

void render(std::ostringstream& out, const TermPtr& t);

void render_operand(std::ostringstream& out, const TermPtr& t) {
  if (atomic_term(t)) {
    render(out, t);
    return;
  }
  out << "(";
  render(out, t);
  out << ")";
}

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

void render(std::ostringstream& out, const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Var:
      out << t->as<VarTerm>().name;
      return;
    case Term::Kind::Num:
      out << t->as<NumTerm>().value;
      return;
    case Term::Kind::List:
      render_list(out, t->as<ListTerm>().elems, 0);
      return;
    case Term::Kind::Prim: {
      const auto& p = t->as<PrimTerm>();
      out << p.op << "(";
      for (std::size_t i = 0; i < p.args.size(); ++i) {
        if (i) out << ", ";
        render(out, p.args[i]);
      }
      out << ")";
      return;
    }
    case Term::Kind::Lam: {
      const auto& l = t->as<LamTerm>();
      out << "\\";
      for (std::size_t i = 0; i < l.params.size(); ++i) {
        if (i) out << ", ";
        out << l.params[i].first;
      }
      out << ". ";
      render(out, l.body);
      return;
    }
    case Term::Kind::App: {
      const auto& a = t->as<AppTerm>();
      // let sugar: (\x. body) rhs
      if (const auto* l = a.fn->get_if<LamTerm>()) {
        if (l->params.size() == 1 && a.args.size() == 1) {
          out << "let " << l->params[0].first << " = ";
          render(out, a.args[0]);
          out << " in ";
          render(out, l->body);
          return;
        }
      }
      render_operand(out, a.fn);
      out << "(";
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out << ", ";
        render(out, a.args[i]);
      }
      out << ")";
      return;
    }
    case Term::Kind::Fix: {
      const auto& f = t->as<FixTerm>();
      out << "fix " << f.var << ". ";
      render(out, f.body);
      return;
    }
    case Term::Kind::New: {
      const auto& n = t->as<NewTerm>();
      out << "new " << n.region << ". ";
      render(out, n.body);
      return;
    }
    case Term::Kind::At: {
      const auto& a = t->as<AtTerm>();
      render_operand(out, a.body);
      out << " at " << a.region;
      return;
    }
    case Term::Kind::Deref: {
      const auto& d = t->as<DerefTerm>();
      render_operand(out, d.body);
      out << " ! " << d.region;
      return;
    }
    case Term::Kind::RegLam: {
      const auto& l = t->as<RegLamTerm>();
      out << "@" << l.region << ". ";
      render(out, l.body);
      return;
    }
    case Term::Kind::RegApp: {
      const auto& a = t->as<RegAppTerm>();
      render_operand(out, a.fn);
      out << "[" << a.region << "]";
      return;
    }
    case Term::Kind::If: {
      const auto& i = t->as<IfTerm>();
      out << "if ";
      render(out, i.cond);
      out << " then ";
      render(out, i.then_branch);
      out << " else ";
      render(out, i.else_branch);
      return;
    }
    case Term::Kind::Loc: {
      const auto& l = t->as<LocTerm>();
      out << "<loc " << l.region << "#" << l.index << ">";
      return;
    }
  }
}

}  // namespace

std::string pretty(const TermPtr& t) {
  std::ostringstream out;
  render(out, t);
  return out.str();
}

// ---------------------------------------------------------------------------
// Substitution

TermPtr subst_term(const std::string& name, const TermPtr& value,
                   const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Var:
      return t->as<VarTerm>().name == name ? value : t;
    case Term::Kind::Num:
    case Term::Kind::List:
    case Term::Kind::Loc:
      return t;
    case Term::Kind::Prim: {
      const auto& p = t->as<PrimTerm>();
      std::vector<TermPtr> args;
      args.reserve(p.args.size());
      bool changed = false;
      for (const auto& a : p.args) {
        args.push_back(subst_term(name, value, a));
        changed |= args.back() != a;
      }
      return changed ? make_term(PrimTerm{p.op, std::move(args)}) : t;
    }
    case Term::Kind::Lam: {
      const auto& l = t->as<LamTerm>();
      for (const auto& p : l.params)
        if (p.first == name) return t;
      TermPtr body = subst_term(name, value, l.body);
      return body == l.body
                 ? t
                 : make_term(LamTerm{l.params, l.latent, std::move(body)});
    }
    case Term::Kind::App: {
      const auto& a = t->as<AppTerm>();
      TermPtr fn = subst_term(name, value, a.fn);
      std::vector<TermPtr> args;
      args.reserve(a.args.size());
      bool changed = fn != a.fn;
      for (const auto& x : a.args) {
        args.push_back(subst_term(name, value, x));
        changed |= args.back() != x;
      }
      return changed ? make_term(AppTerm{std::move(fn), std::move(args)}) : t;
    }
    case Term::Kind::Fix: {
      const auto& f = t->as<FixTerm>();
      if (f.var == name) return t;
      TermPtr body = subst_term(name, value, f.body);
      return body == f.body
                 ? t
                 : make_term(FixTerm{f.var, f.annot, std::move(body)});
    }
    case Term::Kind::New: {
      const auto& n = t->as<NewTerm>();
      TermPtr body = subst_term(name, value, n.body);
      return body == n.body ? t
                            : make_term(NewTerm{n.region, std::move(body)});
    }
    case Term::Kind::At: {
      const auto& a = t->as<AtTerm>();
      TermPtr body = subst_term(name, value, a.body);
      return body == a.body ? t
                            : make_term(AtTerm{std::move(body), a.region});
    }
    case Term::Kind::Deref: {
      const auto& d = t->as<DerefTerm>();
      TermPtr body = subst_term(name, value, d.body);
      return body == d.body ? t
                            : make_term(DerefTerm{std::move(body), d.region});
    }
    case Term::Kind::RegLam: {
      const auto& l = t->as<RegLamTerm>();
      TermPtr body = subst_term(name, value, l.body);
      return body == l.body
                 ? t
                 : make_term(RegLamTerm{l.region, std::move(body)});
    }
    case Term::Kind::RegApp: {
      const auto& a = t->as<RegAppTerm>();
      TermPtr fn = subst_term(name, value, a.fn);
      return fn == a.fn ? t
                        : make_term(RegAppTerm{std::move(fn), a.region});
    }
    case Term::Kind::If: {
      const auto& i = t->as<IfTerm>();
      TermPtr c = subst_term(name, value, i.cond);
      TermPtr a = subst_term(name, value, i.then_branch);
      TermPtr b = subst_term(name, value, i.else_branch);
      if (c == i.cond && a == i.then_branch && b == i.else_branch) return t;
      return make_term(IfTerm{std::move(c), std::move(a), std::move(b)});
    }
  }
  return t;
}

TermPtr subst_region(const std::string& from, const std::string& to,
                     const TermPtr& t) {
  auto reg = [&](const std::string& r) { return r == from ? to : r; };
  switch (t->kind()) {
    case Term::Kind::Var:
    case Term::Kind::Num:
    case Term::Kind::List:
    case Term::Kind::Loc:
      return t;
    case Term::Kind::Prim: {
      const auto& p = t->as<PrimTerm>();
      std::vector<TermPtr> args;
      args.reserve(p.args.size());
      for (const auto& a : p.args) args.push_back(subst_region(from, to, a));
      return make_term(PrimTerm{p.op, std::move(args)});
    }
    case Term::Kind::Lam: {
      const auto& l = t->as<LamTerm>();
      std::vector<std::pair<std::string, TypePtr>> params;
      params.reserve(l.params.size());
      for (const auto& p : l.params)
        params.emplace_back(p.first, subst_region_type(from, to, p.second));
      RegionSet latent;
      for (const auto& r : l.latent) latent.insert(reg(r));
      return make_term(LamTerm{std::move(params), std::move(latent),
                               subst_region(from, to, l.body)});
    }
    case Term::Kind::App: {
      const auto& a = t->as<AppTerm>();
      std::vector<TermPtr> args;
      args.reserve(a.args.size());
      for (const auto& x : a.args) args.push_back(subst_region(from, to, x));
      return make_term(
          AppTerm{subst_region(from, to, a.fn), std::move(args)});
    }
    case Term::Kind::Fix: {
      const auto& f = t->as<FixTerm>();
      return make_term(FixTerm{f.var, subst_region_type(from, to, f.annot),
                               subst_region(from, to, f.body)});
    }
    case Term::Kind::New: {
      const auto& n = t->as<NewTerm>();
      if (n.region == from) return t;  // shadowed
      return make_term(NewTerm{n.region, subst_region(from, to, n.body)});
    }
    case Term::Kind::At: {
      const auto& a = t->as<AtTerm>();
      return make_term(AtTerm{subst_region(from, to, a.body), reg(a.region)});
    }
    case Term::Kind::Deref: {
      const auto& d = t->as<DerefTerm>();
      return make_term(
          DerefTerm{subst_region(from, to, d.body), reg(d.region)});
    }
    case Term::Kind::RegLam: {
      const auto& l = t->as<RegLamTerm>();
      if (l.region == from) return t;  // shadowed
      return make_term(RegLamTerm{l.region, subst_region(from, to, l.body)});
    }
    case Term::Kind::RegApp: {
      const auto& a = t->as<RegAppTerm>();
      return make_term(
          RegAppTerm{subst_region(from, to, a.fn), reg(a.region)});
    }
    case Term::Kind::If: {
      const auto& i = t->as<IfTerm>();
      return make_term(IfTerm{subst_region(from, to, i.cond),
                              subst_region(from, to, i.then_branch),
                              subst_region(from, to, i.else_branch)});
    }
  }
  return t;
}

namespace {

void collect_binders(const TermPtr& t, std::vector<std::string>& out) {
  switch (t->kind()) {
    case Term::Kind::Var:
    case Term::Kind::Num:
    case Term::Kind::List:
    case Term::Kind::Loc:
      return;
    case Term::Kind::Prim:
      for (const auto& a : t->as<PrimTerm>().args) collect_binders(a, out);
      return;
    case Term::Kind::Lam:
      collect_binders(t->as<LamTerm>().body, out);
      return;
    case Term::Kind::App: {
      const auto& a = t->as<AppTerm>();
      collect_binders(a.fn, out);
      for (const auto& x : a.args) collect_binders(x, out);
      return;
    }
    case Term::Kind::Fix:
      collect_binders(t->as<FixTerm>().body, out);
      return;
    case Term::Kind::New: {
      out.push_back(t->as<NewTerm>().region);
      collect_binders(t->as<NewTerm>().body, out);
      return;
    }
    case Term::Kind::At:
      collect_binders(t->as<AtTerm>().body, out);
      return;
    case Term::Kind::Deref:
      collect_binders(t->as<DerefTerm>().body, out);
      return;
    case Term::Kind::RegLam: {
      out.push_back(t->as<RegLamTerm>().region);
      collect_binders(t->as<RegLamTerm>().body, out);
      return;
    }
    case Term::Kind::RegApp:
      collect_binders(t->as<RegAppTerm>().fn, out);
      return;
    case Term::Kind::If: {
      const auto& i = t->as<IfTerm>();
      collect_binders(i.cond, out);
      collect_binders(i.then_branch, out);
      collect_binders(i.else_branch, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::string> region_binders(const TermPtr& t) {
  std::vector<std::string> out;
  collect_binders(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Static semantics

namespace {

TypePtr op_result(const std::string& op, const std::vector<TypePtr>& args,
                  Span span) {
  const OpSignature& sig = typeof_op(op, span);
  auto lift = [](const funk::TypePtr& t) {
    return t->kind() == funk::Type::Kind::IntList ? Type::int_list()
                                                  : Type::integer();
  };
  if (sig.params.size() != args.size())
    throw TypeError(ErrorKind::Arity, span,
                    "operator '" + op + "' arity mismatch");
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!type_equal(args[i], lift(sig.params[i])))
      throw TypeError(ErrorKind::Mismatch, span,
                      "operand " + std::to_string(i + 1) + " of '" + op +
                          "' has type " + pretty(args[i]));
  return lift(sig.ret);
}

void require_known_regions(const Env& env, const RegionSet& rs, Span span) {
  for (const auto& r : rs)
    if (!env.regions.count(r))
      throw TypeError(ErrorKind::MalformedEffect, span,
                      "region '" + r + "' is not in scope");
}

}  // namespace

TypePtr typecheck(const Env& env, const RegionSet& effect, const TermPtr& t) {
  Span span{};
  switch (t->kind()) {
    case Term::Kind::Var: {
      auto it = env.vars.find(t->as<VarTerm>().name);
      if (it == env.vars.end())
        throw TypeError(ErrorKind::UnboundVar, span,
                        "unbound variable '" + t->as<VarTerm>().name + "'");
      return it->second;
    }
    case Term::Kind::Num:
      return Type::integer();
    case Term::Kind::List:
      return Type::int_list();
    case Term::Kind::Prim: {
      const auto& p = t->as<PrimTerm>();
      std::vector<TypePtr> args;
      args.reserve(p.args.size());
      for (const auto& a : p.args) args.push_back(typecheck(env, effect, a));
      return op_result(p.op, args, span);
    }
    case Term::Kind::Lam: {
      const auto& l = t->as<LamTerm>();
      require_known_regions(env, l.latent, span);
      Env inner = env;
      std::vector<TypePtr> params;
      for (const auto& [name, ty] : l.params) {
        if (!ty)
          throw TypeError(ErrorKind::MalformedType, span,
                          "lambda parameter '" + name + "' lacks a type");
        require_known_regions(env, free_regions(ty), span);
        inner = inner.with_var(name, ty);
        params.push_back(ty);
      }
      TypePtr body = typecheck(inner, l.latent, l.body);
      return Type::arrow(std::move(params), std::move(body), l.latent);
    }
    case Term::Kind::App: {
      const auto& a = t->as<AppTerm>();
      TypePtr fn = typecheck(env, effect, a.fn);
      if (fn->kind() != Type::Kind::Arrow)
        throw TypeError(ErrorKind::Mismatch, span,
                        "applying a non-function of type " + pretty(fn));
      if (fn->params().size() != a.args.size())
        throw TypeError(ErrorKind::Arity, span, "application arity mismatch");
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        TypePtr arg = typecheck(env, effect, a.args[i]);
        if (!type_equal(arg, fn->params()[i]))
          throw TypeError(ErrorKind::Mismatch, span,
                          "argument " + std::to_string(i + 1) + " has type " +
                              pretty(arg) + ", expected " +
                              pretty(fn->params()[i]));
      }
      for (const auto& r : fn->latent())
        if (!effect.count(r))
          throw TypeError(ErrorKind::EffectViolation, span,
                          "application needs region '" + r +
                              "', which is not in the permitted effect");
      return fn->ret();
    }
    case Term::Kind::Fix: {
      const auto& f = t->as<FixTerm>();
      if (!f.annot)
        throw TypeError(ErrorKind::MalformedType, span,
                        "fix without a type annotation");
      require_known_regions(env, free_regions(f.annot), span);
      TypePtr body = typecheck(env.with_var(f.var, f.annot), effect, f.body);
      if (!type_equal(body, f.annot))
        throw TypeError(ErrorKind::Mismatch, span,
                        "fix body has type " + pretty(body) + ", expected " +
                            pretty(f.annot));
      return f.annot;
    }
    case Term::Kind::New: {
      const auto& n = t->as<NewTerm>();
      if (env.regions.count(n.region))
        throw TypeError(ErrorKind::MalformedType, span,
                        "region '" + n.region + "' shadows an enclosing one");
      RegionSet inner_eff = effect;
      inner_eff.insert(n.region);
      TypePtr body = typecheck(env.with_region(n.region), inner_eff, n.body);
      if (free_regions(body).count(n.region))
        throw TypeError(ErrorKind::EffectViolation, span,
                        "region '" + n.region +
                            "' escapes through the result type " +
                            pretty(body));
      return body;
    }
    case Term::Kind::At: {
      const auto& a = t->as<AtTerm>();
      if (!env.regions.count(a.region))
        throw TypeError(ErrorKind::MalformedEffect, span,
                        "region '" + a.region + "' is not in scope");
      if (!effect.count(a.region))
        throw TypeError(ErrorKind::EffectViolation, span,
                        "allocation into region '" + a.region +
                            "' is not permitted here");
      return Type::at_region(typecheck(env, effect, a.body), a.region);
    }
    case Term::Kind::Deref: {
      const auto& d = t->as<DerefTerm>();
      if (!env.regions.count(d.region))
        throw TypeError(ErrorKind::MalformedEffect, span,
                        "region '" + d.region + "' is not in scope");
      if (!effect.count(d.region))
        throw TypeError(ErrorKind::EffectViolation, span,
                        "read from region '" + d.region +
                            "' is not permitted here");
      TypePtr body = typecheck(env, effect, d.body);
      if (body->kind() != Type::Kind::At || body->at() != d.region)
        throw TypeError(ErrorKind::Mismatch, span,
                        "dereference at '" + d.region +
                            "' of a value of type " + pretty(body));
      return body->inner();
    }
    case Term::Kind::RegLam: {
      const auto& l = t->as<RegLamTerm>();
      if (env.regions.count(l.region))
        throw TypeError(ErrorKind::MalformedType, span,
                        "region '" + l.region + "' shadows an enclosing one");
      TypePtr body =
          typecheck(env.with_region(l.region), RegionSet{}, l.body);
      return Type::all(l.region, std::move(body));
    }
    case Term::Kind::RegApp: {
      const auto& a = t->as<RegAppTerm>();
      if (!env.regions.count(a.region))
        throw TypeError(ErrorKind::MalformedEffect, span,
                        "region '" + a.region + "' is not in scope");
      TypePtr fn = typecheck(env, effect, a.fn);
      if (fn->kind() != Type::Kind::All)
        throw TypeError(ErrorKind::Mismatch, span,
                        "region application of a value of type " +
                            pretty(fn));
      return subst_region_type(fn->var(), a.region, fn->body());
    }
    case Term::Kind::If: {
      const auto& i = t->as<IfTerm>();
      TypePtr c = typecheck(env, effect, i.cond);
      if (c->kind() != Type::Kind::Int)
        throw TypeError(ErrorKind::Mismatch, span,
                        "condition has type " + pretty(c));
      TypePtr a = typecheck(env, effect, i.then_branch);
      TypePtr b = typecheck(env, effect, i.else_branch);
      if (!type_equal(a, b))
        throw TypeError(ErrorKind::Mismatch, span,
                        "branches disagree: " + pretty(a) + " vs " +
                            pretty(b));
      return a;
    }
    case Term::Kind::Loc:
      throw TypeError(ErrorKind::MalformedType, span,
                      "location values cannot be typed statically");
  }
  throw TypeError(ErrorKind::Mismatch, span, "unreachable region term");
}

// ---------------------------------------------------------------------------
// Translation

TypePtr translate_type(const funk::TypePtr& t, const RegionMap& r) {
  switch (t->kind()) {
    case funk::Type::Kind::Int:
      return Type::integer();
    case funk::Type::Kind::IntList:
      return Type::int_list();
    case funk::Type::Kind::Top:
      throw TypeError(ErrorKind::MalformedType, Span{},
                      "top has no region-calculus counterpart");
    case funk::Type::Kind::Func: {
      std::vector<TypePtr> params;
      params.reserve(t->params().size());
      for (const auto& p : t->params()) params.push_back(translate_type(p, r));
      return Type::arrow(std::move(params), translate_type(t->ret(), r),
                         translate_effect(t->effect(), r));
    }
    case funk::Type::Kind::EffAll: {
      // Deterministic bound-region naming keyed by the quantifier depth.
      std::string rho = "q" + std::to_string(r.size() + 1);
      while (true) {
        bool taken = false;
        for (const auto& [k, v] : r) taken |= v == rho;
        if (!taken) break;
        rho += "'";
      }
      RegionMap inner = r;
      inner[t->var()] = rho;
      return Type::all(rho, translate_type(t->body(), inner));
    }
  }
  throw TypeError(ErrorKind::MalformedType, Span{}, "unreachable type kind");
}

RegionSet translate_effect(const funk::Effect& eff, const RegionMap& r) {
  RegionSet out;
  for (const auto& a : eff) {
    if (a.is_loc())
      throw TypeError(ErrorKind::MalformedEffect, Span{},
                      "cannot translate a mid-execution effect");
    auto it = r.find(a.name);
    if (it == r.end())
      throw TypeError(ErrorKind::MalformedEffect, Span{},
                      "effect variable '" + a.name + "' has no region");
    out.insert(it->second);
  }
  return out;
}

Env relate_env(const TypeEnv& gamma, const RegionMap& r) {
  // Gamma |- R: stack-bound variables (including effect parameters) are
  // mapped, copy-bound ones are not.
  for (const auto& b : gamma.bindings()) {
    bool mapped = r.count(b.name) > 0;
    bool plain = !b.is_copy;
    if (plain != mapped)
      throw TypeError(ErrorKind::MalformedEffect, Span{},
                      "variable-region discipline violated at '" + b.name +
                          "'");
  }
  Env out;
  RegionMap seen;
  for (const auto& b : gamma.bindings()) {
    if (!b.is_copy && b.type->kind() == funk::Type::Kind::Top) {
      out.regions.insert(r.at(b.name));
      continue;
    }
    if (b.is_copy) {
      out.vars[b.name] = translate_type(b.type, r);
    } else {
      const std::string& rho = r.at(b.name);
      out.vars[b.name] =
          Type::at_region(translate_type(b.type, r), rho);
      out.regions.insert(rho);
    }
  }
  return out;
}

std::string Translator::fresh_region() {
  return "r" + std::to_string(++region_counter_);
}

std::string Translator::fresh_value() {
  return "v" + std::to_string(++value_counter_);
}

TermPtr Translator::expr(const ExprPtr& e, const TypeEnv& gamma,
                         const Effect& reads, const RegionMap& r) {
  switch (e->kind()) {
    case Expr::Kind::Var: {
      const auto& v = e->as<VarExpr>();
      const Binding* b = gamma.lookup(v.name);
      if (!b)
        throw TypeError(ErrorKind::UnboundVar, e->span(),
                        "unbound variable '" + v.name + "' in translation");
      if (b->is_copy) return make_term(VarTerm{v.name});
      return make_term(DerefTerm{make_term(VarTerm{v.name}), r.at(v.name)});
    }
    case Expr::Kind::Num:
      return make_term(NumTerm{e->as<NumExpr>().value});
    case Expr::Kind::List:
      return make_term(ListTerm{e->as<ListExpr>().elems});
    case Expr::Kind::Prim: {
      const auto& p = e->as<PrimExpr>();
      std::vector<TermPtr> args;
      args.reserve(p.args.size());
      for (const auto& a : p.args) args.push_back(expr(a, gamma, reads, r));
      return make_term(PrimTerm{p.op, std::move(args)});
    }
    case Expr::Kind::Fun: {
      const auto& f = e->as<FunExpr>();
      if (!f.ret)
        throw TypeError(ErrorKind::MalformedType, e->span(),
                        "translating an unelaborated function");
      RegionSet latent = translate_effect(f.effect, r);
      // One fresh region per parameter; the value arrives by copy and is
      // immediately stored into its region.
      std::vector<std::pair<std::string, TypePtr>> lam_params;
      std::vector<std::string> value_names;
      std::vector<std::string> param_regions;
      for (const auto& p : f.params) {
        lam_params.emplace_back(fresh_value(), translate_type(p.type, r));
        value_names.push_back(lam_params.back().first);
        param_regions.push_back(fresh_region());
      }
      TypeEnv inner_gamma = gamma;
      Effect inner_reads = f.effect;
      RegionMap inner_r = r;
      for (std::size_t i = 0; i < f.params.size(); ++i) {
        inner_gamma =
            inner_gamma.extended(f.params[i].name, f.params[i].type, false);
        inner_reads =
            effect_insert(inner_reads, EffectAtom::var(f.params[i].name));
        inner_r[f.params[i].name] = param_regions[i];
      }
      TermPtr body = stmt(f.body, inner_gamma, inner_reads, inner_r);
      // Build the new/let chain inside-out.
      for (std::size_t k = f.params.size(); k-- > 0;) {
        RegionSet let_latent = latent;
        for (std::size_t j = 0; j <= k; ++j)
          let_latent.insert(param_regions[j]);
        TypePtr located = Type::at_region(
            translate_type(f.params[k].type, r), param_regions[k]);
        body = make_term(NewTerm{
            param_regions[k],
            let_in(f.params[k].name, located, let_latent,
                   make_term(AtTerm{make_term(VarTerm{value_names[k]}),
                                    param_regions[k]}),
                   body)});
      }
      return make_term(LamTerm{std::move(lam_params), latent, body});
    }
    case Expr::Kind::EffAbs: {
      const auto& f = e->as<EffAbsExpr>();
      std::string rho = fresh_region();
      RegionMap inner = r;
      inner[f.var] = rho;
      TermPtr body = expr(f.body, gamma.extended(f.var, funk::Type::top(),
                                                 false),
                          Effect(), inner);
      return make_term(RegLamTerm{rho, body});
    }
    case Expr::Kind::EffApp: {
      const auto& a = e->as<EffAppExpr>();
      if (a.arg.is_loc())
        throw TypeError(ErrorKind::MalformedEffect, e->span(),
                        "translating a mid-execution effect application");
      auto it = r.find(a.arg.name);
      if (it == r.end())
        throw TypeError(ErrorKind::MalformedEffect, e->span(),
                        "effect argument '" + a.arg.name + "' has no region");
      return make_term(
          RegAppTerm{expr(a.fn, gamma, reads, r), it->second});
    }
    case Expr::Kind::Let: {
      const auto& l = e->as<LetExpr>();
      funk::TypePtr rhs_src_ty = type_expr(gamma, reads, l.rhs).type;
      TermPtr rhs = expr(l.rhs, gamma, reads, r);
      TermPtr body =
          expr(l.body, gamma.extended(l.var, rhs_src_ty, true), reads, r);
      return let_in(l.var, translate_type(rhs_src_ty, r),
                    translate_effect(reads, r), rhs, body);
    }
    case Expr::Kind::Fix: {
      const auto& f = e->as<FixExpr>();
      TermPtr body = expr(f.body, gamma.extended(f.var, f.annot, true),
                          reads, r);
      return make_term(FixTerm{f.var, translate_type(f.annot, r), body});
    }
    case Expr::Kind::Loc:
      throw TypeError(ErrorKind::MalformedType, e->span(),
                      "translating a mid-execution location");
  }
  throw TypeError(ErrorKind::MalformedType, e->span(), "unreachable");
}

TermPtr Translator::stmt(const StmtPtr& s, const TypeEnv& gamma,
                         const Effect& reads, const RegionMap& r) {
  switch (s->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& v = s->as<VarInitStmt>();
      if (!v.annot)
        throw TypeError(ErrorKind::MalformedType, s->span(),
                        "translating an unelaborated initialization");
      std::string rho = fresh_region();
      TermPtr rhs = expr(v.rhs, gamma, reads, r);
      RegionMap inner_r = r;
      inner_r[v.var] = rho;
      Effect inner_reads = effect_insert(reads, EffectAtom::var(v.var));
      TermPtr rest = stmt(v.rest, gamma.extended(v.var, v.annot, false),
                          inner_reads, inner_r);
      return make_term(NewTerm{
          rho, let_in(v.var, Type::at_region(translate_type(v.annot, r), rho),
                      translate_effect(inner_reads, inner_r),
                      make_term(AtTerm{rhs, rho}), rest)});
    }
    case Stmt::Kind::LetCall: {
      const auto& c = s->as<LetCallStmt>();
      funk::TypePtr fn_ty = type_expr(gamma, reads, c.fn).type;
      if (fn_ty->kind() != funk::Type::Kind::Func)
        throw TypeError(ErrorKind::Mismatch, s->span(),
                        "translating a call of a non-function");
      funk::TypePtr ret_ty = fn_ty->ret();
      std::string rho = fresh_region();
      TermPtr fn = expr(c.fn, gamma, reads, r);
      std::vector<TermPtr> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args) args.push_back(expr(a, gamma, reads, r));
      TermPtr call = make_term(AppTerm{fn, std::move(args)});
      RegionMap inner_r = r;
      inner_r[c.var] = rho;
      Effect inner_reads = effect_insert(reads, EffectAtom::var(c.var));
      TermPtr rest = stmt(c.rest, gamma.extended(c.var, ret_ty, false),
                          inner_reads, inner_r);
      return make_term(NewTerm{
          rho, let_in(c.var, Type::at_region(translate_type(ret_ty, r), rho),
                      translate_effect(inner_reads, inner_r),
                      make_term(AtTerm{call, rho}), rest)});
    }
    case Stmt::Kind::TailCall: {
      const auto& c = s->as<TailCallStmt>();
      TermPtr fn = expr(c.fn, gamma, reads, r);
      std::vector<TermPtr> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args) args.push_back(expr(a, gamma, reads, r));
      return make_term(AppTerm{fn, std::move(args)});
    }
    case Stmt::Kind::Return:
      return expr(s->as<ReturnStmt>().value, gamma, reads, r);
    case Stmt::Kind::If: {
      const auto& i = s->as<IfStmt>();
      return make_term(IfTerm{expr(i.cond, gamma, reads, r),
                              stmt(i.then_branch, gamma, reads, r),
                              stmt(i.else_branch, gamma, reads, r)});
    }
    case Stmt::Kind::Proc:
      throw TypeError(ErrorKind::MalformedType, s->span(),
                      "translating a proc statement");
  }
  throw TypeError(ErrorKind::MalformedType, s->span(), "unreachable");
}

TermPtr Translator::program(const CheckedProgram& p) {
  return stmt(p.program.body, TypeEnv(), Effect(), RegionMap());
}

TermPtr translate(const CheckedProgram& p) {
  return Translator().program(p);
}

// ---------------------------------------------------------------------------
// Dynamic semantics

namespace {

struct Trap : std::runtime_error {
  Trap(bool dangling, const std::string& msg)
      : std::runtime_error(msg), dangling(dangling) {}
  bool dangling;
};

struct Store {
  struct Inst {
    bool live = true;
    std::vector<TermPtr> cells;
    std::size_t list_cells = 0;
  };

  std::map<std::string, Inst> regions;
  std::size_t live_regions = 0;
  std::size_t live_values = 0;
  std::size_t live_list_cells = 0;
  RunStats stats;
  int dynamic_counter = 0;

  std::string allocate(const std::string& base) {
    std::string name = base + "@" + std::to_string(++dynamic_counter);
    regions[name] = Inst{};
    ++live_regions;
    ++stats.allocations;
    stats.peak_live_regions = std::max(stats.peak_live_regions, live_regions);
    return name;
  }

  void deallocate(const std::string& name) {
    Inst& inst = regions.at(name);
    live_values -= inst.cells.size();
    live_list_cells -= inst.list_cells;
    --live_regions;
    inst.live = false;
    inst.cells.clear();  // tombstone keeps the entry, data is gone
  }

  std::size_t append(const std::string& name, TermPtr value) {
    auto it = regions.find(name);
    if (it == regions.end())
      throw Trap(false, "allocation into unknown region '" + name + "'");
    if (!it->second.live)
      throw Trap(true, "allocation into deallocated region '" + name + "'");
    if (const auto* l = value->get_if<ListTerm>()) {
      it->second.list_cells += l->elems.size();
      live_list_cells += l->elems.size();
    }
    it->second.cells.push_back(std::move(value));
    ++live_values;
    stats.peak_live_values = std::max(stats.peak_live_values, live_values);
    stats.peak_live_list_cells =
        std::max(stats.peak_live_list_cells, live_list_cells);
    return it->second.cells.size() - 1;
  }

  const TermPtr& read(const std::string& name, std::size_t index) {
    auto it = regions.find(name);
    if (it == regions.end())
      throw Trap(false, "read from unknown region '" + name + "'");
    if (!it->second.live)
      throw Trap(true, "dangling access to region '" + name + "'");
    if (index >= it->second.cells.size())
      throw Trap(false, "region index out of range");
    return it->second.cells[index];
  }
};

TermPtr eval(const TermPtr& t, Store& store, Fuel& fuel) {
  Fuel::Scope depth(fuel);
  switch (t->kind()) {
    case Term::Kind::Num:
    case Term::Kind::List:
    case Term::Kind::Lam:
    case Term::Kind::RegLam:
    case Term::Kind::Loc:
      return t;
    case Term::Kind::Var:
      throw Trap(false,
                 "free variable '" + t->as<VarTerm>().name + "'");
    case Term::Kind::Prim: {
      const auto& p = t->as<PrimTerm>();
      std::vector<funk::Value> vals;
      vals.reserve(p.args.size());
      for (const auto& a : p.args) {
        TermPtr v = eval(a, store, fuel);
        if (const auto* n = v->get_if<NumTerm>())
          vals.push_back(funk::make_expr(funk::NumExpr{n->value}));
        else if (const auto* l = v->get_if<ListTerm>())
          vals.push_back(funk::make_expr(funk::ListExpr{l->elems}));
        else
          throw Trap(false, "operator '" + p.op + "' applied to " + pretty(v));
      }
      try {
        funk::Value out = funk::delta(p.op, vals, Span{});
        if (const auto* n = out->get_if<funk::NumExpr>())
          return make_term(NumTerm{n->value});
        return make_term(ListTerm{out->as<funk::ListExpr>().elems});
      } catch (const StuckError& e) {
        throw Trap(false, e.what());
      }
    }
    case Term::Kind::App: {
      const auto& a = t->as<AppTerm>();
      TermPtr fn = eval(a.fn, store, fuel);
      const auto* lam = fn->get_if<LamTerm>();
      if (!lam) throw Trap(false, "applying " + pretty(fn));
      if (lam->params.size() != a.args.size())
        throw Trap(false, "application arity mismatch");
      TermPtr body = lam->body;
      std::vector<TermPtr> vals;
      vals.reserve(a.args.size());
      for (const auto& x : a.args) vals.push_back(eval(x, store, fuel));
      for (std::size_t i = 0; i < vals.size(); ++i)
        body = subst_term(lam->params[i].first, vals[i], body);
      fuel.burn();
      return eval(body, store, fuel);
    }
    case Term::Kind::Fix: {
      const auto& f = t->as<FixTerm>();
      fuel.burn();
      return eval(subst_term(f.var, t, f.body), store, fuel);
    }
    case Term::Kind::New: {
      const auto& n = t->as<NewTerm>();
      std::string dyn = store.allocate(n.region);
      fuel.burn();
      TermPtr result = eval(subst_region(n.region, dyn, n.body), store, fuel);
      store.deallocate(dyn);
      return result;
    }
    case Term::Kind::At: {
      const auto& a = t->as<AtTerm>();
      TermPtr v = eval(a.body, store, fuel);
      std::size_t idx = store.append(a.region, v);
      return make_term(LocTerm{a.region, idx});
    }
    case Term::Kind::Deref: {
      const auto& d = t->as<DerefTerm>();
      TermPtr v = eval(d.body, store, fuel);
      const auto* loc = v->get_if<LocTerm>();
      if (!loc) throw Trap(false, "dereferencing " + pretty(v));
      if (loc->region != d.region)
        throw Trap(false, "dereference region mismatch: value in '" +
                              loc->region + "', annotation '" + d.region +
                              "'");
      return store.read(loc->region, loc->index);
    }
    case Term::Kind::RegApp: {
      const auto& a = t->as<RegAppTerm>();
      TermPtr fn = eval(a.fn, store, fuel);
      const auto* lam = fn->get_if<RegLamTerm>();
      if (!lam) throw Trap(false, "region application of " + pretty(fn));
      fuel.burn();
      return eval(subst_region(lam->region, a.region, lam->body), store,
                  fuel);
    }
    case Term::Kind::If: {
      const auto& i = t->as<IfTerm>();
      TermPtr c = eval(i.cond, store, fuel);
      const auto* n = c->get_if<NumTerm>();
      if (!n) throw Trap(false, "non-integer condition");
      return eval(n->value != 0 ? i.then_branch : i.else_branch, store, fuel);
    }
  }
  throw Trap(false, "unreachable region term");
}

}  // namespace

RunResult run(const TermPtr& t, std::uint64_t fuel_amount) {
  RunResult result;
  Store store;
  Fuel fuel(fuel_amount);
  try {
    TermPtr v = eval(t, store, fuel);
    result.stats = store.stats;
    result.status = RunResult::Status::Final;
    switch (v->kind()) {
      case Term::Kind::Num:
        result.observation = Observation::number(v->as<NumTerm>().value);
        break;
      case Term::Kind::List:
        result.observation = Observation::of_list(v->as<ListTerm>().elems);
        break;
      case Term::Kind::Lam:
        result.observation = Observation::fun();
        break;
      case Term::Kind::RegLam:
        result.observation = Observation::abs();
        break;
      case Term::Kind::Loc:
        result.observation = Observation::fun();
        result.opaque_location = true;
        break;
      default:
        result.status = RunResult::Status::TrapStuck;
        result.message = "non-value result";
        break;
    }
    return result;
  } catch (const Trap& trap) {
    result.stats = store.stats;
    result.status = trap.dangling ? RunResult::Status::TrapDangling
                                  : RunResult::Status::TrapStuck;
    result.message = trap.what();
    return result;
  } catch (const FuelExhausted&) {
    result.stats = store.stats;
    result.status = RunResult::Status::FuelExhausted;
    result.message = "fuel exhausted";
    return result;
  }
}

}  // namespace funk::region
