#include "funk/generate.hpp"

#include "funk/subst.hpp"

namespace funk {

namespace {

// Plain bindings visible in an environment, rightmost occurrence only.
std::vector<const Binding*> plain_bindings(const TypeEnv& env) {
  std::vector<const Binding*> out;
  for (const auto& b : env.bindings()) {
    const Binding* found = env.lookup(b.name);
    if (found == &b && !b.is_copy && b.type->kind() != Type::Kind::Top)
      out.push_back(&b);
  }
  return out;
}

std::vector<EffectAtom> var_atoms(const Effect& eff) {
  std::vector<EffectAtom> out;
  for (const auto& a : eff)
    if (a.is_var()) out.push_back(a);
  return out;
}

}  // namespace

Generator::Generator(std::uint64_t seed, int size_bound)
    : rng_state_(seed ^ 0x6a09e667f3bcc908ULL), budget_(size_bound) {}

std::uint64_t Generator::pick(std::uint64_t n) {
  // splitmix64; stable across platforms so frozen seeds stay meaningful.
  std::uint64_t z = (rng_state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z = z ^ (z >> 31);
  return n == 0 ? 0 : z % n;
}

std::string Generator::fresh(const char* base) {
  return std::string(base) + "$g" + std::to_string(++name_counter_);
}

// Types whose effects mention only readable plain variables, so functions
// of these types can always be called where they are created.
static TypePtr gen_type_in(Generator& g, const Generator::Ctx& ctx,
                           int depth) {
  if (depth <= 0) return g.pick(4) == 0 ? Type::int_list() : Type::integer();
  std::uint64_t roll = g.pick(100);
  if (roll < 55) return Type::integer();
  if (roll < 70) return Type::int_list();

  auto func = [&](const Effect& allowed) {
    std::vector<TypePtr> params;
    std::size_t arity = g.pick(3);
    for (std::size_t i = 0; i < arity; ++i)
      params.push_back(gen_type_in(g, ctx, depth - 1));
    TypePtr ret = gen_type_in(g, ctx, depth - 1);
    std::vector<EffectAtom> atoms = var_atoms(allowed);
    std::vector<EffectAtom> chosen;
    if (!atoms.empty() && g.pick(2) == 0)
      chosen.push_back(atoms[g.pick(atoms.size())]);
    return Type::func(std::move(params), std::move(ret),
                      Effect(std::move(chosen)));
  };

  if (roll < 95) return func(ctx.reads);
  // Effect-quantified function: the bound variable may appear in the
  // latent effect.
  std::string p = g.fresh("p");
  std::vector<TypePtr> params;
  std::size_t arity = g.pick(2) + 1;
  for (std::size_t i = 0; i < arity; ++i)
    params.push_back(gen_type_in(g, ctx, 0));
  TypePtr ret = gen_type_in(g, ctx, 0);
  return Type::eff_all(
      p, Type::func(std::move(params), std::move(ret), Effect::vars({p})));
}

TypePtr Generator::random_type(int depth) {
  Ctx empty;
  return gen_type_in(*this, empty, depth);
}

// An abstraction term (fun or effect abstraction) of the target type; the
// only shapes allowed as effect-abstraction and fix bodies.
static ExprPtr typed_abs(Generator& g, const Generator::Ctx& ctx,
                         const TypePtr& target, int depth) {
  if (target->kind() == Type::Kind::EffAll) {
    Generator::Ctx inner = ctx;
    inner.env = ctx.env.extended(target->var(), Type::top(), false);
    inner.reads = Effect();  // effect abstractions check under no effect
    inner.locals = Effect();
    return make_expr(
        EffAbsExpr{target->var(), typed_abs(g, inner, target->body(),
                                            depth - 1)});
  }
  // Function literal.
  std::vector<Param> params;
  Generator::Ctx body_ctx = ctx;
  body_ctx.reads = target->effect();
  body_ctx.locals = Effect();
  for (const auto& pt : target->params()) {
    std::string name = g.fresh("a");
    params.push_back(Param{name, pt});
    body_ctx.env = body_ctx.env.extended(name, pt, false);
    body_ctx.reads = effect_insert(body_ctx.reads, EffectAtom::var(name));
    body_ctx.locals = effect_insert(body_ctx.locals, EffectAtom::var(name));
  }
  StmtPtr body = g.typed_stmt(body_ctx, target->ret(), depth - 1);
  return make_expr(
      FunExpr{std::move(params), {}, target->effect(), nullptr, body});
}

ExprPtr Generator::typed_expr(const Ctx& ctx, const TypePtr& target,
                              int depth) {
  --budget_;
  bool small = depth <= 0 || budget_ <= 0;

  // A variable of exactly the right type is always a candidate.
  std::vector<std::string> vars;
  for (const auto& b : ctx.env.bindings()) {
    const Binding* found = ctx.env.lookup(b.name);
    if (found != &b || !type_equal(b.type, target)) continue;
    if (!b.is_copy && !ctx.reads.contains(EffectAtom::var(b.name))) continue;
    vars.push_back(b.name);
  }
  if (!vars.empty() && pick(small ? 2 : 4) == 0)
    return make_expr(VarExpr{vars[pick(vars.size())]});

  switch (target->kind()) {
    case Type::Kind::Int: {
      if (small) return make_expr(NumExpr{(long long)pick(10)});
      switch (pick(6)) {
        case 0:
          return make_expr(NumExpr{(long long)pick(100)});
        case 1: {
          const char* ops[] = {"+", "-", "*"};
          return make_expr(PrimExpr{ops[pick(3)],
                                    {typed_expr(ctx, Type::integer(), depth - 1),
                                     typed_expr(ctx, Type::integer(), depth - 1)}});
        }
        case 2: {
          const char* ops[] = {"inc", "dec", "iszero"};
          return make_expr(PrimExpr{
              ops[pick(3)], {typed_expr(ctx, Type::integer(), depth - 1)}});
        }
        case 3:
          return make_expr(PrimExpr{
              "length", {typed_expr(ctx, Type::int_list(), depth - 1)}});
        default:
          break;
      }
      break;
    }
    case Type::Kind::IntList: {
      if (small) return make_expr(ListExpr{});
      switch (pick(4)) {
        case 0:
          return make_expr(ListExpr{});
        case 1:
          return make_expr(
              PrimExpr{"cons",
                       {typed_expr(ctx, Type::integer(), depth - 1),
                        typed_expr(ctx, Type::int_list(), depth - 1)}});
        default:
          break;
      }
      break;
    }
    case Type::Kind::Func: {
      if (small) return typed_abs(*this, ctx, target, depth);
      switch (pick(5)) {
        case 0: {
          // fix with an unused binder: unrolls once and terminates. The
          // binder is deliberately kept out of the candidate environment so
          // generated programs never recurse.
          std::string fr = fresh("r");
          return make_expr(
              FixExpr{fr, target, typed_abs(*this, ctx, target, depth - 1)});
        }
        case 1: {
          // Instantiating an effect abstraction gives the target back:
          // <p> T[a := p] applied to a.
          std::vector<EffectAtom> atoms = var_atoms(target->effect());
          std::string p = fresh("p");
          if (!atoms.empty()) {
            EffectAtom a = atoms[pick(atoms.size())];
            TypePtr poly = subst_atom(a.name, EffectAtom::var(p), target);
            Ctx inner = ctx;
            inner.env = ctx.env.extended(p, Type::top(), false);
            inner.reads = Effect();
            inner.locals = Effect();
            ExprPtr abs = make_expr(
                EffAbsExpr{p, typed_abs(*this, inner, poly, depth - 1)});
            return make_expr(EffAppExpr{abs, a});
          }
          std::vector<const Binding*> plains = plain_bindings(ctx.env);
          if (!plains.empty()) {
            const Binding* b = plains[pick(plains.size())];
            Ctx inner = ctx;
            inner.env = ctx.env.extended(p, Type::top(), false);
            inner.reads = Effect();
            inner.locals = Effect();
            ExprPtr abs = make_expr(
                EffAbsExpr{p, typed_abs(*this, inner, target, depth - 1)});
            return make_expr(EffAppExpr{abs, EffectAtom::var(b->name)});
          }
          break;
        }
        default:
          break;
      }
      break;
    }
    case Type::Kind::EffAll:
      return typed_abs(*this, ctx, target, depth);
    case Type::Kind::Top:
      break;
  }

  // Let-copy wrapper, or the plain fallback for the target kind.
  if (!small && pick(4) == 0) {
    std::string c = fresh("c");
    TypePtr ct = gen_type_in(*this, ctx, 1);
    ExprPtr rhs = typed_expr(ctx, ct, depth - 1);
    Ctx inner = ctx;
    inner.env = ctx.env.extended(c, ct, true);
    return make_expr(LetExpr{c, rhs, typed_expr(inner, target, depth - 1)});
  }
  switch (target->kind()) {
    case Type::Kind::Int:
      return make_expr(NumExpr{(long long)pick(10)});
    case Type::Kind::IntList:
      return make_expr(ListExpr{});
    default:
      return typed_abs(*this, ctx, target, depth);
  }
}

StmtPtr Generator::typed_stmt(const Ctx& ctx, const TypePtr& target,
                              int depth) {
  --budget_;
  if (depth <= 0 || budget_ <= 0)
    return make_stmt(ReturnStmt{typed_expr(ctx, target, 0)});

  std::uint64_t roll = pick(100);
  if (roll < 30) {  // var initialization
    TypePtr t = gen_type_in(*this, ctx, depth - 1);
    std::string x = fresh("x");
    ExprPtr rhs = typed_expr(ctx, t, depth - 1);
    Ctx inner = ctx;
    inner.env = ctx.env.extended(x, t, false);
    inner.reads = effect_insert(ctx.reads, EffectAtom::var(x));
    inner.locals = effect_insert(ctx.locals, EffectAtom::var(x));
    return make_stmt(
        VarInitStmt{x, nullptr, rhs, typed_stmt(inner, target, depth - 1)});
  }
  if (roll < 50) {  // call
    TypePtr ret = gen_type_in(*this, ctx, depth - 1);
    std::vector<TypePtr> params;
    std::size_t arity = pick(3);
    for (std::size_t i = 0; i < arity; ++i)
      params.push_back(gen_type_in(*this, ctx, 1));
    std::vector<EffectAtom> readable = var_atoms(ctx.reads);
    std::vector<EffectAtom> eff;
    if (!readable.empty() && pick(2) == 0)
      eff.push_back(readable[pick(readable.size())]);
    TypePtr fty = Type::func(params, ret, Effect(std::move(eff)));
    ExprPtr fn = typed_expr(ctx, fty, depth - 1);
    std::vector<ExprPtr> args;
    for (const auto& pt : params)
      args.push_back(typed_expr(ctx, pt, depth - 1));
    std::string x = fresh("x");
    Ctx inner = ctx;
    inner.env = ctx.env.extended(x, ret, false);
    inner.reads = effect_insert(ctx.reads, EffectAtom::var(x));
    inner.locals = effect_insert(ctx.locals, EffectAtom::var(x));
    return make_stmt(LetCallStmt{x, fn, std::move(args),
                                 typed_stmt(inner, target, depth - 1)});
  }
  if (roll < 65) {  // tail call: callee effect must avoid the locals
    std::vector<TypePtr> params;
    std::size_t arity = pick(3);
    for (std::size_t i = 0; i < arity; ++i)
      params.push_back(gen_type_in(*this, ctx, 1));
    std::vector<EffectAtom> surviving =
        var_atoms(effect_minus(ctx.reads, ctx.locals));
    std::vector<EffectAtom> eff;
    if (!surviving.empty() && pick(2) == 0)
      eff.push_back(surviving[pick(surviving.size())]);
    TypePtr fty = Type::func(params, target, Effect(std::move(eff)));
    ExprPtr fn = typed_expr(ctx, fty, depth - 1);
    std::vector<ExprPtr> args;
    for (const auto& pt : params)
      args.push_back(typed_expr(ctx, pt, depth - 1));
    return make_stmt(TailCallStmt{fn, std::move(args)});
  }
  if (roll < 75) {  // if
    ExprPtr cond = typed_expr(ctx, Type::integer(), depth - 1);
    return make_stmt(IfStmt{cond, typed_stmt(ctx, target, depth - 1),
                            typed_stmt(ctx, target, depth - 1)});
  }
  return make_stmt(ReturnStmt{typed_expr(ctx, target, depth)});
}

Generator::Ctx Generator::random_ctx(int bindings) {
  Ctx ctx;
  for (int i = 0; i < bindings; ++i) {
    std::string name = fresh("b");
    TypePtr t = gen_type_in(*this, ctx, 1);
    bool copy = pick(3) == 0;
    ctx.env = ctx.env.extended(name, t, copy);
    if (!copy && pick(2) == 0)
      ctx.reads = effect_insert(ctx.reads, EffectAtom::var(name));
  }
  return ctx;
}

Program Generator::program() {
  Ctx ctx;
  // The program type must be closed; an empty context guarantees it.
  TypePtr t = gen_type_in(*this, ctx, 2);
  return Program{typed_stmt(ctx, t, 4)};
}

Program generate_program(std::uint64_t seed, int size_bound) {
  return Generator(seed, size_bound).program();
}

std::vector<Program> generate_programs(std::uint64_t seed, int count,
                                       int size_bound) {
  std::vector<Program> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i)
    out.push_back(generate_program(seed + i, size_bound));
  return out;
}

}  // namespace funk
