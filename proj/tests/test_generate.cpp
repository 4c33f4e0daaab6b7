#include "doctest.h"

#include "funk/generate.hpp"
#include "funk/machine.hpp"
#include "funk/oracle.hpp"
#include "funk/pretty.hpp"
#include "funk/subst.hpp"

using namespace funk;

TEST_CASE("generation is deterministic in the seed") {
  Program a = generate_program(1, 40);
  Program b = generate_program(1, 40);
  CHECK(program_equal(a, b));
  Program c = generate_program(2, 40);
  CHECK_FALSE(pretty(a) == pretty(c));
}

TEST_CASE("generated programs typecheck by construction") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    Program p = generate_program(seed, 40);
    CHECK_NOTHROW(check_program(p));
  }
}

TEST_CASE("generated programs run to completion") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    CheckedProgram c = check_program(generate_program(seed, 40));
    RunResult r = run(c.program);
    bool ok = r.status == RunResult::Status::Final ||
              r.status == RunResult::Status::FuelExhausted;
    CHECK_MESSAGE(ok, "seed ", seed, ": ", r.message);
    if (r.status == RunResult::Status::Final)
      CHECK(observation_matches(r.observation, c.type));
  }
}

TEST_CASE("effect weakening holds on generated expressions") {
  Generator gen(7, 1000000);
  int trials = 0;
  while (trials < 200) {
    Generator::Ctx ctx = gen.random_ctx(4);
    TypePtr target = gen.random_type(2);
    ExprPtr e = gen.typed_expr(ctx, target, 3);
    TypePtr t1 = type_expr(ctx.env, ctx.reads, e).type;

    // Enlarge the effect with every plain binding in scope.
    Effect wider = ctx.reads;
    for (const auto& b : ctx.env.bindings())
      if (!b.is_copy) wider = effect_insert(wider, EffectAtom::var(b.name));
    wf_effect(ctx.env, wider, {});
    TypePtr t2 = type_expr(ctx.env, wider, e).type;
    CHECK(type_equal(t1, t2));
    ++trials;
  }
}

TEST_CASE("substitution preserves types on generated terms") {
  Generator gen(11, 1000000);
  for (int i = 0; i < 200; ++i) {
    TypePtr t1 = gen.random_type(1);
    Generator::Ctx closed_ctx;
    ExprPtr replacement = gen.typed_expr(closed_ctx, t1, 2);

    // Gamma1, hole : copy T1, Gamma2
    Generator::Ctx pre = gen.random_ctx(2);
    Generator::Ctx ctx = pre;
    ctx.env = ctx.env.extended("hole", t1, true);
    ExprPtr e = gen.typed_expr(ctx, gen.random_type(2), 3);
    TypePtr before = type_expr(ctx.env, ctx.reads, e).type;

    ExprPtr substituted = subst_expr("hole", replacement, e);
    TypePtr after = type_expr(pre.env, pre.reads, substituted).type;
    CHECK(type_equal(before, after));
  }
}

TEST_CASE("locals never appear in a statement's type") {
  Generator gen(13, 1000000);
  for (int i = 0; i < 200; ++i) {
    Generator::Ctx ctx = gen.random_ctx(3);
    // Give the statement a popping-safe target.
    Generator::Ctx empty;
    TypePtr target = gen.random_type(2);
    StmtPtr s = gen.typed_stmt(ctx, target, 3);
    TypePtr t = type_stmt(ctx.env, ctx.reads, ctx.locals, s).type;
    CHECK(effect_disjoint(fv_type(t), ctx.locals));
  }
}

TEST_CASE("satisfaction weakening") {
  Generator gen(17, 1000000);
  for (int i = 0; i < 500; ++i) {
    // A stack typing and an effect it satisfies.
    StackTyping sigma;
    std::size_t n = gen.pick(5);
    for (std::size_t k = 0; k < n; ++k) sigma.push_back(gen.random_type(1));
    std::vector<EffectAtom> atoms;
    for (std::size_t k = 0; k < sigma.size(); ++k)
      if (gen.pick(2)) atoms.push_back(EffectAtom::loc(k, sigma[k]));
    Effect phi1(std::move(atoms));
    REQUIRE(satisfies(sigma, phi1));

    // Any subset is satisfied too.
    std::vector<EffectAtom> sub;
    for (const auto& a : phi1)
      if (gen.pick(2)) sub.push_back(a);
    CHECK(satisfies(sigma, Effect(std::move(sub))));
  }
}

TEST_CASE("dropping preserves stack typing") {
  Generator gen(19, 1000000);
  for (int i = 0; i < 200; ++i) {
    // Closed values via evaluation of closed expressions.
    std::vector<Value> stack;
    std::size_t n = gen.pick(4);
    Generator::Ctx empty;
    for (std::size_t k = 0; k < n; ++k) {
      ExprPtr e = gen.typed_expr(empty, gen.random_type(1), 2);
      stack.push_back(eval_expr(e, {}));
    }
    StackTyping sigma = type_value_stack(stack);
    std::size_t d = gen.pick(n + 1);
    StackTyping dropped_types = type_value_stack(drop(d, stack));
    StackTyping expect = drop(d, sigma);
    REQUIRE(dropped_types.size() == expect.size());
    for (std::size_t k = 0; k < expect.size(); ++k)
      CHECK(type_equal(dropped_types[k], expect[k]));
  }
}
