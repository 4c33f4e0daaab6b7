#include "doctest.h"

#include "funk/driver.hpp"
#include "funk/machine.hpp"
#include "funk/oracle.hpp"
#include "funk/parser.hpp"
#include "funk/pretty.hpp"
#include "funk/typecheck.hpp"

using namespace funk;

namespace {

std::string corpus_path(const std::string& file) {
  return std::string(FUNK_CORPUS_DIR) + "/" + file;
}

ExprPtr parse_expr(const std::string& src) {
  return parse("return " + src + ";").body->as<ReturnStmt>().value;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const TypeError& e) {
    return e.kind;
  }
  FAIL("expected a type error");
  return ErrorKind::Mismatch;
}

}  // namespace

TEST_CASE("well-formed effects") {
  TypeEnv env = TypeEnv().extended("x", Type::integer(), false);
  CHECK_NOTHROW(wf_effect(env, Effect::vars({"x"}), {}));
  CHECK(kind_of([&] { wf_effect(TypeEnv(), Effect::vars({"x"}), {}); }) ==
        ErrorKind::MalformedEffect);

  // Effect parameters are bound at top and are fine in effects.
  TypeEnv penv = TypeEnv().extended("p", Type::top(), false);
  CHECK_NOTHROW(wf_effect(penv, Effect::vars({"p"}), {}));

  // Copy-bound names are not effects.
  TypeEnv cenv = TypeEnv().extended("c", Type::integer(), true);
  CHECK(kind_of([&] { wf_effect(cenv, Effect::vars({"c"}), {}); }) ==
        ErrorKind::MalformedEffect);

  // Locations pass; they are checked against stack typings instead.
  CHECK_NOTHROW(wf_effect(
      TypeEnv(), Effect::single(EffectAtom::loc(0, Type::integer())), {}));
}

TEST_CASE("well-formed types") {
  CHECK_NOTHROW(wf_type(TypeEnv(), Type::integer(), {}));
  TypePtr f =
      Type::func({Type::integer()}, Type::integer(), Effect::vars({"x"}));
  TypeEnv env = TypeEnv().extended("x", Type::integer(), false);
  CHECK_NOTHROW(wf_type(env, f, {}));
  CHECK(kind_of([&] { wf_type(TypeEnv(), f, {}); }) ==
        ErrorKind::MalformedEffect);
  CHECK_NOTHROW(wf_type(
      TypeEnv(),
      Type::eff_all("p", Type::func({Type::integer()}, Type::integer(),
                                    Effect::vars({"p"}))),
      {}));
}

TEST_CASE("operator signatures") {
  CHECK(type_equal(typeof_op("+").ret, Type::integer()));
  CHECK(typeof_op("+").params.size() == 2);
  CHECK(type_equal(typeof_op("iszero").ret, Type::integer()));
  CHECK(type_equal(typeof_op("cons").params[1], Type::int_list()));
  CHECK(type_equal(typeof_op("cons").ret, Type::int_list()));
  CHECK_THROWS_AS(typeof_op("frobnicate"), TypeError);
}

TEST_CASE("expression typing follows the rules") {
  TypeEnv env = TypeEnv().extended("x", Type::integer(), false);

  // A function reading x through its declared effect.
  ExprPtr fn = parse_expr("fun(z: int)[x]{ return x + z; }");
  ExprTyping t = type_expr(env, Effect::vars({"x"}), fn);
  CHECK(pretty(t.type) == "func(int,int,[x])");
  // Elaboration records the synthesized return type.
  CHECK(type_equal(t.elaborated->as<FunExpr>().ret, Type::integer()));

  // Reading a stack variable outside the effect fails.
  CHECK(kind_of([&] { type_expr(env, Effect(), parse_expr("x")); }) ==
        ErrorKind::NotInEffect);

  // let-bound variables need no effect.
  ExprPtr let_read = parse_expr("(let c = 1 in c)");
  CHECK(type_equal(type_expr(env, Effect(), let_read).type, Type::integer()));
}

TEST_CASE("effect application instantiates the bound variable") {
  TypePtr poly = parse_type("<p> func(func(int,int,[p]),int,int,[p])");
  TypeEnv env = TypeEnv()
                    .extended("x", Type::integer(), false)
                    .extended("twice", poly, false);
  ExprTyping t =
      type_expr(env, Effect::vars({"twice", "x"}), parse_expr("twice<x>"));
  CHECK(type_equal(t.type, parse_type("func(func(int,int,[x]),int,int,[x])")));
}

TEST_CASE("statement typing enforces the frame discipline") {
  // The curried upward funarg is rejected at the inner return.
  CHECK(kind_of([&] {
          compile_file(corpus_path("curried_twice_bad.fk"));
        }) == ErrorKind::UpwardFunarg);

  // The let-copy variant is accepted and the returned function has the
  // type the discussion gives: func(int,int,[x]) with x the global.
  Compiled ok = compile_file(corpus_path("curried_twice_let.fk"));
  const auto& xdef = ok.checked.program.body->as<VarInitStmt>();
  const auto& twice_def = xdef.rest->as<VarInitStmt>();
  TypePtr twice_ty = twice_def.annot;
  REQUIRE(twice_ty->kind() == Type::Kind::Func);
  TypePtr inner = twice_ty->ret();
  REQUIRE(inner->kind() == Type::Kind::Func);
  CHECK(inner->effect() == Effect::vars({xdef.var}));
  CHECK(type_equal(inner->ret(), Type::integer()));

  // Calling the monomorphic twice with the wrong effect is an effect error.
  CHECK(kind_of([&] { compile_file(corpus_path("effectpoly_bad.fk")); }) ==
        ErrorKind::EffectViolation);

  // A tail call whose callee reads a doomed local is rejected.
  CHECK(kind_of([&] { compile_file(corpus_path("reject_overlap.fk")); }) ==
        ErrorKind::TailCallOverlap);
}

TEST_CASE("if branches must agree") {
  CHECK(kind_of([&] {
          check_program(
              uniquify(desugar(parse(
                           "var c = 1; if (c) { return 1; } else { return "
                           "nil; }")))
                  .program);
        }) == ErrorKind::Mismatch);
}

TEST_CASE("stack typings satisfy effects by annotation") {
  StackTyping sigma{Type::integer()};
  CHECK(satisfies(sigma, Effect::single(EffectAtom::loc(0, Type::integer()))));
  CHECK_FALSE(satisfies(
      sigma, Effect::single(EffectAtom::loc(
                 0, Type::func({Type::integer()}, Type::integer(),
                               Effect())))));
  StackTyping two{Type::integer(), Type::integer()};
  CHECK(satisfies(two, Effect::single(EffectAtom::loc(1, Type::integer()))));
  // Out of range and variable atoms are unsatisfiable.
  CHECK_FALSE(
      satisfies(sigma, Effect::single(EffectAtom::loc(2, Type::integer()))));
  CHECK_FALSE(satisfies(sigma, Effect::vars({"x"})));
}

TEST_CASE("value stacks type pointwise") {
  CHECK(type_value_stack({}).empty());

  std::vector<ExprPtr> one{make_expr(NumExpr{7})};
  StackTyping st = type_value_stack(one);
  REQUIRE(st.size() == 1);
  CHECK(type_equal(st[0], Type::integer()));

  // A function value whose effect and body mention a location.
  EffectAtom loc0 = EffectAtom::loc(0, Type::integer());
  StmtPtr body = make_stmt(ReturnStmt{make_expr(LocExpr{0, Type::integer()})});
  ExprPtr fn = make_expr(FunExpr{{Param{"y", Type::integer()}},
                                 {},
                                 Effect::single(loc0),
                                 Type::integer(),
                                 body});
  std::vector<ExprPtr> two{fn, make_expr(NumExpr{1})};
  StackTyping st2 = type_value_stack(two);
  REQUIRE(st2.size() == 2);
  CHECK(pretty(st2[0]) == "func(int,int,[#0:int])");
  CHECK(type_equal(st2[1], Type::integer()));
}

TEST_CASE("state typing accepts reachable states and rejects corruption") {
  Compiled c = compile_file(corpus_path("fig3_twice.fk"));
  State st = initial_state(c.checked.program);
  CHECK(type_equal(type_state(st), c.checked.type));

  // March a few steps; every intermediate state types at the program type.
  Fuel fuel(100000);
  for (int i = 0; i < 6; ++i) {
    StepOutcome out = step(st, fuel);
    REQUIRE_FALSE(out.final);
    st = out.next;
    CHECK(type_equal(type_state(st), c.checked.type));
  }

  // Corrupt a stack slot with a value of the wrong type.
  REQUIRE_FALSE(st.values.empty());
  State bad = st;
  bad.values[0] = make_expr(ListExpr{{1, 2}});
  CHECK_THROWS_AS(type_state(bad), TypeError);
}

TEST_CASE("observation typing") {
  CHECK(observation_matches(Observation::number(5), Type::integer()));
  TypePtr f = Type::func({Type::integer()}, Type::integer(), Effect());
  CHECK(observation_matches(Observation::fun(), f));
  CHECK_FALSE(observation_matches(Observation::fun(), Type::integer()));
  CHECK(observation_matches(Observation::abs(), Type::eff_all("p", f)));
  CHECK(observation_matches(Observation::of_list({1}), Type::int_list()));
}

TEST_CASE("return ascriptions are checked against the synthesized type") {
  CHECK(kind_of([&] {
          type_expr(TypeEnv(), Effect(),
                    parse_expr("fun(v: int): int []{ return nil; }"));
        }) == ErrorKind::Mismatch);
  // Matching ascriptions pass and are kept.
  ExprTyping t = type_expr(TypeEnv(), Effect(),
                           parse_expr("fun(v: int): int []{ return v; }"));
  CHECK(pretty(t.type) == "func(int,int,[])");
}

TEST_CASE("calling an uninstantiated effect abstraction is a mismatch") {
  TypePtr poly = parse_type("<p> func(int,int,[p])");
  TypeEnv env = TypeEnv().extended("g", poly, true);
  CHECK(kind_of([&] {
          type_stmt(env, Effect(), Effect(),
                    parse("var a = g(1); return a;").body);
        }) == ErrorKind::Mismatch);
}

TEST_CASE("fix annotations must match the body exactly") {
  CHECK(kind_of([&] {
          type_expr(TypeEnv(), Effect(),
                    parse_expr("(fix f: func(int,int,[]). fun(v: int, w: "
                               "int)[]{ return v; })"));
        }) == ErrorKind::Mismatch);
}

TEST_CASE("effect arguments must be stack-bound") {
  TypePtr poly = parse_type("<p> func(int,int,[p])");
  TypeEnv env = TypeEnv()
                    .extended("g", poly, true)
                    .extended("c", Type::integer(), true);
  CHECK(kind_of([&] {
          type_expr(env, Effect(), parse_expr("g<c>"));
        }) == ErrorKind::MalformedEffect);
}
