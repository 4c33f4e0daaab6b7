#include "doctest.h"

#include "funk/ast.hpp"
#include "funk/parser.hpp"
#include "funk/pretty.hpp"
#include "funk/subst.hpp"

using namespace funk;

namespace {

// Small type generator with free effect variables drawn from a fixed pool;
// the core generator only produces closed types, and the fv/substitution
// property needs free variables to substitute.
TypePtr rand_type(std::uint64_t& state, int depth) {
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  };
  const char* pool[] = {"x", "y", "z"};
  if (depth <= 0) return next() % 2 ? Type::integer() : Type::int_list();
  switch (next() % 5) {
    case 0:
      return Type::integer();
    case 1:
      return Type::int_list();
    case 2: {
      std::vector<EffectAtom> atoms;
      for (int i = 0; i < 2; ++i)
        if (next() % 2) atoms.push_back(EffectAtom::var(pool[next() % 3]));
      if (next() % 3 == 0)
        atoms.push_back(EffectAtom::loc(next() % 4, Type::integer()));
      return Type::func({rand_type(state, depth - 1)},
                        rand_type(state, depth - 1),
                        Effect(std::move(atoms)));
    }
    case 3:
      return Type::eff_all(pool[next() % 3], rand_type(state, depth - 1));
    default:
      return Type::func({}, rand_type(state, depth - 1), Effect());
  }
}

Effect rand_effect(std::uint64_t& state) {
  auto next = [&] {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return state >> 33;
  };
  const char* pool[] = {"x", "y", "z", "w"};
  std::vector<EffectAtom> atoms;
  std::size_t n = next() % 4;
  for (std::size_t i = 0; i < n; ++i)
    atoms.push_back(EffectAtom::var(pool[next() % 4]));
  if (next() % 2)
    atoms.push_back(EffectAtom::loc(next() % 3, Type::integer()));
  return Effect(std::move(atoms));
}

}  // namespace

TEST_CASE("free atoms of types") {
  CHECK(fv_type(Type::integer()).empty());
  CHECK(fv_type(Type::top()).empty());
  CHECK(fv_type(Type::int_list()).empty());

  TypePtr f =
      Type::func({Type::integer()}, Type::integer(), Effect::vars({"x"}));
  CHECK(fv_type(f) == Effect::vars({"x"}));

  CHECK(fv_type(Type::eff_all("x", f)).empty());

  // Free atoms of parameter and return positions count too.
  TypePtr nested = Type::func({f}, Type::integer(), Effect::vars({"y"}));
  CHECK(fv_type(nested) == Effect::vars({"x", "y"}));
}

TEST_CASE("effect set operations") {
  Effect xy = Effect::vars({"x", "y"});
  Effect x = Effect::vars({"x"});
  Effect y = Effect::vars({"y"});
  CHECK(effect_subset(x, xy));
  CHECK_FALSE(effect_subset(xy, x));
  CHECK(effect_minus(xy, y) == x);
  CHECK_FALSE(effect_disjoint(x, x));
  CHECK(effect_disjoint(x, y));
  CHECK(effect_union(x, y) == xy);
}

TEST_CASE("effect equality ignores construction order") {
  std::uint64_t s1 = 7, s2 = 7;
  for (int i = 0; i < 200; ++i) {
    Effect a = rand_effect(s1);
    Effect b = rand_effect(s1);
    CHECK(effect_union(a, b) == effect_union(b, a));
  }
  (void)s2;
  // Explicit order-insensitivity.
  Effect ab({EffectAtom::var("a"), EffectAtom::var("b")});
  Effect ba({EffectAtom::var("b"), EffectAtom::var("a")});
  CHECK(ab == ba);
}

TEST_CASE("substitution of closed expressions") {
  // x := 3 in x + 1
  ExprPtr target = parse("return x + 1;").body->as<ReturnStmt>().value;
  ExprPtr three = make_expr(NumExpr{3});
  ExprPtr out = subst_expr("x", three, target);
  CHECK(pretty(out) == "3 + 1");

  // Shadowing: an inner binder of the same name is left alone.
  Program p = parse("return fun(x: int)[]{ return x; };");
  ExprPtr fn = p.body->as<ReturnStmt>().value;
  ExprPtr unchanged = subst_expr("x", three, fn);
  CHECK(expr_equal(unchanged, fn));
}

TEST_CASE("substitution of stack locations") {
  EffectAtom loc0 = EffectAtom::loc(0, Type::integer());

  Effect eff = Effect::vars({"x", "y"});
  Effect out = subst_atom("x", loc0, eff);
  CHECK(out.contains(loc0));
  CHECK(out.contains(EffectAtom::var("y")));
  CHECK_FALSE(out.contains(EffectAtom::var("x")));

  // Effects live inside types, so substitution descends into them.
  TypePtr f =
      Type::func({Type::integer()}, Type::integer(), Effect::vars({"x"}));
  EffectAtom loc2 = EffectAtom::loc(2, Type::integer());
  TypePtr fs = subst_atom("x", loc2, f);
  CHECK(fs->effect().contains(loc2));

  // Substitution of a non-free variable is the identity.
  CHECK(type_equal(subst_atom("x", loc0, Type::integer()), Type::integer()));
  TypePtr shadowed = Type::eff_all("x", f);
  CHECK(type_equal(subst_atom("x", loc0, shadowed), shadowed));
}

TEST_CASE("substitution commutes with free atoms") {
  std::uint64_t state = 42;
  EffectAtom loc = EffectAtom::loc(1, Type::integer());
  Effect xonly = Effect::vars({"x"});
  for (int i = 0; i < 500; ++i) {
    TypePtr t = rand_type(state, 3);
    Effect before = fv_type(t);
    Effect after = fv_type(subst_atom("x", loc, t));
    Effect expected = effect_minus(before, xonly);
    if (before.contains(EffectAtom::var("x")))
      expected = effect_insert(expected, loc);
    CHECK(after == expected);
  }
}

TEST_CASE("canonical rendering") {
  TypePtr f =
      Type::func({Type::integer()}, Type::integer(), Effect::vars({"x"}));
  CHECK(pretty(f) == "func(int,int,[x])");

  CHECK(pretty(Effect::vars({"y", "x"})) == "[x,y]");
  CHECK(pretty(EffectAtom::loc(3, Type::integer())) == "#3:int");
  CHECK(pretty(Type::eff_all("p", f)) == "<p> func(int,int,[x])");
  CHECK(pretty(Type::func({}, Type::integer(), Effect::vars({"s"}))) ==
        "func(int,[s])");
  CHECK(pretty(Type::int_list()) == "int list");
}

TEST_CASE("type equality renames quantifiers consistently") {
  TypePtr a = Type::eff_all(
      "p", Type::func({Type::integer()}, Type::integer(),
                      Effect::vars({"p"})));
  TypePtr b = Type::eff_all(
      "q", Type::func({Type::integer()}, Type::integer(),
                      Effect::vars({"q"})));
  TypePtr c = Type::eff_all(
      "q", Type::func({Type::integer()}, Type::integer(),
                      Effect::vars({"x"})));
  CHECK(type_equal(a, b));
  CHECK_FALSE(type_equal(a, c));
}

TEST_CASE("free term variables") {
  Program p = parse("return (let a = b in a + c);");
  ExprPtr e = p.body->as<ReturnStmt>().value;
  std::vector<std::string> fv = free_vars(e);
  CHECK(fv == std::vector<std::string>{"b", "c"});

  // Captures read the outer name and bind it inside.
  Program q = parse("return fun(v: int; k)[w]{ return k + v; };");
  std::vector<std::string> fv2 = free_vars(q.body->as<ReturnStmt>().value);
  CHECK(fv2 == std::vector<std::string>{"k"});
}

TEST_CASE("locations occurring in a statement") {
  Program p = parse("var a = 1; return a;");
  CHECK(locations_in(p.body).empty());

  StmtPtr with_loc = make_stmt(ReturnStmt{
      make_expr(LocExpr{2, Type::integer()})});
  Effect locs = locations_in(with_loc);
  CHECK(locs.contains(EffectAtom::loc(2, Type::integer())));
}
