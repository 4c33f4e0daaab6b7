#include <regex>

#include "doctest.h"

#include "funk/driver.hpp"
#include "funk/errors.hpp"
#include "funk/frontend.hpp"
#include "funk/parser.hpp"
#include "funk/pretty.hpp"

using namespace funk;

namespace {

std::string corpus_path(const std::string& file) {
  return std::string(FUNK_CORPUS_DIR) + "/" + file;
}

std::string strip_suffixes(const std::string& s) {
  static const std::regex suffix("\\$[0-9]+");
  return std::regex_replace(s, suffix, "");
}

}  // namespace

TEST_CASE("trivial program parses") {
  Program p = parse("return 0;");
  REQUIRE(p.body->kind() == Stmt::Kind::Return);
  const auto& r = p.body->as<ReturnStmt>();
  REQUIRE(r.value->kind() == Expr::Kind::Num);
  CHECK(r.value->as<NumExpr>().value == 0);
}

TEST_CASE("the worked higher-order example parses to a binding chain") {
  Program p = parse(read_file(corpus_path("fig3_twice.fk")));
  const auto* x = p.body->get_if<VarInitStmt>();
  REQUIRE(x);
  CHECK(x->var == "x");
  const auto* addx = x->rest->get_if<VarInitStmt>();
  REQUIRE(addx);
  CHECK(addx->var == "addx");
  REQUIRE(addx->rhs->kind() == Expr::Kind::Fun);
  const auto* twice = addx->rest->get_if<VarInitStmt>();
  REQUIRE(twice);
  const auto& tw = twice->rhs->as<FunExpr>();
  CHECK(tw.params.size() == 2);
  CHECK(tw.effect == Effect::vars({"x"}));
  const auto* b = twice->rest->get_if<LetCallStmt>();
  REQUIRE(b);
  CHECK(b->args.size() == 2);
  CHECK(b->rest->kind() == Stmt::Kind::Return);
}

TEST_CASE("curried effect annotations parse") {
  Program p = parse(read_file(corpus_path("curried_twice_bad.fk")));
  const auto* twice = p.body->as<VarInitStmt>().rest->get_if<VarInitStmt>();
  REQUIRE(twice);
  const auto& outer = twice->rhs->as<FunExpr>();
  const auto& inner =
      outer.body->as<ReturnStmt>().value->as<FunExpr>();
  CHECK(inner.effect == Effect::vars({"f", "x"}));
}

TEST_CASE("syntax errors carry positions") {
  CHECK_THROWS_AS(parse("var x = ;"), ParseError);
  CHECK_THROWS_AS(parse("return 0"), ParseError);
  // A binding chain must end in a return.
  CHECK_THROWS_AS(parse("var x = 1;"), ParseError);
  // Reserved words cannot be bound.
  CHECK_THROWS_AS(parse("var fun = 1; return 0;"), ParseError);
}

TEST_CASE("named definitions expand to var/fix") {
  Program got = desugar(
      parse("proc incr(x: int): int { return x + 1; } return 0;"));
  Program want = parse(
      "var incr = (fix incr: func(int,int,[]). fun(x: int)[]{ return x + 1; "
      "}); return 0;");
  CHECK(program_equal(got, want));
}

TEST_CASE("capture lists expand to let copies") {
  Program got =
      desugar(parse("return fun(y: int; f)[x]{ return y; };"));
  Program want =
      parse("return (let f = f in fun(y: int)[x]{ return y; });");
  CHECK(program_equal(got, want));
}

TEST_CASE("captures and binders expand together") {
  Program got = desugar(parse(
      "proc g(; f, n): int [s]{ return 0; } return 0;"));
  Program want = parse(
      "var g = (let f = f in let n = n in fix g: func(int,[s]). "
      "fun()[s]{ return 0; }); return 0;");
  CHECK(program_equal(got, want));
}

TEST_CASE("effect binders expand right-nested") {
  Program got = desugar(
      parse("proc <p,q> tw(f: func(int,int,[p,q])): int [p,q]{ return 0; } "
            "return 0;"));
  Program want = parse(
      "var tw = (fix tw: <p> <q> func(func(int,int,[p,q]),int,[p,q]). "
      "<p> <q> fun(f: func(int,int,[p,q]))[p,q]{ return 0; }); return 0;");
  CHECK(program_equal(got, want));
}

TEST_CASE("uniquify separates the two x bindings") {
  UniquifyResult u = uniquify(desugar(parse(
      "var x = 1; var f = fun(x: int)[x]{ return x; }; return 1;")));
  const auto& global = u.program.body->as<VarInitStmt>();
  const auto& fdef = global.rest->as<VarInitStmt>();
  const auto& fn = fdef.rhs->as<FunExpr>();
  // The declared effect names the global; the body reads the parameter.
  REQUIRE(fn.effect.size() == 1);
  CHECK(fn.effect.atoms()[0].name == global.var);
  const auto& body_var =
      fn.body->as<ReturnStmt>().value->as<VarExpr>();
  CHECK(body_var.name == fn.params[0].name);
  CHECK(fn.params[0].name != global.var);
  // Original names are recorded.
  CHECK(u.name_table.at(global.var).original == "x");
  CHECK(u.name_table.at(fn.params[0].name).original == "x");
}

TEST_CASE("uniquify reports unbound variables") {
  try {
    uniquify(desugar(parse("return y;")));
    FAIL("expected an unbound-variable error");
  } catch (const TypeError& e) {
    CHECK(e.kind == ErrorKind::UnboundVar);
    CHECK(std::string(e.what()).find("'y'") != std::string::npos);
  }
}

TEST_CASE("uniquify is idempotent up to suffixes") {
  for (const char* file :
       {"fig3_twice.fk", "tailcall_lists.fk", "effectpoly_ok.fk"}) {
    Program once = uniquify(desugar(parse(read_file(corpus_path(file))))).program;
    Program twice = uniquify(once).program;
    CHECK(strip_suffixes(pretty(once)) == strip_suffixes(pretty(twice)));
  }
}

TEST_CASE("parse of pretty is the identity") {
  for (const char* file :
       {"fig3_twice.fk", "fig1_compose.fk", "curried_twice_let.fk",
        "curried_twice_capture.fk", "effectpoly_ok.fk", "effectpoly_bad.fk",
        "renaming.fk", "tailcall_lists.fk", "zero_arg.fk", "lists.fk",
        "nested_effabs.fk", "absobs.fk", "if_nested.fk", "mixed_effects.fk"}) {
    Program surface = parse(read_file(corpus_path(file)));
    CHECK_MESSAGE(program_equal(parse(pretty(surface)), surface), file);

    Program unique = uniquify(desugar(surface)).program;
    CHECK_MESSAGE(program_equal(parse(pretty(unique)), unique), file);
  }
}

TEST_CASE("parse of pretty holds for elaborated programs") {
  for (const char* file : {"fig3_twice.fk", "tailcall_lists.fk",
                           "effectpoly_ok.fk", "upward_ok_closed.fk"}) {
    Compiled c = compile_file(corpus_path(file));
    Program round = parse(pretty(c.checked.program));
    CHECK_MESSAGE(program_equal(round, c.checked.program), file);
  }
}

TEST_CASE("call bindings reject type ascriptions") {
  CHECK_THROWS_AS(parse("var a: int = f(1); return a;"), ParseError);
}

TEST_CASE("multi-argument effect application expands left-nested") {
  Program got = parse("return h<x,y>;");
  Program want = parse("return h<x><y>;");
  CHECK(program_equal(got, want));
  const auto& outer =
      got.body->as<ReturnStmt>().value->as<EffAppExpr>();
  CHECK(outer.arg.name == "y");
  CHECK(outer.fn->as<EffAppExpr>().arg.name == "x");
}

TEST_CASE("multi-binder effect abstraction expands right-nested") {
  Program got = parse("return <p,q> fun(v: int)[p,q]{ return v; };");
  Program want = parse("return <p> <q> fun(v: int)[p,q]{ return v; };");
  CHECK(program_equal(got, want));
}

TEST_CASE("comments are skipped") {
  Program p = parse(
      "// leading comment\n"
      "var a = 1; /* inline */ return a; // trailing\n");
  CHECK(p.body->kind() == Stmt::Kind::VarInit);
  CHECK_THROWS_AS(parse("return 0; /* unterminated"), ParseError);
}

TEST_CASE("effect abstraction bodies must be abstractions") {
  CHECK_THROWS_AS(parse("return <p> 3;"), ParseError);
  CHECK_THROWS_AS(parse("return (fix f: int. 3);"), ParseError);
}
