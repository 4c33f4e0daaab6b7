#include <set>

#include "doctest.h"

#include "funk/corpus.hpp"
#include "funk/driver.hpp"
#include "funk/machine.hpp"
#include "funk/parser.hpp"
#include "funk/regions.hpp"

using namespace funk;
namespace rg = funk::region;

namespace {

std::string corpus_path(const std::string& file) {
  return std::string(FUNK_CORPUS_DIR) + "/" + file;
}

}  // namespace

TEST_CASE("type translation") {
  rg::RegionMap r{{"x", "r1"}};
  CHECK(rg::type_equal(rg::translate_type(Type::integer(), {}),
                       rg::Type::integer()));
  CHECK(rg::type_equal(rg::translate_type(Type::int_list(), {}),
                       rg::Type::int_list()));

  TypePtr f =
      Type::func({Type::integer()}, Type::integer(), Effect::vars({"x"}));
  rg::TypePtr ft = rg::translate_type(f, r);
  REQUIRE(ft->kind() == rg::Type::Kind::Arrow);
  CHECK(ft->latent() == rg::RegionSet{"r1"});

  TypePtr poly = Type::eff_all(
      "p", Type::func({Type::integer()}, Type::integer(),
                      Effect::vars({"p"})));
  rg::TypePtr pt = rg::translate_type(poly, {});
  REQUIRE(pt->kind() == rg::Type::Kind::All);
  CHECK(pt->body()->latent() == rg::RegionSet{pt->var()});
}

TEST_CASE("effect translation is the image under the map") {
  rg::RegionMap r{{"x", "r1"}, {"y", "r1"}};
  CHECK(rg::translate_effect(Effect::vars({"x"}), r) == rg::RegionSet{"r1"});
  CHECK(rg::translate_effect(Effect(), r).empty());
  // The image collapses aliased variables.
  CHECK(rg::translate_effect(Effect::vars({"x", "y"}), r) ==
        rg::RegionSet{"r1"});
  CHECK_THROWS_AS(rg::translate_effect(Effect::vars({"z"}), r), TypeError);
}

TEST_CASE("related environments") {
  CHECK(rg::relate_env(TypeEnv(), {}).vars.empty());

  TypeEnv g1 = TypeEnv().extended("x", Type::integer(), false);
  rg::Env e1 = rg::relate_env(g1, {{"x", "r1"}});
  REQUIRE(e1.vars.count("x"));
  CHECK(rg::pretty(e1.vars.at("x")) == "int at r1");

  // Top bindings vanish from the variable environment.
  TypeEnv g2 = TypeEnv().extended("p", Type::top(), false);
  rg::Env e2 = rg::relate_env(g2, {{"p", "r9"}});
  CHECK(e2.vars.empty());
  CHECK(e2.regions.count("r9") == 1);

  // Copy bindings stay plain.
  TypeEnv g3 = TypeEnv().extended("c", Type::integer(), true);
  rg::Env e3 = rg::relate_env(g3, {});
  CHECK(rg::pretty(e3.vars.at("c")) == "int");

  // The variable-region discipline is enforced both ways.
  CHECK_THROWS_AS(rg::relate_env(g1, {}), TypeError);
  CHECK_THROWS_AS(rg::relate_env(g3, {{"c", "r1"}}), TypeError);
}

TEST_CASE("translation golden for a single initialization") {
  Compiled c = compile_source("var x = 1; return x;", "<test>");
  rg::TermPtr t = rg::translate(c.checked);
  CHECK(rg::pretty(t) == "new r1. let x$0 = 1 at r1 in x$0 ! r1");
}

TEST_CASE("copy bindings translate without dereference") {
  Compiled c = compile_source("var a = (let g = 2 in g); return a;", "<test>");
  std::string s = rg::pretty(rg::translate(c.checked));
  // The let-bound g is read bare; the var-bound a is dereferenced.
  CHECK(s.find("g$0 !") == std::string::npos);
  CHECK(s.find("a$1 ! r") != std::string::npos);
}

TEST_CASE("effect application translates to region application") {
  Compiled c = compile_file(corpus_path("effectpoly_ok.fk"));
  std::string s = rg::pretty(rg::translate(c.checked));
  CHECK(s.find("[") != std::string::npos);  // some region application
  CHECK(s.find("@") != std::string::npos);  // some region abstraction
}

TEST_CASE("region checker accepts the located let and rejects escape") {
  // new r. let x = 1 at r in x ! r  :  int
  rg::TermPtr ok = rg::make_term(rg::NewTerm{
      "r",
      rg::let_in("x", rg::Type::at_region(rg::Type::integer(), "r"), {"r"},
                 rg::make_term(rg::AtTerm{rg::make_term(rg::NumTerm{1}), "r"}),
                 rg::make_term(rg::DerefTerm{rg::make_term(rg::VarTerm{"x"}),
                                             "r"}))});
  CHECK(rg::type_equal(rg::typecheck({}, {}, ok), rg::Type::integer()));

  // new r. (1 at r) lets the located value escape.
  rg::TermPtr bad = rg::make_term(rg::NewTerm{
      "r", rg::make_term(rg::AtTerm{rg::make_term(rg::NumTerm{1}), "r"})});
  CHECK_THROWS_AS(rg::typecheck({}, {}, bad), TypeError);

  // Allocation outside the permitted effect is rejected.
  rg::Env scoped;
  scoped.regions.insert("r");
  CHECK_THROWS_AS(
      rg::typecheck(scoped, {},
                    rg::make_term(rg::AtTerm{rg::make_term(rg::NumTerm{1}),
                                             "r"})),
      TypeError);
}

TEST_CASE("translated programs typecheck at the translated type") {
  for (const char* file :
       {"fig3_twice.fk", "effectpoly_ok.fk", "renaming.fk", "lists.fk",
        "nested_effabs.fk", "absobs.fk", "tailcall_lists.fk"}) {
    Compiled c = compile_file(corpus_path(file));
    rg::TermPtr t = rg::translate(c.checked);
    rg::TypePtr got = rg::typecheck({}, {}, t);
    rg::TypePtr want = rg::translate_type(c.checked.type, {});
    CHECK_MESSAGE(rg::type_equal(got, want), file);
  }
}

TEST_CASE("region evaluation agrees with the direct machine") {
  for (const char* file : {"fig3_twice.fk", "renaming.fk", "effectpoly_ok.fk",
                           "lists.fk", "upward_ok_closed.fk"}) {
    Compiled c = compile_file(corpus_path(file));
    RunResult direct = run(c.checked.program);
    rg::RunResult reg = rg::run(rg::translate(c.checked));
    REQUIRE(direct.status == RunResult::Status::Final);
    REQUIRE_MESSAGE(reg.status == rg::RunResult::Status::Final, file);
    CHECK_FALSE(reg.opaque_location);
    CHECK_MESSAGE(direct.observation == reg.observation, file);
  }
}

TEST_CASE("dangling access traps") {
  // new r. let x = 1 at r in \u. x ! r escapes its region through a
  // closure; applying the closure afterwards is a dangling access.
  rg::TermPtr lam = rg::make_term(rg::LamTerm{
      {{"u", rg::Type::integer()}},
      {"r"},
      rg::make_term(rg::DerefTerm{rg::make_term(rg::VarTerm{"x"}), "r"})});
  rg::TermPtr escaped = rg::make_term(rg::NewTerm{
      "r",
      rg::let_in("x", rg::Type::at_region(rg::Type::integer(), "r"), {"r"},
                 rg::make_term(rg::AtTerm{rg::make_term(rg::NumTerm{1}), "r"}),
                 lam)});
  rg::TermPtr call = rg::make_term(
      rg::AppTerm{escaped, {rg::make_term(rg::NumTerm{0})}});
  rg::RunResult r = rg::run(call);
  CHECK(r.status == rg::RunResult::Status::TrapDangling);
}

TEST_CASE("translation uses each region binder once") {
  for (const char* file :
       {"fig3_twice.fk", "effectpoly_ok.fk", "tailcall_lists.fk"}) {
    Compiled c = compile_file(corpus_path(file));
    std::vector<std::string> binders =
        rg::region_binders(rg::translate(c.checked));
    std::set<std::string> unique(binders.begin(), binders.end());
    CHECK_MESSAGE(unique.size() == binders.size(), file);
  }
}

TEST_CASE("regions lose the tail-call space guarantee") {
  auto direct_cells = [&](int n) {
    Compiled c = compile_source(tailcall_lists_source(n), "<gen>");
    RunResult r = run(c.checked.program, RunOptions{10000000});
    REQUIRE(r.status == RunResult::Status::Final);
    return r.stats.max_retained_cells;
  };
  auto region_cells = [&](int n) {
    Compiled c = compile_source(tailcall_lists_source(n), "<gen>");
    rg::RunResult r = rg::run(rg::translate(c.checked), 10000000);
    REQUIRE(r.status == rg::RunResult::Status::Final);
    return r.stats.peak_live_list_cells;
  };
  // Quadrupling n roughly quadruples the direct peak but grows the region
  // store superlinearly; a directional check, not an exact bound.
  double direct_ratio = double(direct_cells(32)) / double(direct_cells(8));
  double region_ratio = double(region_cells(32)) / double(region_cells(8));
  CHECK(region_ratio > 2.0 * direct_ratio);
}
