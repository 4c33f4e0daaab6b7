// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <vector>

#include "funk/corpus.hpp"
#include "funk/diff.hpp"
#include "funk/driver.hpp"
#include "funk/erasure.hpp"
#include "funk/generate.hpp"
#include "funk/machine.hpp"
#include "funk/oracle.hpp"
#include "funk/parser.hpp"
#include "funk/pretty.hpp"
#include "funk/regions.hpp"
#include "funk/subst.hpp"

using namespace funk;
namespace rg = funk::region;

namespace {

int failures = 0;

void verdict(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "PASS" : "FAIL") << " - " << name;
  if (!ok && !detail.empty()) std::cout << ": " << detail;
  std::cout << "\n";
  if (!ok) ++failures;
}

std::string corpus_path(const std::string& file) {
  return std::string(FUNK_CORPUS_DIR) + "/" + file;
}

// --- Criterion 1: corpus verdicts match the annotations exactly. ---------
void corpus_verdicts() {
  std::ostringstream bad;
  for (const CorpusEntry& entry : corpus()) {
    try {
      Compiled c = compile_file(corpus_path(entry.file));
      if (!entry.accept) {
        bad << entry.name << " accepted but should reject; ";
        continue;
      }
      if (!type_equal(c.checked.type, parse_type(entry.type))) {
        bad << entry.name << " types at " << pretty(c.checked.type)
            << ", expected " << entry.type << "; ";
        continue;
      }
      RunResult r = run(c.checked.program);
      if (r.status != RunResult::Status::Final ||
          !(r.observation == entry.observation))
        bad << entry.name << " observes "
            << (r.status == RunResult::Status::Final
                    ? to_string(r.observation)
                    : r.message)
            << ", expected " << to_string(entry.observation) << "; ";
    } catch (const TypeError& e) {
      if (entry.accept)
        bad << entry.name << " rejected (" << to_string(e.kind) << ": "
            << e.what() << ") but should accept; ";
      else if (entry.reject_kind && e.kind != *entry.reject_kind)
        bad << entry.name << " rejected with " << to_string(e.kind)
            << ", expected " << to_string(*entry.reject_kind) << "; ";
    } catch (const ParseError& e) {
      bad << entry.name << " failed to parse: " << e.what() << "; ";
    }
  }
  verdict("corpus verdicts match the annotated outcomes", bad.str().empty(),
          bad.str());
}

// --- Criterion 2: well-typed programs cannot get stuck, and every -------
// --- reachable state types at the program type.                   -------
void type_safety() {
  auto begin = std::chrono::steady_clock::now();
  std::ostringstream bad;
  int ran = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    CheckedProgram c;
    try {
      c = check_program(generate_program(seed, 40));
    } catch (const TypeError& e) {
      bad << "seed " << seed << " failed to check: " << e.what() << "; ";
      continue;
    }
    RunOptions opts;
    opts.per_state = state_typing_oracle(c.type);
    try {
      RunResult r = run(c.program, opts);
      if (r.status == RunResult::Status::Stuck)
        bad << "seed " << seed << " got stuck: " << r.message << "; ";
      else if (r.status == RunResult::Status::Final &&
               !observation_matches(r.observation, c.type))
        bad << "seed " << seed << " result does not match its type; ";
      ++ran;
    } catch (const TypeError& e) {
      bad << "seed " << seed << " state-typing violation: " << e.what()
          << "; ";
    }
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - begin)
                    .count();
  std::ostringstream name;
  name << "type safety: 500 generated programs, zero stuck, per-step "
          "state typing ("
       << ran << " ran, " << secs << "s)";
  verdict(name.str(), bad.str().empty() && secs < 5.0,
          bad.str().empty() ? "exceeded the 5s budget" : bad.str());
}

// --- Criterion 3: erasure preserves observations. ------------------------
void erasure_agreement() {
  std::ostringstream bad;
  auto check_one = [&](const std::string& name, const CheckedProgram& c) {
    RunResult direct = run(c.program);
    RunResult after = erased::run(erase(c.program));
    if (direct.status != RunResult::Status::Final ||
        after.status != RunResult::Status::Final) {
      if (!(direct.status == RunResult::Status::FuelExhausted &&
            after.status == RunResult::Status::FuelExhausted))
        bad << name << " did not finish under both semantics; ";
      return;
    }
    if (!(erased_view(direct.observation) == after.observation))
      bad << name << ": " << to_string(direct.observation) << " vs "
          << to_string(after.observation) << "; ";
  };
  for (const CorpusEntry& entry : corpus()) {
    if (!entry.accept) continue;
    check_one(entry.name, compile_file(corpus_path(entry.file)).checked);
  }
  for (std::uint64_t seed = 1; seed <= 500; ++seed)
    check_one("seed " + std::to_string(seed),
              check_program(generate_program(seed, 40)));
  verdict(
      "erasure: direct and erased observations agree on corpus + 500 "
      "generated",
      bad.str().empty(), bad.str());
}

// --- Criterion 4: the region translation preserves types and semantics. --
void region_preservation() {
  std::ostringstream bad;
  auto check_one = [&](const std::string& name, const CheckedProgram& c,
                       bool run_it) {
    rg::TermPtr t;
    try {
      t = rg::translate(c);
      rg::TypePtr got = rg::typecheck({}, {}, t);
      rg::TypePtr want = rg::translate_type(c.type, {});
      if (!rg::type_equal(got, want)) {
        bad << name << " translates to type " << rg::pretty(got)
            << ", expected " << rg::pretty(want) << "; ";
        return;
      }
    } catch (const TypeError& e) {
      bad << name << " translation failed to check: " << e.what() << "; ";
      return;
    }
    if (!run_it) return;
    RunResult direct = run(c.program);
    rg::RunResult reg = rg::run(t, 10000000);
    if (reg.status == rg::RunResult::Status::TrapDangling) {
      bad << name << " trapped on a dangling access; ";
      return;
    }
    if (direct.status != RunResult::Status::Final ||
        reg.status != rg::RunResult::Status::Final) {
      if (!(direct.status == RunResult::Status::FuelExhausted &&
            reg.status == rg::RunResult::Status::FuelExhausted))
        bad << name << " did not finish under both semantics; ";
      return;
    }
    if (reg.opaque_location || !(direct.observation == reg.observation))
      bad << name << ": " << to_string(direct.observation) << " vs "
          << to_string(reg.observation) << "; ";
  };
  for (const CorpusEntry& entry : corpus()) {
    if (!entry.accept) continue;
    check_one(entry.name, compile_file(corpus_path(entry.file)).checked,
              true);
  }
  for (std::uint64_t seed = 1; seed <= 200; ++seed)
    check_one("seed " + std::to_string(seed),
              check_program(generate_program(seed, 40)), true);
  verdict(
      "regions: translated programs check at the translated type and agree "
      "on corpus + 200 generated, zero dangling traps",
      bad.str().empty(), bad.str());
}

// --- Criterion 5: tail-call space usage. ----------------------------------
void tailcall_space() {
  auto begin = std::chrono::steady_clock::now();
  std::vector<double> ns{25, 50, 100};
  std::vector<double> cells;
  std::size_t no_tc_100 = 0;
  for (double n : ns) {
    Compiled c = compile_source(tailcall_lists_source(int(n)), "<gen>");
    RunOptions opts;
    opts.fuel = 10000000;
    RunResult r = run(c.checked.program, opts);
    if (r.status != RunResult::Status::Final) {
      verdict("tail-call space", false, "workload did not finish");
      return;
    }
    cells.push_back(double(r.stats.max_retained_cells));
    if (n == 100) {
      opts.no_tailcall = true;
      RunResult q = run(c.checked.program, opts);
      no_tc_100 = q.stats.max_retained_cells;
    }
  }
  // Least-squares fit cells ~ c*n + d.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = ns.size();
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sx += ns[i];
    sy += cells[i];
    sxx += ns[i] * ns[i];
    sxy += ns[i] * cells[i];
  }
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double intercept = (sy - slope * sx) / m;
  double ss_res = 0, ss_tot = 0, mean = sy / m;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double fit = slope * ns[i] + intercept;
    ss_res += (cells[i] - fit) * (cells[i] - fit);
    ss_tot += (cells[i] - mean) * (cells[i] - mean);
  }
  double r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - begin)
                    .count();
  std::ostringstream detail;
  detail << "cells(25,50,100) = " << cells[0] << "," << cells[1] << ","
         << cells[2] << "; R^2 = " << r2 << "; no-tailcall(100) = "
         << no_tc_100 << "; " << secs << "s";
  bool ok = r2 >= 0.99 && double(no_tc_100) >= 100.0 * 100.0 / 4.0 &&
            secs < 2.0;
  std::ostringstream name;
  name << "tail-call space: retained cells linear in n (" << detail.str()
       << ")";
  verdict(name.str(), ok, "");
}

// --- Criterion 6: metatheory property suites, 1000 instances each. --------
void metatheory() {
  {  // effect weakening
    Generator gen(101, 10000000);
    std::ostringstream bad;
    for (int i = 0; i < 1000; ++i) {
      Generator::Ctx ctx = gen.random_ctx(4);
      ExprPtr e = gen.typed_expr(ctx, gen.random_type(2), 3);
      TypePtr t1 = type_expr(ctx.env, ctx.reads, e).type;
      Effect wider = ctx.reads;
      for (const auto& b : ctx.env.bindings())
        if (!b.is_copy) wider = effect_insert(wider, EffectAtom::var(b.name));
      TypePtr t2 = type_expr(ctx.env, wider, e).type;
      if (!type_equal(t1, t2)) {
        bad << "instance " << i << "; ";
        break;
      }
    }
    verdict("metatheory: effect weakening on 1000 generated expressions",
            bad.str().empty(), bad.str());
  }
  {  // satisfaction weakening
    Generator gen(103, 10000000);
    std::ostringstream bad;
    for (int i = 0; i < 1000; ++i) {
      StackTyping sigma;
      std::size_t n = gen.pick(6);
      for (std::size_t k = 0; k < n; ++k) sigma.push_back(gen.random_type(1));
      std::vector<EffectAtom> atoms;
      for (std::size_t k = 0; k < sigma.size(); ++k)
        if (gen.pick(2)) atoms.push_back(EffectAtom::loc(k, sigma[k]));
      Effect phi1(std::move(atoms));
      std::vector<EffectAtom> sub;
      for (const auto& a : phi1)
        if (gen.pick(2)) sub.push_back(a);
      if (!satisfies(sigma, phi1) || !satisfies(sigma, Effect(sub))) {
        bad << "instance " << i << "; ";
        break;
      }
    }
    verdict("metatheory: satisfaction weakening on 1000 stack typings",
            bad.str().empty(), bad.str());
  }
  {  // substitution preserves types
    Generator gen(107, 10000000);
    std::ostringstream bad;
    for (int i = 0; i < 1000; ++i) {
      TypePtr t1 = gen.random_type(1);
      Generator::Ctx closed;
      ExprPtr replacement = gen.typed_expr(closed, t1, 2);
      Generator::Ctx pre = gen.random_ctx(2);
      Generator::Ctx ctx = pre;
      ctx.env = ctx.env.extended("hole", t1, true);
      ExprPtr e = gen.typed_expr(ctx, gen.random_type(2), 3);
      TypePtr before = type_expr(ctx.env, ctx.reads, e).type;
      TypePtr after =
          type_expr(pre.env, pre.reads, subst_expr("hole", replacement, e))
              .type;
      if (!type_equal(before, after)) {
        bad << "instance " << i << "; ";
        break;
      }
    }
    verdict(
        "metatheory: substitution preserves types on 1000 generated terms",
        bad.str().empty(), bad.str());
  }
  {  // locals not in return type
    Generator gen(109, 10000000);
    std::ostringstream bad;
    for (int i = 0; i < 1000; ++i) {
      Generator::Ctx ctx = gen.random_ctx(3);
      StmtPtr s = gen.typed_stmt(ctx, gen.random_type(2), 3);
      TypePtr t = type_stmt(ctx.env, ctx.reads, ctx.locals, s).type;
      if (!effect_disjoint(fv_type(t), ctx.locals)) {
        bad << "instance " << i << "; ";
        break;
      }
    }
    verdict("metatheory: locals never escape into statement types (1000)",
            bad.str().empty(), bad.str());
  }
  {  // drop stack
    Generator gen(113, 10000000);
    std::ostringstream bad;
    for (int i = 0; i < 1000; ++i) {
      std::vector<Value> stack;
      std::size_t n = gen.pick(5);
      Generator::Ctx closed;
      for (std::size_t k = 0; k < n; ++k)
        stack.push_back(
            eval_expr(gen.typed_expr(closed, gen.random_type(1), 2), {}));
      StackTyping sigma = type_value_stack(stack);
      std::size_t d = gen.pick(n + 1);
      StackTyping got = type_value_stack(drop(d, stack));
      StackTyping want = drop(d, sigma);
      bool same = got.size() == want.size();
      for (std::size_t k = 0; same && k < got.size(); ++k)
        same = type_equal(got[k], want[k]);
      if (!same) {
        bad << "instance " << i << "; ";
        break;
      }
    }
    verdict("metatheory: dropping preserves stack typings (1000)",
            bad.str().empty(), bad.str());
  }
}

}  // namespace

int main() {
  corpus_verdicts();
  type_safety();
  erasure_agreement();
  region_preservation();
  tailcall_space();
  metatheory();
  std::cout << (failures == 0 ? "all criteria passed\n"
                              : std::to_string(failures) +
                                    " criterion(s) failed\n");
  return failures == 0 ? 0 : 1;
}
