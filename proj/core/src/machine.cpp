#include "funk/machine.hpp"

#include <sstream>

#include "funk/pretty.hpp"
#include "funk/subst.hpp"

namespace funk {

bool is_value(const ExprPtr& e) {
  switch (e->kind()) {
    case Expr::Kind::Num:
    case Expr::Kind::List:
    case Expr::Kind::Fun:
    case Expr::Kind::EffAbs:
      return true;
    default:
      return false;
  }
}

bool operator==(const Observation& a, const Observation& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Observation::Kind::Num:
      return a.num == b.num;
    case Observation::Kind::List:
      return a.list == b.list;
    default:
      return true;
  }
}

std::string to_string(const Observation& o) {
  switch (o.kind) {
    case Observation::Kind::Num:
      return std::to_string(o.num);
    case Observation::Kind::Fun:
      return "fun";
    case Observation::Kind::Abs:
      return "abs";
    case Observation::Kind::List: {
      std::string out = "list ";
      for (std::size_t i = 0; i < o.list.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(o.list[i]);
      }
      return o.list.empty() ? "list" : out;
    }
  }
  return "?";
}

std::string to_string(StuckKind kind) {
  switch (kind) {
    case StuckKind::LocOutOfRange: return "loc-out-of-range";
    case StuckKind::FreeVariable: return "free-variable";
    case StuckKind::NotAFunction: return "not-a-function";
    case StuckKind::NotAnAbstraction: return "not-an-abstraction";
    case StuckKind::ArityMismatch: return "arity-mismatch";
    case StuckKind::DeltaDomain: return "delta-domain";
    case StuckKind::EmptyListOp: return "empty-list-op";
    case StuckKind::BadCondition: return "bad-condition";
  }
  return "stuck";
}

// ---------------------------------------------------------------------------
// Expression evaluation

Value delta(const std::string& op, const std::vector<Value>& args, Span span) {
  (void)span;
  auto num = [&](std::size_t i) -> long long {
    if (const auto* n = args[i]->get_if<NumExpr>()) return n->value;
    throw StuckError(StuckKind::DeltaDomain,
                     "operator '" + op + "' applied to a non-integer");
  };
  auto list = [&](std::size_t i) -> const std::vector<long long>& {
    if (const auto* l = args[i]->get_if<ListExpr>()) return l->elems;
    throw StuckError(StuckKind::DeltaDomain,
                     "operator '" + op + "' applied to a non-list");
  };
  auto mk_num = [](long long v) { return make_expr(NumExpr{v}); };

  if (op == "+") return mk_num(num(0) + num(1));
  if (op == "-") return mk_num(num(0) - num(1));
  if (op == "*") return mk_num(num(0) * num(1));
  if (op == "iszero") return mk_num(num(0) == 0 ? 1 : 0);
  if (op == "dec") return mk_num(num(0) - 1);
  if (op == "inc") return mk_num(num(0) + 1);
  if (op == "cons") {
    std::vector<long long> out;
    out.reserve(list(1).size() + 1);
    out.push_back(num(0));
    out.insert(out.end(), list(1).begin(), list(1).end());
    return make_expr(ListExpr{std::move(out)});
  }
  if (op == "length") return mk_num(static_cast<long long>(list(0).size()));
  if (op == "head") {
    if (list(0).empty())
      throw StuckError(StuckKind::EmptyListOp, "head of empty list");
    return mk_num(list(0).front());
  }
  if (op == "tail") {
    if (list(0).empty())
      throw StuckError(StuckKind::EmptyListOp, "tail of empty list");
    return make_expr(
        ListExpr{{list(0).begin() + 1, list(0).end()}});
  }
  throw StuckError(StuckKind::DeltaDomain, "unknown operator '" + op + "'");
}

Value eval_expr(const ExprPtr& e, const ValueStack& sigma, Fuel& fuel) {
  Fuel::Scope depth(fuel);
  switch (e->kind()) {
    case Expr::Kind::Loc: {
      const auto& l = e->as<LocExpr>();
      if (l.index >= sigma.size())
        throw StuckError(StuckKind::LocOutOfRange,
                         "location #" + std::to_string(l.index) +
                             " is outside the stack (size " +
                             std::to_string(sigma.size()) + ")");
      return sigma[l.index];
    }
    case Expr::Kind::Var:
      throw StuckError(StuckKind::FreeVariable,
                       "free variable '" + e->as<VarExpr>().name +
                           "' in evaluated expression");
    case Expr::Kind::Num:
    case Expr::Kind::List:
    case Expr::Kind::Fun:
    case Expr::Kind::EffAbs:
      return e;
    case Expr::Kind::Prim: {
      const auto& p = e->as<PrimExpr>();
      std::vector<Value> args;
      args.reserve(p.args.size());
      for (const auto& a : p.args) args.push_back(eval_expr(a, sigma, fuel));
      return delta(p.op, args, e->span());
    }
    case Expr::Kind::Let: {
      const auto& l = e->as<LetExpr>();
      Value rhs = eval_expr(l.rhs, sigma, fuel);
      fuel.burn();
      return eval_expr(subst_expr(l.var, rhs, l.body), sigma, fuel);
    }
    case Expr::Kind::Fix: {
      const auto& f = e->as<FixExpr>();
      fuel.burn();
      return eval_expr(subst_expr(f.var, e, f.body), sigma, fuel);
    }
    case Expr::Kind::EffApp: {
      const auto& a = e->as<EffAppExpr>();
      Value fn = eval_expr(a.fn, sigma, fuel);
      const auto* abs = fn->get_if<EffAbsExpr>();
      if (!abs)
        throw StuckError(StuckKind::NotAnAbstraction,
                         "effect application of " + pretty(fn));
      fuel.burn();
      return eval_expr(subst_atom(abs->var, a.arg, abs->body), sigma, fuel);
    }
  }
  throw StuckError(StuckKind::DeltaDomain, "unreachable expression kind");
}

Value eval_expr(const ExprPtr& e, const ValueStack& sigma) {
  Fuel fuel(1000000);
  return eval_expr(e, sigma, fuel);
}

Observation observe(const Value& v) {
  switch (v->kind()) {
    case Expr::Kind::Num:
      return Observation::number(v->as<NumExpr>().value);
    case Expr::Kind::Fun:
      return Observation::fun();
    case Expr::Kind::EffAbs:
      return Observation::abs();
    case Expr::Kind::List:
      return Observation::of_list(v->as<ListExpr>().elems);
    default:
      throw StuckError(StuckKind::DeltaDomain,
                       "observing a non-value: " + pretty(v));
  }
}

// ---------------------------------------------------------------------------
// Single-step reduction

namespace {

// Substitutes parameter locations into a callee body: parameter i lands at
// back-index base + i, so the leftmost parameter gets the lowest index.
StmtPtr bind_params(const FunExpr& fn, std::size_t base, StmtPtr body) {
  for (std::size_t i = 0; i < fn.params.size(); ++i)
    body = subst_atom(fn.params[i].name,
                      EffectAtom::loc(base + i, fn.params[i].type), body);
  return body;
}

}  // namespace

StepOutcome step(const State& st, Fuel& fuel, bool no_tailcall) {
  switch (st.stmt->kind()) {
    case Stmt::Kind::VarInit: {
      const auto& v = st.stmt->as<VarInitStmt>();
      if (!v.annot)
        throw std::logic_error("var-init without a type annotation; "
                               "the program was not elaborated");
      Value val = eval_expr(v.rhs, st.values, fuel);
      State next;
      next.values = st.values;
      std::size_t loc = next.values.size();
      next.values.push_back(std::move(val));
      next.stmt = subst_atom(v.var, EffectAtom::loc(loc, v.annot), v.rest);
      next.control = st.control;
      next.locals = st.locals + 1;
      return StepOutcome{false, std::move(next), "Init"};
    }
    case Stmt::Kind::LetCall: {
      const auto& c = st.stmt->as<LetCallStmt>();
      Value fn_val = eval_expr(c.fn, st.values, fuel);
      const auto* f = fn_val->get_if<FunExpr>();
      if (!f)
        throw StuckError(StuckKind::NotAFunction, "calling " + pretty(fn_val));
      if (f->params.size() != c.args.size())
        throw StuckError(StuckKind::ArityMismatch,
                         "call with " + std::to_string(c.args.size()) +
                             " argument(s) to a function of " +
                             std::to_string(f->params.size()));
      if (!f->ret)
        throw std::logic_error("function value lacks a return type; "
                               "the program was not elaborated");
      State next;
      next.values = st.values;
      std::size_t base = next.values.size();
      for (const auto& a : c.args)
        next.values.push_back(eval_expr(a, st.values, fuel));
      next.stmt = bind_params(*f, base, f->body);
      next.control = st.control;
      next.control.push_back(Frame{c.var, f->ret, c.rest, st.locals});
      next.locals = f->params.size();
      return StepOutcome{false, std::move(next), "Call"};
    }
    case Stmt::Kind::TailCall: {
      const auto& c = st.stmt->as<TailCallStmt>();
      Value fn_val = eval_expr(c.fn, st.values, fuel);
      const auto* f = fn_val->get_if<FunExpr>();
      if (!f)
        throw StuckError(StuckKind::NotAFunction, "calling " + pretty(fn_val));
      if (f->params.size() != c.args.size())
        throw StuckError(StuckKind::ArityMismatch,
                         "tail call with " + std::to_string(c.args.size()) +
                             " argument(s) to a function of " +
                             std::to_string(f->params.size()));
      if (!f->ret)
        throw std::logic_error("function value lacks a return type; "
                               "the program was not elaborated");
      // Arguments are evaluated against the stack before anything is popped.
      std::vector<Value> args;
      args.reserve(c.args.size());
      for (const auto& a : c.args)
        args.push_back(eval_expr(a, st.values, fuel));

      State next;
      if (no_tailcall) {
        // Call-then-return: the current frame's values stay on the stack
        // until the callee finishes.
        next.values = st.values;
        std::size_t base = next.values.size();
        for (auto& a : args) next.values.push_back(std::move(a));
        next.stmt = bind_params(*f, base, f->body);
        next.control = st.control;
        StmtPtr resume = make_stmt(
            ReturnStmt{make_expr(VarExpr{"$tail"}, st.stmt->span())},
            st.stmt->span());
        next.control.push_back(
            Frame{"$tail", f->ret, std::move(resume), st.locals});
        next.locals = f->params.size();
        return StepOutcome{false, std::move(next), "TailCall"};
      }
      // The current frame is popped first; argument locations start at
      // |sigma| - n.
      next.values = drop(st.locals, st.values);
      std::size_t base = next.values.size();
      for (auto& a : args) next.values.push_back(std::move(a));
      next.stmt = bind_params(*f, base, f->body);
      next.control = st.control;
      next.locals = f->params.size();
      return StepOutcome{false, std::move(next), "TailCall"};
    }
    case Stmt::Kind::Return: {
      if (st.control.empty()) return StepOutcome{true, {}, "Final"};
      const auto& r = st.stmt->as<ReturnStmt>();
      Value v = eval_expr(r.value, st.values, fuel);
      Frame frame = st.control.back();
      State next;
      next.values = drop(st.locals, st.values);
      std::size_t loc = next.values.size();
      next.values.push_back(std::move(v));
      next.stmt = subst_atom(frame.var, EffectAtom::loc(loc, frame.annot),
                             frame.rest);
      next.control.assign(st.control.begin(), st.control.end() - 1);
      next.locals = frame.locals + 1;
      return StepOutcome{false, std::move(next), "Return"};
    }
    case Stmt::Kind::If: {
      const auto& i = st.stmt->as<IfStmt>();
      Value c = eval_expr(i.cond, st.values, fuel);
      const auto* n = c->get_if<NumExpr>();
      if (!n)
        throw StuckError(StuckKind::BadCondition,
                         "if condition evaluated to " + pretty(c));
      State next;
      next.stmt = n->value != 0 ? i.then_branch : i.else_branch;
      next.control = st.control;
      next.values = st.values;
      next.locals = st.locals;
      return StepOutcome{false, std::move(next), "If"};
    }
    case Stmt::Kind::Proc:
      throw std::logic_error("proc statement reached the machine");
  }
  throw std::logic_error("unreachable statement kind");
}

// ---------------------------------------------------------------------------
// Run loop

namespace {

struct CellCounter {
  std::size_t total = 0;

  void walk(const ExprPtr& e) {
    if (!e) return;
    switch (e->kind()) {
      case Expr::Kind::List:
        total += e->as<ListExpr>().elems.size();
        return;
      case Expr::Kind::Prim:
        for (const auto& a : e->as<PrimExpr>().args) walk(a);
        return;
      case Expr::Kind::Fun:
        walk(e->as<FunExpr>().body);
        return;
      case Expr::Kind::EffAbs:
        walk(e->as<EffAbsExpr>().body);
        return;
      case Expr::Kind::EffApp:
        walk(e->as<EffAppExpr>().fn);
        return;
      case Expr::Kind::Let: {
        walk(e->as<LetExpr>().rhs);
        walk(e->as<LetExpr>().body);
        return;
      }
      case Expr::Kind::Fix:
        walk(e->as<FixExpr>().body);
        return;
      default:
        return;
    }
  }

  void walk(const StmtPtr& s) {
    if (!s) return;
    switch (s->kind()) {
      case Stmt::Kind::VarInit:
        walk(s->as<VarInitStmt>().rhs);
        walk(s->as<VarInitStmt>().rest);
        return;
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
      default:
        return;
    }
  }
};

std::string dump_state(const State& st, std::uint64_t step_index,
                       const std::string& why) {
  std::ostringstream out;
  out << why << "\n  at step " << step_index
      << "\n  stmt: " << pretty(st.stmt) << "\n  locals: " << st.locals
      << "\n  control depth: " << st.control.size() << "\n  stack (bottom to"
      << " top, " << st.values.size() << "):";
  for (const auto& v : st.values) out << "\n    " << pretty(v);
  return out.str();
}

// Incremental retained-cell accounting: stacks only change at the top, so
// per-slot counts are reused for the unchanged prefix.
struct RetainedCells {
  std::vector<std::size_t> per_slot;
  std::vector<const Expr*> keys;
  std::size_t total = 0;

  std::size_t update(const ValueStack& values) {
    std::size_t keep = 0;
    while (keep < keys.size() && keep < values.size() &&
           keys[keep] == values[keep].get())
      ++keep;
    for (std::size_t i = keep; i < keys.size(); ++i) total -= per_slot[i];
    keys.resize(keep);
    per_slot.resize(keep);
    for (std::size_t i = keep; i < values.size(); ++i) {
      std::size_t cells = cell_count(values[i]);
      keys.push_back(values[i].get());
      per_slot.push_back(cells);
      total += cells;
    }
    return total;
  }
};

}  // namespace

std::size_t cell_count(const Value& v) {
  CellCounter c;
  c.walk(v);
  return c.total;
}

State initial_state(const Program& p) { return State{p.body, {}, {}, 0}; }

RunResult run(const Program& p, const RunOptions& opts) {
  RunResult result;
  State st = initial_state(p);
  Fuel fuel(opts.fuel);
  RetainedCells retained;

  auto note = [&](const State& s) {
    result.stats.max_value_stack =
        std::max(result.stats.max_value_stack, s.values.size());
    result.stats.max_control_stack =
        std::max(result.stats.max_control_stack, s.control.size());
    result.stats.max_retained_cells =
        std::max(result.stats.max_retained_cells, retained.update(s.values));
  };

  note(st);
  if (opts.per_state) opts.per_state(st, 0);

  try {
    while (true) {
      fuel.burn();
      StepOutcome out = step(st, fuel, opts.no_tailcall);
      if (out.final) {
        const auto& r = st.stmt->as<ReturnStmt>();
        result.observation = observe(eval_expr(r.value, st.values, fuel));
        result.status = RunResult::Status::Final;
        return result;
      }
      ++result.stats.steps;
      if (opts.trace) {
        StepRecord rec;
        rec.step = result.stats.steps;
        rec.rule = out.rule;
        rec.stmt = pretty(st.stmt);
        rec.stack_depth = out.next.values.size();
        rec.locals = out.next.locals;
        rec.control_depth = out.next.control.size();
        opts.trace(rec);
      }
      st = std::move(out.next);
      note(st);
      if (opts.per_state) opts.per_state(st, result.stats.steps);
    }
  } catch (const StuckError& e) {
    result.status = RunResult::Status::Stuck;
    result.stuck_kind = e.kind;
    result.message = dump_state(st, result.stats.steps,
                                std::string("stuck (") + to_string(e.kind) +
                                    "): " + e.what());
    return result;
  } catch (const FuelExhausted&) {
    result.status = RunResult::Status::FuelExhausted;
    result.message = "fuel exhausted after " +
                     std::to_string(result.stats.steps) + " step(s)";
    return result;
  }
}

}  // namespace funk
