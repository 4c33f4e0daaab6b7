#include "funk/oracle.hpp"

#include "funk/pretty.hpp"

namespace funk {

namespace {

// The n most recent stack slots, as location atoms annotated with their
// stack types.
Effect top_locations(const StackTyping& sigma, std::size_t n) {
  std::vector<EffectAtom> atoms;
  atoms.reserve(n);
  for (std::size_t i = sigma.size() - n; i < sigma.size(); ++i)
    atoms.push_back(EffectAtom::loc(i, sigma[i]));
  return Effect(std::move(atoms));
}

struct StmtCheck {
  TypePtr type;
  Effect loc_reads;  // reconstructed phi1, locations only
};

// Types a statement under a reconstructed read effect. `var_locals` holds
// variables that count as both readable and local (a frame's return slot);
// `loc_locals` is phi2. Every demand beyond those is collected, checked
// against the stack typing, and the result re-checked strictly so the
// collected effect really is a witness.
StmtCheck check_stmt(const TypeEnv& env, const Effect& var_locals,
                     const Effect& loc_locals, const StackTyping& sigma,
                     const StmtPtr& stmt) {
  Effect locals = effect_union(var_locals, loc_locals);
  EffectCtx collect = EffectCtx::collecting(locals);
  StmtTyping t = type_stmt(env, collect, locals, stmt);

  Effect phi1 = effect_union(loc_locals, collect.demanded());
  if (!satisfies(sigma, phi1))
    throw TypeError(ErrorKind::EffectViolation, stmt->span(),
                    "stack typing does not satisfy the reconstructed effect " +
                        pretty(phi1));
  type_stmt(env, EffectCtx::strict(effect_union(var_locals, phi1)), locals,
            stmt);
  return StmtCheck{t.type, phi1};
}

}  // namespace

TypePtr ValueTypeCache::type_of(const Value& v) {
  auto it = entries_.find(v.get());
  if (it != entries_.end()) return it->second.second;
  TypePtr t = type_expr(TypeEnv(), Effect(), v).type;
  entries_.emplace(v.get(), std::make_pair(v, t));
  return t;
}

TypePtr type_state(const State& st, ValueTypeCache* cache) {
  StackTyping sigma;
  if (cache) {
    sigma.reserve(st.values.size());
    for (const auto& v : st.values) sigma.push_back(cache->type_of(v));
  } else {
    sigma = type_value_stack(st.values);
  }
  if (st.locals > sigma.size())
    throw TypeError(ErrorKind::Mismatch, st.stmt->span(),
                    "locals count exceeds the stack size");

  Effect phi2 = top_locations(sigma, st.locals);
  StmtCheck main = check_stmt(TypeEnv(), Effect(), phi2, sigma, st.stmt);

  StackTyping cur = drop(st.locals, sigma);
  if (!satisfies(cur, effect_minus(main.loc_reads, phi2)))
    throw TypeError(ErrorKind::EffectViolation, st.stmt->span(),
                    "non-local effect does not survive popping the frame");

  TypePtr incoming = main.type;
  for (auto it = st.control.rbegin(); it != st.control.rend(); ++it) {
    const Frame& frame = *it;
    if (!type_equal(frame.annot, incoming))
      throw TypeError(ErrorKind::Mismatch, frame.rest->span(),
                      "frame expects " + pretty(frame.annot) + " but gets " +
                          pretty(incoming));
    wf_type(TypeEnv(), frame.annot, frame.rest->span());
    if (frame.locals > cur.size())
      throw TypeError(ErrorKind::Mismatch, frame.rest->span(),
                      "frame locals exceed the remaining stack");

    Effect phi2f = top_locations(cur, frame.locals);
    TypeEnv env = TypeEnv().extended(frame.var, frame.annot, false);
    StmtCheck fr = check_stmt(env, Effect::vars({frame.var}), phi2f, cur,
                              frame.rest);
    StackTyping next = drop(frame.locals, cur);
    if (!satisfies(next, effect_minus(fr.loc_reads, phi2f)))
      throw TypeError(ErrorKind::EffectViolation, frame.rest->span(),
                      "frame's non-local effect does not survive the pop");
    incoming = fr.type;
    cur = std::move(next);
  }
  return incoming;
}

bool observation_matches(const Observation& o, const TypePtr& t) {
  switch (o.kind) {
    case Observation::Kind::Num:
      return t->kind() == Type::Kind::Int;
    case Observation::Kind::Fun:
      return t->kind() == Type::Kind::Func;
    case Observation::Kind::Abs:
      return t->kind() == Type::Kind::EffAll;
    case Observation::Kind::List:
      return t->kind() == Type::Kind::IntList;
  }
  return false;
}

std::function<void(const State&, std::uint64_t)> state_typing_oracle(
    TypePtr program_type) {
  auto cache = std::make_shared<ValueTypeCache>();
  return [program_type, cache](const State& st, std::uint64_t step_index) {
    TypePtr got = type_state(st, cache.get());
    if (!type_equal(got, program_type))
      throw TypeError(ErrorKind::Mismatch, st.stmt->span(),
                      "state typing violation at step " +
                          std::to_string(step_index) + ": state types at " +
                          pretty(got) + ", program at " +
                          pretty(program_type));
  };
}

}  // namespace funk
