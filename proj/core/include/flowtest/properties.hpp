#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>

#include "flowtest/indist.hpp"

namespace flowtest {

enum class Property : uint8_t { EENI, LLNI, SSNI, MSNI };
const char* to_string(Property p);
std::optional<Property> parse_property(const std::string& name);

enum class EndSet : uint8_t { HALTED, HALTED_AND_LOW };

struct PropertyCfg {
  Property property = Property::EENI;
  StartSet start = StartSet::INIT;
  EndSet end = EndSet::HALTED;  // EENI only
  Relation relation{};
  int fuel = 50;
};

enum class DiscardReason : uint8_t { FUEL, NOT_IN_END_SET, NO_SSNI_CLAUSE };
const char* to_string(DiscardReason r);

template <class State>
struct Counterexample {
  Variation<State> var;
  Trace<State> left;
  Trace<State> right;
  std::string clause;
};

template <class State>
struct Verdict {
  enum class Kind : uint8_t { Pass, Discard, Fail } kind = Kind::Pass;
  DiscardReason discard = DiscardReason::FUEL;
  std::shared_ptr<Counterexample<State>> ce;

  bool pass() const { return kind == Kind::Pass; }
  bool fail() const { return kind == Kind::Fail; }
  bool discarded() const { return kind == Kind::Discard; }
};

// Adapters giving the property checkers a uniform view of a machine.
struct StackModel {
  using State = SState;
  SRuleSet rules;

  Trace<SState> run(const SState& s, int fuel) const { return run_trace(rules, s, fuel); }
  std::optional<SState> step(const SState& s) const {
    auto r = sstep(rules, s);
    return r.ok() ? std::optional<SState>(std::move(*r.next)) : std::nullopt;
  }
  bool halted(const SState& s) const {
    const SInstr* i = s.fetch();
    return i && i->op == SOp::Halt;
  }
  bool is_low(Label obs, const SState& s) const { return rules.lat->flows_to(s.pc.label, obs); }
  bool related(const Relation& rel, const SState& a, const SState& b) const {
    return indist_state(rel, *rules.lat, a, b);
  }
  const Lattice& lattice() const { return *rules.lat; }
};

struct RegisterModel {
  using State = RState;
  RRuleSet rules;

  Trace<RState> run(const RState& s, int fuel) const { return run_trace(rules, s, fuel); }
  std::optional<RState> step(const RState& s) const {
    auto r = rstep(rules, s);
    return r.ok() ? std::optional<RState>(std::move(*r.next)) : std::nullopt;
  }
  bool halted(const RState& s) const {
    const RInstr* i = s.fetch();
    return i && i->op == ROp::Halt;
  }
  bool is_low(Label obs, const RState& s) const { return rules.lat->flows_to(s.pc.label, obs); }
  bool related(const Relation& rel, const RState& a, const RState& b) const {
    return indist_state(rel, *rules.lat, a, b);
  }
  const Lattice& lattice() const { return *rules.lat; }
};

namespace detail {

template <class Model, class State>
bool in_end_set(const Model& m, const PropertyCfg& cfg, const Trace<State>& t) {
  if (t.stop != StopReason::Halted) return false;
  if (cfg.end == EndSet::HALTED_AND_LOW && !m.is_low(cfg.relation.obs, t.last())) return false;
  return true;
}

}  // namespace detail

// End-to-end noninterference: run both sides to a stuck state; if both end
// inside the end set, the ends must be related.
template <class Model>
Verdict<typename Model::State> check_eeni(const PropertyCfg& cfg, const Model& m,
                                          const Variation<typename Model::State>& v) {
  using State = typename Model::State;
  Verdict<State> out;
  auto t1 = m.run(v.left, cfg.fuel);
  auto t2 = m.run(v.right, cfg.fuel);
  if (t1.stop == StopReason::FuelExhausted || t2.stop == StopReason::FuelExhausted) {
    out.kind = Verdict<State>::Kind::Discard;
    out.discard = DiscardReason::FUEL;
    return out;
  }
  if (!detail::in_end_set(m, cfg, t1) || !detail::in_end_set(m, cfg, t2)) {
    out.kind = Verdict<State>::Kind::Discard;
    out.discard = DiscardReason::NOT_IN_END_SET;
    return out;
  }
  if (m.related(cfg.relation, t1.last(), t2.last())) return out;
  out.kind = Verdict<State>::Kind::Fail;
  out.ce = std::make_shared<Counterexample<State>>(
      Counterexample<State>{v, std::move(t1), std::move(t2), "end states distinguishable"});
  return out;
}

// Low-lockstep: filter high states out of both traces, compare the low
// residues pointwise; one residue may be a prefix of the other.
template <class Model>
Verdict<typename Model::State> check_llni(const PropertyCfg& cfg, const Model& m,
                                          const Variation<typename Model::State>& v) {
  using State = typename Model::State;
  Verdict<State> out;
  auto t1 = m.run(v.left, cfg.fuel);
  auto t2 = m.run(v.right, cfg.fuel);
  std::vector<const State*> lows1, lows2;
  for (auto& s : t1.states)
    if (m.is_low(cfg.relation.obs, s)) lows1.push_back(&s);
  for (auto& s : t2.states)
    if (m.is_low(cfg.relation.obs, s)) lows2.push_back(&s);
  size_t n = std::min(lows1.size(), lows2.size());
  for (size_t i = 0; i < n; ++i) {
    if (!m.related(cfg.relation, *lows1[i], *lows2[i])) {
      out.kind = Verdict<State>::Kind::Fail;
      out.ce = std::make_shared<Counterexample<State>>(Counterexample<State>{
          v, std::move(t1), std::move(t2),
          "low states distinguishable at lockstep position " + std::to_string(i)});
      return out;
    }
  }
  return out;
}

// Single-step unwinding conditions, checked on one step of the variation.
template <class Model>
Verdict<typename Model::State> check_ssni(const PropertyCfg& cfg, const Model& m,
                                          const Variation<typename Model::State>& v) {
  using State = typename Model::State;
  Verdict<State> out;
  const Label obs = cfg.relation.obs;
  auto fail = [&](const State& l, const State& r, std::optional<State> ln, std::optional<State> rn,
                  const std::string& clause) {
    Trace<State> t1, t2;
    t1.states.push_back(l);
    if (ln) t1.states.push_back(*ln);
    t2.states.push_back(r);
    if (rn) t2.states.push_back(*rn);
    out.kind = Verdict<State>::Kind::Fail;
    out.ce = std::make_shared<Counterexample<State>>(
        Counterexample<State>{v, std::move(t1), std::move(t2), clause});
  };

  const bool low1 = m.is_low(obs, v.left);
  const bool low2 = m.is_low(obs, v.right);
  auto n1 = m.step(v.left);
  auto n2 = m.step(v.right);
  bool applicable = false;

  // condition 2, each side on its own
  if (!low1 && n1 && !m.is_low(obs, *n1)) {
    applicable = true;
    if (!m.related(cfg.relation, v.left, *n1)) {
      fail(v.left, v.left, n1, n1, "condition 2: high step changes the state (left)");
      return out;
    }
  }
  if (!low2 && n2 && !m.is_low(obs, *n2)) {
    applicable = true;
    if (!m.related(cfg.relation, v.right, *n2)) {
      fail(v.right, v.right, n2, n2, "condition 2: high step changes the state (right)");
      return out;
    }
  }
  // condition 1: both low, both step
  if (low1 && low2 && n1 && n2) {
    applicable = true;
    if (!m.related(cfg.relation, *n1, *n2)) {
      fail(v.left, v.right, n1, n2, "condition 1: successors of low states distinguishable");
      return out;
    }
  }
  // condition 3: both high, both step to low
  if (!low1 && !low2 && n1 && n2 && m.is_low(obs, *n1) && m.is_low(obs, *n2)) {
    applicable = true;
    if (!m.related(cfg.relation, *n1, *n2)) {
      fail(v.left, v.right, n1, n2, "condition 3: states emerging from high distinguishable");
      return out;
    }
  }
  if (!applicable) {
    out.kind = Verdict<State>::Kind::Discard;
    out.discard = DiscardReason::NO_SSNI_CLAUSE;
  }
  return out;
}

// Multi-step: the unwinding conditions applied along whole fuel-bounded
// traces. The trace rules are not syntax-directed when both sides sit in
// high states, so acceptance is decided by memoized search over both
// orientations.
template <class Model>
Verdict<typename Model::State> check_msni(const PropertyCfg& cfg, const Model& m,
                                          const Variation<typename Model::State>& v) {
  using State = typename Model::State;
  Verdict<State> out;
  const Label obs = cfg.relation.obs;
  auto t1 = m.run(v.left, cfg.fuel);
  auto t2 = m.run(v.right, cfg.fuel);
  const auto& a = t1.states;
  const auto& b = t2.states;
  const size_t n1 = a.size(), n2 = b.size();

  std::vector<bool> low1(n1), low2(n2);
  for (size_t i = 0; i < n1; ++i) low1[i] = m.is_low(obs, a[i]);
  for (size_t j = 0; j < n2; ++j) low2[j] = m.is_low(obs, b[j]);

  std::unordered_map<size_t, int> memo;  // 1 accept, 0 reject
  size_t worst = 0;
  auto key = [&](size_t i, size_t j) { return i * (n2 + 1) + j; };

  std::function<bool(size_t, size_t)> accept = [&](size_t i, size_t j) -> bool {
    auto it = memo.find(key(i, j));
    if (it != memo.end()) return it->second != 0;
    memo[key(i, j)] = 0;  // guards cycles; overwritten below
    bool ok = false;
    const bool end1 = i + 1 >= n1, end2 = j + 1 >= n2;
    if (end1 && end2) ok = true;  // Both End
    if (!ok && !end1 && !end2 && low1[i] && low2[j] &&
        m.related(cfg.relation, a[i + 1], b[j + 1]))
      ok = accept(i + 1, j + 1);  // Low Steps
    if (!ok && !end1 && !end2 && !low1[i] && !low2[j] && low1[i + 1] && low2[j + 1] &&
        m.related(cfg.relation, a[i + 1], b[j + 1]))
      ok = accept(i + 1, j + 1);  // High to Low Steps
    if (!ok && !end1 && !low1[i] && !low1[i + 1] && m.related(cfg.relation, a[i], a[i + 1]))
      ok = accept(i + 1, j);  // High to High Step (left)
    if (!ok && !end2 && !low2[j] && !low2[j + 1] && m.related(cfg.relation, b[j], b[j + 1]))
      ok = accept(i, j + 1);  // High to High Step (right)
    if (!ok && end2 && !end1 && (low1[i] || low1[i + 1])) ok = accept(i + 1, j);  // Low Step End
    if (!ok && end1 && !end2 && (low2[j] || low2[j + 1])) ok = accept(i, j + 1);
    memo[key(i, j)] = ok ? 1 : 0;
    if (!ok) worst = std::max(worst, i + j);
    return ok;
  };

  if (accept(0, 0)) return out;
  out.kind = Verdict<State>::Kind::Fail;
  out.ce = std::make_shared<Counterexample<State>>(Counterexample<State>{
      v, std::move(t1), std::move(t2),
      "no trace rule applies at depth " + std::to_string(worst)});
  return out;
}

template <class Model>
Verdict<typename Model::State> check_property(const PropertyCfg& cfg, const Model& m,
                                              const Variation<typename Model::State>& v) {
  switch (cfg.property) {
    case Property::EENI: return check_eeni(cfg, m, v);
    case Property::LLNI: return check_llni(cfg, m, v);
    case Property::SSNI: return check_ssni(cfg, m, v);
    case Property::MSNI: return check_msni(cfg, m, v);
  }
  return {};
}

}  // namespace flowtest
