#pragma once

#include <functional>

#include "flowtest/indist.hpp"

namespace flowtest {

struct ShrinkConfig {
  bool smart_order = true;
  bool double_shrink = true;
  uint64_t max_rounds = 500000;  // total candidate evaluations
  int double_fanout = 64;
  // independent greedy descents with rotated candidate order; local minima
  // depend on the path taken, so the smallest of several wins
  int restarts = 4;
};

// Strictly decreasing size measure; per-variation termination argument.
uint64_t shrink_measure(const Lattice& lat, const SState& s);
uint64_t shrink_measure(const Lattice& lat, const RState& s);

template <class State>
uint64_t shrink_measure(const Lattice& lat, const Variation<State>& v) {
  return shrink_measure(lat, v.left) + shrink_measure(lat, v.right);
}

// All single-step shrinking candidates, most aggressive first. Every
// candidate satisfies the relation (synchronized low-part edits) and is
// strictly smaller under shrink_measure.
std::vector<Variation<SState>> shrink_candidates(const Relation& rel, const Lattice& lat,
                                                 const Variation<SState>& v);
std::vector<Variation<RState>> shrink_candidates(const Relation& rel, const Lattice& lat,
                                                 const Variation<RState>& v);

template <class State>
struct ShrinkResult {
  Variation<State> var;
  bool budget_exhausted = false;
  int accepted = 0;
  uint64_t evaluations = 0;
};

// Greedy minimization: keeps replacing the current counterexample by its
// first still-failing candidate. With double shrinking enabled a candidate
// of a candidate is also tried when no single step works.
template <class State>
ShrinkResult<State> shrink_descent(const ShrinkConfig& cfg, const Relation& rel,
                                   const Lattice& lat,
                                   const std::function<bool(const Variation<State>&)>& still_fails,
                                   Variation<State> v, size_t phase, bool reversed,
                                   uint64_t budget) {
  ShrinkResult<State> out{std::move(v)};
  size_t defer = 0;
  for (;;) {
    auto cands = shrink_candidates(rel, lat, out.var);
    if (cands.empty()) return out;
    size_t n = cands.size();
    size_t start = (phase + (cfg.smart_order ? defer : 0)) % n;
    bool accepted = false;
    size_t tried = 0;
    for (size_t k = 0; k < n; ++k) {
      size_t i = reversed ? (start + n - 1 - k) % n : (start + k) % n;
      if (out.evaluations++ >= budget) {
        out.budget_exhausted = true;
        return out;
      }
      ++tried;
      if (still_fails(cands[i])) {
        out.var = std::move(cands[i]);
        out.accepted++;
        defer = cfg.smart_order ? tried - 1 : 0;
        accepted = true;
        break;
      }
    }
    if (accepted) continue;
    if (!cfg.double_shrink) return out;
    // two-step shrinks: accept a candidate-of-a-candidate even though the
    // intermediate value is not a counterexample
    size_t fanout = std::min<size_t>(n, static_cast<size_t>(cfg.double_fanout));
    for (size_t i = 0; i < fanout && !accepted; ++i) {
      auto grand = shrink_candidates(rel, lat, cands[i]);
      size_t gf = std::min<size_t>(grand.size(), static_cast<size_t>(cfg.double_fanout));
      for (size_t j = 0; j < gf; ++j) {
        if (out.evaluations++ >= budget) {
          out.budget_exhausted = true;
          return out;
        }
        if (still_fails(grand[j])) {
          out.var = std::move(grand[j]);
          out.accepted += 2;
          accepted = true;
          break;
        }
      }
    }
    if (!accepted) return out;
  }
}

template <class State>
ShrinkResult<State> shrink_loop(const ShrinkConfig& cfg, const Relation& rel, const Lattice& lat,
                                const std::function<bool(const Variation<State>&)>& still_fails,
                                Variation<State> v) {
  int paths = std::max(1, cfg.restarts);
  ShrinkResult<State> best;
  uint64_t spent = 0;
  for (int r = 0; r < paths; ++r) {
    uint64_t budget = cfg.max_rounds > spent ? (cfg.max_rounds - spent) / uint64_t(paths - r) : 0;
    auto res = shrink_descent<State>(cfg, rel, lat, still_fails, v, size_t(r) * 11, r % 2 == 1,
                                     budget);
    spent += res.evaluations;
    if (r == 0 || shrink_measure(lat, res.var) < shrink_measure(lat, best.var)) {
      uint64_t evals = best.evaluations + res.evaluations;
      int accepted = best.accepted + res.accepted;
      best = std::move(res);
      best.evaluations = evals;
      best.accepted = accepted;
    } else {
      best.evaluations += res.evaluations;
      best.budget_exhausted = best.budget_exhausted || res.budget_exhausted;
    }
  }
  return best;
}

}  // namespace flowtest
