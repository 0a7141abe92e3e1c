#pragma once

// Test-only brute-force oracles, independent of the library's fast paths.

#include <set>
#include <vector>

#include "flowtest/register_machine.hpp"

namespace flowtest::oracle {

// Least upper bound by scanning every element; no join table involved.
inline std::optional<Label> brute_lub(const std::vector<std::vector<bool>>& leq, int a, int b) {
  const int n = static_cast<int>(leq.size());
  std::optional<Label> best;
  for (int c = 0; c < n; ++c) {
    if (!leq[a][c] || !leq[b][c]) continue;
    bool least = true;
    for (int d = 0; d < n; ++d)
      if (leq[a][d] && leq[b][d] && !leq[c][d]) least = false;
    if (least) {
      if (best) return std::nullopt;  // not unique
      best = Label{static_cast<uint8_t>(c)};
    }
  }
  return best;
}

// Smallest unused index per stamp, recomputed by linear probing.
inline BlockId brute_fresh(const RMemory& mem, Label stamp) {
  for (int32_t i = 0;; ++i) {
    if (!mem.count(BlockId{stamp, i})) return BlockId{stamp, i};
  }
}

// Reachability closure by iterating the link relation to a fixpoint,
// structured differently from the BFS in the library.
inline std::set<std::pair<BlockId, BlockId>> brute_reachable(const Lattice& lat, Label obs,
                                                             const RState& s) {
  std::set<BlockId> ids;
  for (auto& [b, blk] : s.mem) {
    ids.insert(b);
    for (auto& a : blk.cells)
      if (a.v.is_ptr()) ids.insert(a.v.blk);
  }
  for (auto& a : s.rf)
    if (a.v.is_ptr()) ids.insert(a.v.blk);
  for (auto& f : s.cs)
    for (auto& a : f.saved_rf)
      if (a.v.is_ptr()) ids.insert(a.v.blk);

  std::set<std::pair<BlockId, BlockId>> rel;
  for (BlockId b : ids) rel.insert({b, b});
  auto linked = [&](BlockId from, BlockId to) {
    auto it = s.mem.find(from);
    if (it == s.mem.end()) return false;
    if (!lat.flows_to(it->second.label, obs)) return false;
    for (auto& a : it->second.cells)
      if (a.v.is_ptr() && a.v.blk == to && lat.flows_to(a.label, obs)) return true;
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (BlockId a : ids)
      for (BlockId b : ids) {
        if (rel.count({a, b})) continue;
        if (linked(a, b)) {
          rel.insert({a, b});
          changed = true;
          continue;
        }
        for (BlockId mid : ids)
          if (rel.count({a, mid}) && rel.count({mid, b})) {
            rel.insert({a, b});
            changed = true;
            break;
          }
      }
  }
  return rel;
}

// Definition unrolled directly: every block reachable from a root at some
// observation level carries a stamp visible at that level.
inline bool brute_well_stamped(const Lattice& lat, const RState& s) {
  for (Label obs : lat.labels()) {
    auto rel = brute_reachable(lat, obs, s);
    for (BlockId root : root_set(lat, obs, s))
      for (auto& [a, b] : rel)
        if (a == root && !lat.flows_to(b.stamp, obs)) return false;
  }
  return true;
}

}  // namespace flowtest::oracle
