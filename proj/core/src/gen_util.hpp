#pragma once

// Shared random-state helpers for vary() and the generators. Internal.

#include "flowtest/indist.hpp"
#include "flowtest/register_machine.hpp"
#include "flowtest/rng.hpp"

namespace flowtest::genutil {

inline Label random_label(Rng& rng, const Lattice& lat) {
  return Label{static_cast<uint8_t>(rng.index(lat.size()))};
}

// A label that is not visible at obs. Caller must ensure one exists.
inline Label random_high_label(Rng& rng, const Lattice& lat, Label obs) {
  std::vector<Label> highs;
  for (Label l : lat.labels())
    if (!lat.flows_to(l, obs)) highs.push_back(l);
  if (highs.empty()) return lat.top();
  return highs[rng.index(highs.size())];
}

inline Atom random_atom(Rng& rng, const Lattice& lat, const IntDist& ints) {
  return Atom{ints.draw(rng), random_label(rng, lat)};
}

inline StackEntry random_entry(Rng& rng, const Lattice& lat, const IntDist& ints,
                               bool allow_ret) {
  if (allow_ret && rng.chance(0.25))
    return StackEntry::ret(ints.draw(rng), rng.chance(0.5), random_label(rng, lat));
  return StackEntry::data(random_atom(rng, lat, ints));
}

inline std::vector<StackEntry> random_stack(Rng& rng, const Lattice& lat, const IntDist& ints,
                                            bool allow_ret, int max_len) {
  std::vector<StackEntry> out;
  int n = static_cast<int>(rng.range(0, max_len));
  for (int i = 0; i < n; ++i) out.push_back(random_entry(rng, lat, ints, allow_ret));
  return out;
}

inline std::vector<Atom> random_mem(Rng& rng, const Lattice& lat, const IntDist& ints,
                                    int max_len) {
  std::vector<Atom> out;
  int n = static_cast<int>(rng.range(0, max_len));
  for (int i = 0; i < n; ++i) out.push_back(random_atom(rng, lat, ints));
  return out;
}

// Blocks a pointer protected by `bound` may target without breaking
// well-stampedness: stamp must flow to the protection.
inline std::vector<BlockId> ptr_candidates(const Lattice& lat, const RMemory& mem, Label bound) {
  std::vector<BlockId> out;
  for (auto& [b, blk] : mem)
    if (lat.flows_to(b.stamp, bound)) out.push_back(b);
  return out;
}

// Random register-machine atom whose pointer payloads (if any) respect the
// well-stampedness bound `base ⊔ atom label`.
inline RAtom random_ratom(Rng& rng, const Lattice& lat, const IntDist& ints, const RMemory& mem,
                          Label base) {
  Label lbl = random_label(rng, lat);
  Label bound = lat.join(base, lbl);
  auto cands = ptr_candidates(lat, mem, bound);
  double r = static_cast<double>(rng.next_u64() % 100);
  if (!cands.empty() && r < 35) {
    BlockId b = cands[rng.index(cands.size())];
    auto it = mem.find(b);
    int64_t size = static_cast<int64_t>(it->second.cells.size());
    // mostly in-bounds offsets; validity is checked at use anyway
    int64_t off = rng.chance(0.85) && size > 0 ? rng.range(0, size - 1) : rng.range(-2, size + 1);
    return RAtom{RValue::pointer(b, off), lbl};
  }
  if (r < 55) return RAtom{RValue::label(random_label(rng, lat)), lbl};
  return RAtom{RValue::integer(ints.draw(rng)), lbl};
}

}  // namespace flowtest::genutil
