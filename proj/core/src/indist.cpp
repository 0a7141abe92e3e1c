#include "flowtest/indist.hpp"

#include <stdexcept>

#include "gen_util.hpp"

namespace flowtest {

const char* to_string(RelKind k) {
  switch (k) {
    case RelKind::MEM: return "mem";
    case RelKind::LOW: return "low";
    case RelKind::FULL: return "full";
    case RelKind::FULL_WS: return "full-ws";
    case RelKind::INTS_IN_REGS: return "ints";
    case RelKind::WRONG_HIGH_EQ_ALL: return "wrong-high-eq-all";
    case RelKind::WRONG_PAYLOAD_ONLY: return "wrong-payload-only";
    case RelKind::WRONG_RET_EQ_DATA: return "wrong-ret-eq-data";
    case RelKind::WRONG_FULL_STRICT_HIGH: return "wrong-full-strict-high";
    case RelKind::WRONG_STRICT_FRAMES: return "wrong-strict-frames";
    case RelKind::WRONG_FILTER_FRAMES: return "wrong-filter-frames";
  }
  return "?";
}

std::optional<RelKind> parse_relkind(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(RelKind::WRONG_FILTER_FRAMES); ++i) {
    auto k = static_cast<RelKind>(i);
    if (name == to_string(k)) return k;
  }
  if (name == "full-ws" || name == "fullws") return RelKind::FULL_WS;
  return std::nullopt;
}

bool is_wrong_relation(RelKind k) { return k > RelKind::INTS_IN_REGS; }

const char* to_string(StartSet s) {
  switch (s) {
    case StartSet::INIT: return "init";
    case StartSet::QUASI_INIT: return "quasi";
    case StartSet::ANY: return "any";
    case StartSet::TINY: return "tiny";
  }
  return "?";
}

std::optional<StartSet> parse_startset(const std::string& name) {
  if (name == "init") return StartSet::INIT;
  if (name == "quasi" || name == "quasi-init") return StartSet::QUASI_INIT;
  if (name == "any" || name == "arbitrary") return StartSet::ANY;
  if (name == "tiny") return StartSet::TINY;
  return std::nullopt;
}

bool indist_atom(const Relation& rel, const Lattice& lat, const Atom& a, const Atom& b) {
  const bool lo_a = lat.flows_to(a.label, rel.obs);
  const bool lo_b = lat.flows_to(b.label, rel.obs);
  switch (rel.kind) {
    case RelKind::WRONG_HIGH_EQ_ALL:
      if (!lo_a || !lo_b) return true;
      break;
    case RelKind::WRONG_PAYLOAD_ONLY:
      if (!lo_a && !lo_b) return true;
      return a.value == b.value;
    default:
      break;
  }
  return a.label == b.label && (!lo_a || a.value == b.value);
}

bool indist_entry(const Relation& rel, const Lattice& lat, const StackEntry& a,
                  const StackEntry& b) {
  if (a.kind != b.kind) {
    if (rel.kind == RelKind::WRONG_RET_EQ_DATA)
      return !lat.flows_to(a.atom.label, rel.obs) && !lat.flows_to(b.atom.label, rel.obs);
    return false;
  }
  if (a.is_data()) return indist_atom(rel, lat, a.atom, b.atom);
  // return addresses: payload is the (address, arity) pair
  if (a.atom.label != b.atom.label) return false;
  if (!lat.flows_to(a.atom.label, rel.obs)) return true;
  return a.atom.value == b.atom.value && a.ret_returns_value == b.ret_returns_value;
}

bool indist_instr(const Relation& rel, const Lattice& lat, const SInstr& a, const SInstr& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case SOp::Push: return indist_atom(rel, lat, a.imm, b.imm);
    case SOp::Call: return a.call_args == b.call_args && a.returns_value == b.returns_value;
    case SOp::Return: return a.returns_value == b.returns_value;
    default: return true;
  }
}

namespace {

template <class T, class Rel>
bool pointwise(const std::vector<T>& a, const std::vector<T>& b, Rel rel) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!rel(a[i], b[i])) return false;
  return true;
}

bool indist_mems(const Relation& rel, const Lattice& lat, const std::vector<Atom>& a,
                 const std::vector<Atom>& b) {
  return pointwise(a, b, [&](const Atom& x, const Atom& y) { return indist_atom(rel, lat, x, y); });
}

bool indist_imems(const Relation& rel, const Lattice& lat, const SProgram& a, const SProgram& b) {
  return pointwise(a, b,
                   [&](const SInstr& x, const SInstr& y) { return indist_instr(rel, lat, x, y); });
}

bool indist_stacks(const Relation& rel, const Lattice& lat, const std::vector<StackEntry>& a,
                   const std::vector<StackEntry>& b) {
  return pointwise(
      a, b, [&](const StackEntry& x, const StackEntry& y) { return indist_entry(rel, lat, x, y); });
}

}  // namespace

std::vector<StackEntry> crop_stack(const Lattice& lat, Label obs,
                                   const std::vector<StackEntry>& stack) {
  size_t i = 0;
  while (i < stack.size() && !(stack[i].is_ret() && lat.flows_to(stack[i].atom.label, obs))) ++i;
  return std::vector<StackEntry>(stack.begin() + static_cast<int64_t>(i), stack.end());
}

bool indist_state(const Relation& rel, const Lattice& lat, const SState& a, const SState& b) {
  const bool lo_a = lat.flows_to(a.pc.label, rel.obs);
  const bool lo_b = lat.flows_to(b.pc.label, rel.obs);
  switch (rel.kind) {
    case RelKind::MEM:
    case RelKind::WRONG_HIGH_EQ_ALL:
    case RelKind::WRONG_PAYLOAD_ONLY: {
      if (lo_a != lo_b) return false;
      if (!lo_a) return true;
      return indist_mems(rel, lat, a.mem, b.mem) && indist_imems(rel, lat, *a.imem, *b.imem);
    }
    case RelKind::LOW:
    case RelKind::WRONG_RET_EQ_DATA: {
      if (lo_a != lo_b) return false;
      if (!lo_a) return true;
      return indist_mems(rel, lat, a.mem, b.mem) && indist_imems(rel, lat, *a.imem, *b.imem) &&
             indist_stacks(rel, lat, a.stack, b.stack) && indist_atom(rel, lat, a.pc, b.pc);
    }
    case RelKind::FULL:
    case RelKind::WRONG_FULL_STRICT_HIGH: {
      if (a.pc.label != b.pc.label) return false;
      if (!indist_mems(rel, lat, a.mem, b.mem) || !indist_imems(rel, lat, *a.imem, *b.imem))
        return false;
      if (lo_a && lo_b) {
        return indist_stacks(rel, lat, a.stack, b.stack) && indist_atom(rel, lat, a.pc, b.pc);
      }
      if (rel.kind == RelKind::WRONG_FULL_STRICT_HIGH)
        return indist_stacks(rel, lat, a.stack, b.stack);
      return indist_stacks(rel, lat, crop_stack(lat, rel.obs, a.stack),
                           crop_stack(lat, rel.obs, b.stack));
    }
    default:
      throw std::logic_error("relation not applicable to stack-machine states");
  }
}

bool indist_ratom(const Relation& rel, const Lattice& lat, const RAtom& a, const RAtom& b) {
  if (a.label != b.label) return false;
  if (!lat.flows_to(a.label, rel.obs)) return true;
  if (rel.kind == RelKind::INTS_IN_REGS)
    return (a.v.is_int() && b.v.is_int() && a.v.n == b.v.n) || (!a.v.is_int() && !b.v.is_int());
  return a.v == b.v;
}

namespace {

bool indist_rfs(const Relation& rel, const Lattice& lat, const std::vector<RAtom>& a,
                const std::vector<RAtom>& b) {
  return pointwise(a, b,
                   [&](const RAtom& x, const RAtom& y) { return indist_ratom(rel, lat, x, y); });
}

bool frame_low(const Lattice& lat, Label obs, const Frame& f) {
  return lat.flows_to(f.ret_pc.label, obs);
}

bool indist_frames(const Relation& rel, const Lattice& lat, const Frame& a, const Frame& b) {
  bool lo = frame_low(lat, rel.obs, a) || frame_low(lat, rel.obs, b);
  if (rel.kind != RelKind::WRONG_STRICT_FRAMES && !lo) return true;
  return a.ret_pc == b.ret_pc && a.result_reg == b.result_reg &&
         a.result_label == b.result_label && indist_rfs(rel, lat, a.saved_rf, b.saved_rf);
}

bool indist_cs(const Relation& rel, const Lattice& lat, const std::vector<Frame>& a,
               const std::vector<Frame>& b) {
  return pointwise(a, b,
                   [&](const Frame& x, const Frame& y) { return indist_frames(rel, lat, x, y); });
}

std::vector<Frame> drop_high_frames(const Lattice& lat, Label obs, const std::vector<Frame>& cs) {
  size_t i = 0;
  while (i < cs.size() && !frame_low(lat, obs, cs[i])) ++i;
  return std::vector<Frame>(cs.begin() + static_cast<int64_t>(i), cs.end());
}

std::vector<Frame> keep_low_frames(const Lattice& lat, Label obs, const std::vector<Frame>& cs) {
  std::vector<Frame> out;
  for (const Frame& f : cs)
    if (frame_low(lat, obs, f)) out.push_back(f);
  return out;
}

bool indist_rmems(const Relation& rel, const Lattice& lat, const RMemory& a, const RMemory& b) {
  auto visible = [&](const RMemory& m, const RMemory& other) {
    for (auto& [id, blk] : m) {
      if (!lat.flows_to(id.stamp, rel.obs)) continue;
      auto it = other.find(id);
      if (it == other.end()) return false;
    }
    return true;
  };
  if (!visible(a, b) || !visible(b, a)) return false;
  for (auto& [id, blk] : a) {
    if (!lat.flows_to(id.stamp, rel.obs)) continue;
    const RBlock& ob = b.at(id);
    if (blk.label != ob.label) return false;
    if (!lat.flows_to(blk.label, rel.obs)) continue;
    if (!pointwise(blk.cells, ob.cells,
                   [&](const RAtom& x, const RAtom& y) { return indist_ratom(rel, lat, x, y); }))
      return false;
  }
  return true;
}

}  // namespace

bool indist_state(const Relation& rel, const Lattice& lat, const RState& a, const RState& b) {
  switch (rel.kind) {
    case RelKind::INTS_IN_REGS:
      return indist_rfs(rel, lat, a.rf, b.rf);
    case RelKind::FULL_WS:
    case RelKind::WRONG_STRICT_FRAMES:
    case RelKind::WRONG_FILTER_FRAMES:
      break;
    default:
      throw std::logic_error("relation not applicable to register-machine states");
  }
  if (!well_stamped(lat, a) || !well_stamped(lat, b)) return false;
  if (!indist_rmems(rel, lat, a.mem, b.mem)) return false;
  if (!a.imem || !b.imem || *a.imem != *b.imem) return false;

  const bool lo_a = lat.flows_to(a.pc.label, rel.obs);
  const bool lo_b = lat.flows_to(b.pc.label, rel.obs);

  if (rel.kind == RelKind::WRONG_FILTER_FRAMES) {
    if (!indist_cs(rel, lat, keep_low_frames(lat, rel.obs, a.cs),
                   keep_low_frames(lat, rel.obs, b.cs)))
      return false;
    if (lo_a || lo_b) return a.pc == b.pc && indist_rfs(rel, lat, a.rf, b.rf);
    return true;
  }

  if (lo_a || lo_b) {
    return a.pc == b.pc && indist_rfs(rel, lat, a.rf, b.rf) && indist_cs(rel, lat, a.cs, b.cs);
  }
  if (rel.kind == RelKind::WRONG_STRICT_FRAMES) return indist_cs(rel, lat, a.cs, b.cs);
  return indist_cs(rel, lat, drop_high_frames(lat, rel.obs, a.cs),
                   drop_high_frames(lat, rel.obs, b.cs));
}

// ---------------------------------------------------------------------------
// vary

namespace {

using genutil::random_atom;
using genutil::random_high_label;
using genutil::random_label;
using genutil::random_ratom;
using genutil::random_stack;

Atom vary_payload(Rng& rng, const Atom& a, const IntDist& ints) {
  return Atom{ints.draw(rng), a.label};
}

// High atoms get fresh payloads most of the time; keeping the payload now
// and then keeps equal pairs in the support.
Atom maybe_vary_atom(Rng& rng, const Lattice& lat, Label obs, const Atom& a, const IntDist& ints) {
  if (lat.flows_to(a.label, obs)) return a;
  return rng.chance(0.8) ? vary_payload(rng, a, ints) : a;
}

SProgram vary_imem(Rng& rng, const Lattice& lat, Label obs, const SProgram& p,
                   const IntDist& ints) {
  SProgram out = p;
  for (SInstr& i : out)
    if (i.op == SOp::Push) i.imm = maybe_vary_atom(rng, lat, obs, i.imm, ints);
  return out;
}

StackEntry vary_entry(Rng& rng, const Lattice& lat, Label obs, const StackEntry& e,
                      const IntDist& ints) {
  if (e.is_data()) return StackEntry::data(maybe_vary_atom(rng, lat, obs, e.atom, ints));
  if (lat.flows_to(e.atom.label, obs) || !rng.chance(0.8)) return e;
  return StackEntry::ret(ints.draw(rng), rng.chance(0.5), e.atom.label);
}

std::vector<StackEntry> vary_stack_pointwise(Rng& rng, const Lattice& lat, Label obs,
                                             const std::vector<StackEntry>& s,
                                             const IntDist& ints) {
  std::vector<StackEntry> out;
  out.reserve(s.size());
  for (auto& e : s) out.push_back(vary_entry(rng, lat, obs, e, ints));
  return out;
}

// Random stack segment that crops away entirely: data entries are free,
// return addresses must stay invisible.
std::vector<StackEntry> random_high_segment(Rng& rng, const Lattice& lat, Label obs,
                                            const IntDist& ints, bool allow_ret) {
  std::vector<StackEntry> out;
  int n = static_cast<int>(rng.range(0, 3));
  for (int i = 0; i < n; ++i) {
    if (allow_ret && rng.chance(0.25))
      out.push_back(
          StackEntry::ret(ints.draw(rng), rng.chance(0.5), random_high_label(rng, lat, obs)));
    else
      out.push_back(StackEntry::data(random_atom(rng, lat, ints)));
  }
  return out;
}

}  // namespace

SState vary(Rng& rng, const Relation& rel, const Lattice& lat, const SState& s, StartSet start,
            const IntDist& ints) {
  const Label obs = rel.obs;
  SState out = s;
  out.imem = std::make_shared<const SProgram>(vary_imem(rng, lat, obs, *s.imem, ints));

  if (start == StartSet::INIT) return out;  // stack empty, memory pinned low

  const bool low_pc = lat.flows_to(s.pc.label, obs);
  const bool cf = true;

  switch (rel.kind) {
    case RelKind::MEM: {
      if (low_pc) {
        for (Atom& a : out.mem) a = maybe_vary_atom(rng, lat, obs, a, ints);
        // the relation ignores stacks and pc addresses entirely
        if (rng.chance(0.25)) out.stack = random_stack(rng, lat, ints, cf, 4);
        if (start == StartSet::ANY && rng.chance(0.05)) out.pc.value = ints.draw(rng);
      } else {
        if (rng.chance(0.5)) out.pc.value = ints.draw(rng);
        if (rng.chance(0.4)) out.stack = random_stack(rng, lat, ints, cf, 4);
        for (Atom& a : out.mem) a = maybe_vary_atom(rng, lat, obs, a, ints);
      }
      break;
    }
    case RelKind::LOW: {
      if (low_pc) {
        for (Atom& a : out.mem) a = maybe_vary_atom(rng, lat, obs, a, ints);
        out.stack = vary_stack_pointwise(rng, lat, obs, s.stack, ints);
      } else {
        if (rng.chance(0.75)) out.pc.value = ints.draw(rng);
        if (rng.chance(0.4)) out.stack = random_stack(rng, lat, ints, cf, 4);
        for (Atom& a : out.mem) a = maybe_vary_atom(rng, lat, obs, a, ints);
      }
      break;
    }
    case RelKind::FULL: {
      for (Atom& a : out.mem) a = maybe_vary_atom(rng, lat, obs, a, ints);
      if (low_pc) {
        out.stack = vary_stack_pointwise(rng, lat, obs, s.stack, ints);
      } else {
        if (rng.chance(0.75)) out.pc.value = ints.draw(rng);
        // everything above the first visible return address is free
        auto cropped = crop_stack(lat, obs, s.stack);
        size_t kept = cropped.size();
        size_t cut = s.stack.size() - kept;
        std::vector<StackEntry> top;
        if (rng.chance(0.5)) {
          top = random_high_segment(rng, lat, obs, ints, true);
        } else {
          for (size_t i = 0; i < cut; ++i)
            top.push_back(vary_entry(rng, lat, obs, s.stack[i], ints));
        }
        std::vector<StackEntry> rest = vary_stack_pointwise(rng, lat, obs, cropped, ints);
        out.stack = std::move(top);
        out.stack.insert(out.stack.end(), rest.begin(), rest.end());
      }
      break;
    }
    default:
      throw std::logic_error("vary: unsupported relation for stack-machine states");
  }
  return out;
}

namespace {

// Hidden payloads mostly keep their kind when refreshed; a varied label
// stays a label, a pointer points somewhere else. Kind switches stay in
// the support with a small probability.
RAtom refresh_hidden(Rng& rng, const Lattice& lat, const IntDist& ints, const RMemory& mem,
                     Label base, const RAtom& old) {
  RAtom out = old;
  if (rng.chance(0.2)) {
    RAtom any = genutil::random_ratom(rng, lat, ints, mem, lat.join(base, old.label));
    out.v = any.v;
    return out;
  }
  switch (old.v.kind) {
    case RValue::Kind::Int:
      out.v = RValue::integer(ints.draw(rng));
      break;
    case RValue::Kind::Lab:
      out.v = RValue::label(genutil::random_label(rng, lat));
      break;
    case RValue::Kind::Ptr: {
      auto cands = genutil::ptr_candidates(lat, mem, lat.join(base, old.label));
      if (cands.empty()) {
        out.v = RValue::integer(ints.draw(rng));
        break;
      }
      BlockId b = cands[rng.index(cands.size())];
      int64_t size = static_cast<int64_t>(mem.at(b).cells.size());
      int64_t off = rng.chance(0.85) && size > 0 ? rng.range(0, size - 1) : rng.range(-2, size);
      out.v = RValue::pointer(b, off);
      break;
    }
  }
  return out;
}

}  // namespace

RState vary(Rng& rng, const Relation& rel, const Lattice& lat, const RState& s, StartSet start,
            const IntDist& ints) {
  const Label obs = rel.obs;
  auto low = [&](Label l) { return lat.flows_to(l, obs); };

  if (rel.kind == RelKind::INTS_IN_REGS) {
    RState out = s;
    for (RAtom& a : out.rf) {
      if (low(a.label) || !rng.chance(0.8)) continue;
      if (a.v.is_int()) a.v = RValue::integer(ints.draw(rng));
      else if (a.v.is_lab()) a.v = RValue::label(random_label(rng, lat));
    }
    return out;
  }
  if (rel.kind != RelKind::FULL_WS)
    throw std::logic_error("vary: unsupported relation for register-machine states");

  for (int attempt = 0; attempt < 32; ++attempt) {
    RState out = s;

    // memory first: visible-stamp blocks keep their identity, hidden-stamp
    // regions can be reshaped wholesale
    RMemory varied;
    for (auto& [id, blk] : s.mem) {
      if (!low(id.stamp)) continue;
      RBlock nb = blk;
      if (!low(blk.label) && rng.chance(0.5))
        nb.cells.assign(static_cast<size_t>(rng.range(1, 4)), RAtom{});
      varied.emplace(id, std::move(nb));
    }
    bool reshape_hidden = rng.chance(0.5);
    for (Label stamp : lat.labels()) {
      if (low(stamp)) continue;
      if (!reshape_hidden) {
        for (auto& [id, blk] : s.mem)
          if (id.stamp == stamp) varied.emplace(id, blk);
      } else {
        int count = static_cast<int>(rng.range(0, 2));
        for (int i = 0; i < count; ++i) {
          RBlock nb;
          nb.label = random_label(rng, lat);
          nb.cells.assign(static_cast<size_t>(rng.range(1, 4)), RAtom{});
          varied.emplace(BlockId{stamp, i}, std::move(nb));
        }
      }
    }
    // fill contents against the final block set
    for (auto& [id, blk] : varied) {
      auto orig = s.mem.find(id);
      bool keep_shape = orig != s.mem.end() && orig->second.cells.size() == blk.cells.size() &&
                        orig->second.label == blk.label;
      bool fully_hidden = !low(id.stamp) || !low(blk.label);
      for (size_t i = 0; i < blk.cells.size(); ++i) {
        if (keep_shape && !fully_hidden) {
          const RAtom& old = orig->second.cells[i];
          blk.cells[i] = low(old.label) || !rng.chance(0.8)
                             ? old
                             : refresh_hidden(rng, lat, ints, varied, blk.label, old);
        } else if (keep_shape && fully_hidden) {
          blk.cells[i] = rng.chance(0.8) ? random_ratom(rng, lat, ints, varied, blk.label)
                                         : orig->second.cells[i];
        } else {
          blk.cells[i] = random_ratom(rng, lat, ints, varied, blk.label);
        }
      }
    }
    out.mem = std::move(varied);

    // pc
    const bool low_pc = low(s.pc.label);
    if (!low_pc && start != StartSet::QUASI_INIT && start != StartSet::INIT) {
      if (rng.chance(0.75)) out.pc.value = ints.draw(rng);
      if (rng.chance(0.25)) out.pc.label = random_high_label(rng, lat, obs);
    }

    // registers
    auto vary_regs = [&](const std::vector<RAtom>& rf, Label base, bool free) {
      std::vector<RAtom> o;
      o.reserve(rf.size());
      for (auto& a : rf) {
        if (free && rng.chance(0.5)) {
          o.push_back(random_ratom(rng, lat, ints, out.mem, base));
        } else if (!low(a.label) && rng.chance(0.8)) {
          o.push_back(refresh_hidden(rng, lat, ints, out.mem, base, a));
        } else {
          o.push_back(a);
        }
      }
      return o;
    };
    out.rf = vary_regs(s.rf, out.pc.label, !low_pc && rng.chance(0.5));

    // call stack
    auto vary_frame_hidden = [&](const Frame& f) {
      Frame nf = f;
      if (rng.chance(0.5)) nf.ret_pc = Atom{ints.draw(rng), random_high_label(rng, lat, obs)};
      nf.saved_rf = vary_regs(f.saved_rf, nf.ret_pc.label, rng.chance(0.5));
      if (rng.chance(0.25)) nf.result_label = random_label(rng, lat);
      if (!nf.saved_rf.empty() && rng.chance(0.25))
        nf.result_reg = static_cast<int>(rng.index(nf.saved_rf.size()));
      return nf;
    };
    std::vector<Frame> cs;
    if (low_pc) {
      for (const Frame& f : s.cs)
        cs.push_back(low(f.ret_pc.label)
                         ? [&] {
                             Frame nf = f;
                             nf.saved_rf = vary_regs(f.saved_rf, f.ret_pc.label, false);
                             return nf;
                           }()
                         : vary_frame_hidden(f));
    } else {
      size_t cut = 0;
      while (cut < s.cs.size() && !low(s.cs[cut].ret_pc.label)) ++cut;
      if (rng.chance(0.5)) {
        int n = static_cast<int>(rng.range(0, 2));
        for (int i = 0; i < n; ++i) {
          Frame nf;
          nf.ret_pc = Atom{ints.draw(rng), random_high_label(rng, lat, obs)};
          std::vector<RAtom> blank(s.rf.size(), RAtom{});
          nf.saved_rf = vary_regs(blank, nf.ret_pc.label, true);
          nf.result_reg = s.rf.empty() ? 0 : static_cast<int>(rng.index(s.rf.size()));
          nf.result_label = random_label(rng, lat);
          cs.push_back(std::move(nf));
        }
      } else {
        for (size_t i = 0; i < cut; ++i) cs.push_back(vary_frame_hidden(s.cs[i]));
      }
      for (size_t i = cut; i < s.cs.size(); ++i) {
        const Frame& f = s.cs[i];
        if (low(f.ret_pc.label)) {
          Frame nf = f;
          nf.saved_rf = vary_regs(f.saved_rf, f.ret_pc.label, false);
          cs.push_back(std::move(nf));
        } else {
          cs.push_back(vary_frame_hidden(f));
        }
      }
    }
    out.cs = std::move(cs);

    if (indist_state(rel, lat, s, out)) return out;
  }
  return s;  // identical pair is always related and well-stamped
}

}  // namespace flowtest
