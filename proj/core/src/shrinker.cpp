#include "flowtest/shrinker.hpp"

namespace flowtest {

namespace {

// Count of labels strictly below; lowering a label strictly decreases it.
uint64_t label_height(const Lattice& lat, Label l) {
  uint64_t h = 0;
  for (Label x : lat.labels())
    if (x != l && lat.flows_to(x, l)) ++h;
  return h;
}

uint64_t payload_size(int64_t v) {
  uint64_t a = v < 0 ? static_cast<uint64_t>(-(v + 1)) + 1 : static_cast<uint64_t>(v);
  return std::min<uint64_t>(a, 64);
}

uint64_t atom_size(const Lattice& lat, const Atom& a) {
  return 1 + payload_size(a.value) + label_height(lat, a.label);
}

std::vector<int64_t> int_shrinks(int64_t v) {
  std::vector<int64_t> out;
  if (v == 0) return out;
  out.push_back(0);
  if (v / 2 != 0 && v / 2 != v) out.push_back(v / 2);
  int64_t step = v > 0 ? v - 1 : v + 1;
  if (step != 0 && step != v / 2) out.push_back(step);
  return out;
}

std::vector<Label> label_lowers(const Lattice& lat, Label l) {
  std::vector<Label> out;
  for (Label x : lat.labels())
    if (x != l && lat.flows_to(x, l)) out.push_back(x);
  return out;
}

}  // namespace

uint64_t shrink_measure(const Lattice& lat, const SState& s) {
  uint64_t m = 0;
  for (const SInstr& i : *s.imem) {
    switch (i.op) {
      case SOp::Noop: m += 1; break;
      case SOp::Halt: m += 2; break;
      case SOp::Push: m += 3 + payload_size(i.imm.value) + label_height(lat, i.imm.label); break;
      case SOp::Call:
        m += 3 + static_cast<uint64_t>(i.call_args) + (i.returns_value ? 1 : 0);
        break;
      default: m += 3; break;
    }
  }
  for (const StackEntry& e : s.stack)
    m += atom_size(lat, e.atom) + (e.is_ret() && e.ret_returns_value ? 1 : 0);
  for (const Atom& a : s.mem) m += atom_size(lat, a);
  return m;
}

uint64_t shrink_measure(const Lattice& lat, const RState& s) {
  uint64_t m = 0;
  for (const RInstr& i : *s.imem) {
    switch (i.op) {
      case ROp::Noop: m += 1; break;
      case ROp::Halt: m += 2; break;
      default: m += 3 + payload_size(i.n) + label_height(lat, i.lab); break;
    }
  }
  auto ratom_size = [&](const RAtom& a) {
    uint64_t v = 1 + label_height(lat, a.label);
    if (a.v.is_int()) v += payload_size(a.v.n);
    if (a.v.is_lab()) v += 1 + label_height(lat, a.v.lab);
    if (a.v.is_ptr()) v += 2 + payload_size(a.v.n);
    return v;
  };
  for (const RAtom& a : s.rf) m += ratom_size(a);
  for (const Frame& f : s.cs) {
    m += 4 + label_height(lat, f.ret_pc.label) + label_height(lat, f.result_label);
    for (const RAtom& a : f.saved_rf) m += ratom_size(a);
  }
  for (auto& [id, blk] : s.mem) {
    m += 2 + label_height(lat, blk.label);
    for (const RAtom& a : blk.cells) m += ratom_size(a);
  }
  return m;
}

namespace {

struct SCandidates {
  const Relation& rel;
  const Lattice& lat;
  const Variation<SState>& v;
  uint64_t base;
  std::vector<Variation<SState>> out;

  void emit(Variation<SState> c) {
    if (shrink_measure(lat, c) >= base) return;
    if (!indist_state(rel, lat, c.left, c.right)) return;
    out.push_back(std::move(c));
  }

  // applies an instruction edit to both sides
  void imem_edit(size_t i, const SInstr& li, const SInstr& ri) {
    Variation<SState> c = v;
    SProgram pl = *v.left.imem, pr = *v.right.imem;
    pl[i] = li;
    pr[i] = ri;
    c.left.imem = std::make_shared<const SProgram>(std::move(pl));
    c.right.imem = std::make_shared<const SProgram>(std::move(pr));
    emit(std::move(c));
  }

  void remove_instr(size_t i, std::function<void(Variation<SState>&)> extra) {
    Variation<SState> c = v;
    SProgram pl = *v.left.imem, pr = *v.right.imem;
    pl.erase(pl.begin() + static_cast<int64_t>(i));
    pr.erase(pr.begin() + static_cast<int64_t>(i));
    c.left.imem = std::make_shared<const SProgram>(std::move(pl));
    c.right.imem = std::make_shared<const SProgram>(std::move(pr));
    if (extra) extra(c);
    emit(std::move(c));
  }

  void atom_edits(std::function<Atom&(SState&)> loc) {
    Variation<SState> base_c = v;
    const Atom la = loc(base_c.left);
    const Atom ra = loc(base_c.right);
    const bool low = lat.flows_to(la.label, rel.obs);
    if (low) {
      for (int64_t nv : int_shrinks(la.value)) {
        Variation<SState> c = v;
        loc(c.left).value = nv;
        loc(c.right).value = nv;
        emit(std::move(c));
      }
    } else {
      for (int64_t nv : int_shrinks(la.value)) {
        Variation<SState> c = v;
        loc(c.left).value = nv;
        emit(std::move(c));
      }
      for (int64_t nv : int_shrinks(ra.value)) {
        Variation<SState> c = v;
        loc(c.right).value = nv;
        emit(std::move(c));
      }
    }
    if (la.label == ra.label && la.value == ra.value) {
      for (Label low_l : label_lowers(lat, la.label)) {
        Variation<SState> c = v;
        loc(c.left).label = low_l;
        loc(c.right).label = low_l;
        emit(std::move(c));
      }
    }
  }
};

// Positions whose payloads control addresses; a fused Noop removal gets to
// decrement one of them to fix up shifted targets.
void for_each_int_location(Variation<SState>& c,
                           const std::function<void(Atom&, Atom&, size_t)>& fn) {
  size_t idx = 0;
  auto pl = std::make_shared<SProgram>(*c.left.imem);
  auto pr = std::make_shared<SProgram>(*c.right.imem);
  for (size_t i = 0; i < pl->size(); ++i)
    if ((*pl)[i].op == SOp::Push) fn((*pl)[i].imm, (*pr)[i].imm, idx++);
  c.left.imem = pl;
  c.right.imem = pr;
  for (size_t i = 0; i < c.left.stack.size(); ++i)
    if (c.left.stack[i].is_data()) fn(c.left.stack[i].atom, c.right.stack[i].atom, idx++);
  for (size_t i = 0; i < c.left.mem.size(); ++i) fn(c.left.mem[i], c.right.mem[i], idx++);
}

size_t count_int_locations(const Variation<SState>& v) {
  size_t n = 0;
  for (auto& i : *v.left.imem)
    if (i.op == SOp::Push) ++n;
  for (auto& e : v.left.stack)
    if (e.is_data()) ++n;
  n += v.left.mem.size();
  return n;
}

}  // namespace

std::vector<Variation<SState>> shrink_candidates(const Relation& rel, const Lattice& lat,
                                                 const Variation<SState>& v) {
  SCandidates c{rel, lat, v, shrink_measure(lat, v), {}};
  const SProgram& pl = *v.left.imem;
  const SProgram& pr = *v.right.imem;
  const size_t n = pl.size();

  // instructions to Noop, then to Halt
  for (size_t i = 0; i < n; ++i)
    if (pl[i].op != SOp::Noop) c.imem_edit(i, SInstr::noop(), SInstr::noop());
  for (size_t i = 0; i < n; ++i)
    if (pl[i].op != SOp::Noop && pl[i].op != SOp::Halt)
      c.imem_edit(i, SInstr::halt(), SInstr::halt());

  // call shrinking: fewer arguments, no result, or a plain jump
  for (size_t i = 0; i < n; ++i) {
    if (pl[i].op != SOp::Call) continue;
    if (pl[i].call_args > 0) {
      SInstr e = pl[i];
      e.call_args--;
      c.imem_edit(i, e, e);
    }
    if (pl[i].returns_value) {
      SInstr e = pl[i];
      e.returns_value = false;
      c.imem_edit(i, e, e);
    }
    c.imem_edit(i, SInstr::jump(), SInstr::jump());
  }

  // drop memory cells, last first
  for (size_t k = v.left.mem.size(); k-- > 0;) {
    Variation<SState> cand = v;
    cand.left.mem.erase(cand.left.mem.begin() + static_cast<int64_t>(k));
    cand.right.mem.erase(cand.right.mem.begin() + static_cast<int64_t>(k));
    c.emit(std::move(cand));
  }

  // drop stack entries (synchronized; lengths stay equal)
  if (v.left.stack.size() == v.right.stack.size()) {
    for (size_t k = 0; k < v.left.stack.size(); ++k) {
      Variation<SState> cand = v;
      cand.left.stack.erase(cand.left.stack.begin() + static_cast<int64_t>(k));
      cand.right.stack.erase(cand.right.stack.begin() + static_cast<int64_t>(k));
      c.emit(std::move(cand));
    }
  }
  // under the cropped-stack relation the invisible tops shrink per side
  if (rel.kind == RelKind::FULL && !lat.flows_to(v.left.pc.label, rel.obs)) {
    auto side_drop = [&](bool left_side) {
      const auto& stk = left_side ? v.left.stack : v.right.stack;
      size_t cut = stk.size() - crop_stack(lat, rel.obs, stk).size();
      for (size_t k = 0; k < cut; ++k) {
        Variation<SState> cand = v;
        auto& s = left_side ? cand.left.stack : cand.right.stack;
        s.erase(s.begin() + static_cast<int64_t>(k));
        c.emit(std::move(cand));
      }
    };
    side_drop(true);
    side_drop(false);
  }

  // Noop removal, alone and fused with one address decrement
  size_t locs = count_int_locations(v);
  for (size_t i = 0; i < n; ++i) {
    if (pl[i].op != SOp::Noop || pr[i].op != SOp::Noop) continue;
    c.remove_instr(i, nullptr);
    for (size_t target = 0; target < locs; ++target) {
      c.remove_instr(i, [target](Variation<SState>& cand) {
        for_each_int_location(cand, [target](Atom& l, Atom& r, size_t idx) {
          if (idx == target) {
            l.value -= 1;
            r.value -= 1;
          }
        });
      });
    }
  }

  // push immediates, memory and stack atoms
  for (size_t i = 0; i < n; ++i) {
    if (pl[i].op != SOp::Push) continue;
    c.atom_edits([i](SState& s) -> Atom& {
      auto p = std::make_shared<SProgram>(*s.imem);
      Atom& ref = (*p)[i].imm;
      s.imem = std::move(p);
      return ref;
    });
  }
  for (size_t i = 0; i < v.left.mem.size(); ++i)
    c.atom_edits([i](SState& s) -> Atom& { return s.mem[i]; });
  if (v.left.stack.size() == v.right.stack.size()) {
    for (size_t i = 0; i < v.left.stack.size(); ++i) {
      if (v.left.stack[i].kind != v.right.stack[i].kind) continue;
      c.atom_edits([i](SState& s) -> Atom& { return s.stack[i].atom; });
      if (v.left.stack[i].is_ret() && v.left.stack[i].ret_returns_value) {
        Variation<SState> cand = v;
        cand.left.stack[i].ret_returns_value = false;
        cand.right.stack[i].ret_returns_value = false;
        c.emit(std::move(cand));
      }
    }
  }

  // pairs of instructions to Noop in one step
  for (size_t i = 0; i < n; ++i) {
    if (pl[i].op == SOp::Noop) continue;
    for (size_t j = i + 1; j < n; ++j) {
      if (pl[j].op == SOp::Noop) continue;
      Variation<SState> cand = v;
      SProgram npl = pl, npr = pr;
      npl[i] = npl[j] = SInstr::noop();
      npr[i] = npr[j] = SInstr::noop();
      cand.left.imem = std::make_shared<const SProgram>(std::move(npl));
      cand.right.imem = std::make_shared<const SProgram>(std::move(npr));
      c.emit(std::move(cand));
    }
  }
  return std::move(c.out);
}

namespace {

struct RCandidates {
  const Relation& rel;
  const Lattice& lat;
  const Variation<RState>& v;
  uint64_t base;
  std::vector<Variation<RState>> out;

  void emit(Variation<RState> c) {
    if (shrink_measure(lat, c) >= base) return;
    if (!indist_state(rel, lat, c.left, c.right)) return;
    out.push_back(std::move(c));
  }

  void imem_edit(size_t i, const RInstr& e) {
    Variation<RState> c = v;
    RProgram p = *v.left.imem;
    p[i] = e;
    auto shared = std::make_shared<const RProgram>(std::move(p));
    c.left.imem = shared;
    c.right.imem = shared;
    emit(std::move(c));
  }
};

}  // namespace

std::vector<Variation<RState>> shrink_candidates(const Relation& rel, const Lattice& lat,
                                                 const Variation<RState>& v) {
  RCandidates c{rel, lat, v, shrink_measure(lat, v), {}};
  const RProgram& p = *v.left.imem;
  const size_t n = p.size();

  for (size_t i = 0; i < n; ++i)
    if (p[i].op != ROp::Noop) c.imem_edit(i, RInstr{});
  for (size_t i = 0; i < n; ++i)
    if (p[i].op != ROp::Noop && p[i].op != ROp::Halt) c.imem_edit(i, RInstr{ROp::Halt});

  // immediates
  for (size_t i = 0; i < n; ++i) {
    if (p[i].op != ROp::Put && p[i].op != ROp::BranchNZ) continue;
    for (int64_t nv : int_shrinks(p[i].n)) {
      RInstr e = p[i];
      e.n = nv;
      c.imem_edit(i, e);
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (p[i].op != ROp::PutLabel) continue;
    for (Label l : label_lowers(lat, p[i].lab)) {
      RInstr e = p[i];
      e.lab = l;
      c.imem_edit(i, e);
    }
  }

  // drop the top call frame
  if (!v.left.cs.empty() && !v.right.cs.empty()) {
    Variation<RState> cand = v;
    cand.left.cs.erase(cand.left.cs.begin());
    cand.right.cs.erase(cand.right.cs.begin());
    c.emit(std::move(cand));
  }

  // drop memory blocks present on both sides
  for (auto& [id, blk] : v.left.mem) {
    if (!v.right.mem.count(id)) continue;
    Variation<RState> cand = v;
    cand.left.mem.erase(id);
    cand.right.mem.erase(id);
    c.emit(std::move(cand));
  }

  // register atoms: blank, integer shrinks, label lowering
  auto ratom_edits = [&](const std::function<RAtom&(RState&)>& loc) {
    Variation<RState> probe = v;
    const RAtom la = loc(probe.left);
    const RAtom ra = loc(probe.right);
    {
      Variation<RState> cand = v;
      loc(cand.left) = RAtom{RValue::integer(0), lat.bottom()};
      loc(cand.right) = RAtom{RValue::integer(0), lat.bottom()};
      c.emit(std::move(cand));
    }
    const bool low = lat.flows_to(la.label, rel.obs);
    auto shrink_side = [&](bool left_side, const RAtom& a) {
      if (!a.v.is_int()) return;
      for (int64_t nv : int_shrinks(a.v.n)) {
        Variation<RState> cand = v;
        RAtom& target = left_side ? loc(cand.left) : loc(cand.right);
        target.v = RValue::integer(nv);
        if (low) {
          RAtom& other = left_side ? loc(cand.right) : loc(cand.left);
          other.v = RValue::integer(nv);
        }
        c.emit(std::move(cand));
      }
    };
    shrink_side(true, la);
    if (!low) shrink_side(false, ra);
    if (la == ra) {
      for (Label l : label_lowers(lat, la.label)) {
        Variation<RState> cand = v;
        loc(cand.left).label = l;
        loc(cand.right).label = l;
        c.emit(std::move(cand));
      }
    }
  };
  for (size_t i = 0; i < v.left.rf.size() && i < v.right.rf.size(); ++i)
    ratom_edits([i](RState& s) -> RAtom& { return s.rf[i]; });
  for (auto& [id, blk] : v.left.mem) {
    if (!v.right.mem.count(id)) continue;
    if (v.right.mem.at(id).cells.size() != blk.cells.size()) continue;
    for (size_t i = 0; i < blk.cells.size(); ++i) {
      BlockId bid = id;
      ratom_edits([bid, i](RState& s) -> RAtom& { return s.mem.at(bid).cells[i]; });
    }
  }

  // pairs of instructions to Noop
  for (size_t i = 0; i < n; ++i) {
    if (p[i].op == ROp::Noop) continue;
    for (size_t j = i + 1; j < n; ++j) {
      if (p[j].op == ROp::Noop) continue;
      Variation<RState> cand = v;
      RProgram np = p;
      np[i] = np[j] = RInstr{};
      auto shared = std::make_shared<const RProgram>(std::move(np));
      cand.left.imem = shared;
      cand.right.imem = shared;
      c.emit(std::move(cand));
    }
  }
  return std::move(c.out);
}

}  // namespace flowtest
