#include "flowtest/generators.hpp"

#include "gen_util.hpp"

namespace flowtest {

using genutil::random_atom;
using genutil::random_label;
using genutil::random_ratom;
using genutil::random_stack;

const char* to_string(GenKind k) {
  switch (k) {
    case GenKind::NAIVE: return "naive";
    case GenKind::WEIGHTED: return "weighted";
    case GenKind::SEQUENCE: return "sequence";
    case GenKind::SEQUENCE_SMART_INTS: return "seqints";
    case GenKind::BY_EXEC: return "byexec";
    case GenKind::TINY_SSNI: return "tiny";
  }
  return "?";
}

std::optional<GenKind> parse_genkind(const std::string& name) {
  if (name == "naive") return GenKind::NAIVE;
  if (name == "weighted") return GenKind::WEIGHTED;
  if (name == "sequence") return GenKind::SEQUENCE;
  if (name == "seqints" || name == "sequence-smart-ints") return GenKind::SEQUENCE_SMART_INTS;
  if (name == "byexec") return GenKind::BY_EXEC;
  if (name == "tiny") return GenKind::TINY_SSNI;
  return std::nullopt;
}

FreqTable FreqTable::uniform() {
  FreqTable t;
  for (int i = 0; i < kROpCount; ++i) t.weights[static_cast<ROp>(i)] = 1.0;
  t.weights.erase(ROp::Halt);
  return t;
}

FreqTable FreqTable::tuned() {
  // Boosted where the IFC checks reject most generated operands, so the
  // post-probe mix comes out roughly even.
  FreqTable t;
  t.weights[ROp::Put] = 1.2;
  t.weights[ROp::Mov] = 0.6;
  t.weights[ROp::Load] = 1.2;
  t.weights[ROp::Store] = 4.0;
  t.weights[ROp::Add] = 0.5;
  t.weights[ROp::Mult] = 0.5;
  t.weights[ROp::Noop] = 0.25;
  t.weights[ROp::Jump] = 0.8;
  t.weights[ROp::BranchNZ] = 0.8;
  t.weights[ROp::Call] = 2.2;
  t.weights[ROp::Return] = 2.4;
  t.weights[ROp::PutLabel] = 1.2;
  t.weights[ROp::LabelOf] = 0.5;
  t.weights[ROp::PcLabel] = 0.5;
  t.weights[ROp::Join] = 0.5;
  t.weights[ROp::FlowsTo] = 0.5;
  t.weights[ROp::Alloc] = 2.2;
  t.weights[ROp::Write] = 4.5;
  t.weights[ROp::Upgrade] = 6.0;
  t.weights[ROp::Eq] = 0.5;
  t.weights[ROp::GetOffset] = 0.5;
  t.weights[ROp::SetOffset] = 0.8;
  t.weights[ROp::GetBlockSize] = 0.6;
  t.weights[ROp::GetBlockLabel] = 0.6;
  return t;
}

double FreqTable::weight(ROp op) const {
  auto it = weights.find(op);
  return it == weights.end() ? 0.0 : it->second;
}

namespace {

// Non-owning view of a program being built; states used while generating
// point into it without copying.
std::shared_ptr<const SProgram> alias_program(const SProgram& p) {
  return std::shared_ptr<const SProgram>(std::shared_ptr<const SProgram>(), &p);
}
std::shared_ptr<const RProgram> alias_program(const RProgram& p) {
  return std::shared_ptr<const RProgram>(std::shared_ptr<const RProgram>(), &p);
}

struct SOpTable {
  std::vector<SOp> ops;
  std::vector<double> weights;
};

SOpTable stack_op_table(const StackGen& g) {
  SOpTable t;
  t.ops = {SOp::Noop, SOp::Halt, SOp::Push, SOp::Pop, SOp::Load, SOp::Store, SOp::Add};
  if (g.control_flow) {
    t.ops.push_back(SOp::Jump);
    t.ops.push_back(SOp::Call);
    t.ops.push_back(SOp::Return);
  }
  if (g.strategy.kind == GenKind::NAIVE) {
    t.weights.assign(t.ops.size(), 1.0);
  } else {
    double rest = 0.5 / static_cast<double>(t.ops.size() - 2);
    for (SOp op : t.ops) {
      if (op == SOp::Push) t.weights.push_back(0.4);
      else if (op == SOp::Halt) t.weights.push_back(0.1);
      else t.weights.push_back(rest);
    }
  }
  return t;
}

SInstr gen_sinstr_op(Rng& rng, const StackGen& g, SOp op, const IntDist& ints) {
  switch (op) {
    case SOp::Push: return SInstr::push(random_atom(rng, *g.lat, ints));
    case SOp::Call: return SInstr::call(static_cast<int>(rng.range(0, 2)), rng.chance(0.5));
    case SOp::Return: return SInstr::ret(rng.chance(0.5));
    default: return SInstr{op, {}, 0, false};
  }
}

SInstr gen_sinstr(Rng& rng, const StackGen& g, const SOpTable& t, const IntDist& ints) {
  return gen_sinstr_op(rng, g, t.ops[rng.weighted(t.weights)], ints);
}

// Instruction templates that make sense together; addresses are always
// valid ones.
std::vector<SInstr> gen_sequence(Rng& rng, const StackGen& g, const IntDist& ints) {
  const Lattice& lat = *g.lat;
  auto label = [&] { return random_label(rng, lat); };
  // under by-exec the addresses lean public so the varied run mostly
  // touches the same cells; the direct strategies keep the full mix
  bool biased = g.strategy.kind == GenKind::BY_EXEC;
  auto addr_label = [&] {
    return biased && rng.chance(0.7) ? lat.bottom() : random_label(rng, lat);
  };
  auto valid_mem = [&] { return rng.range(0, std::max(0, ints.mem_size - 1)); };
  auto valid_imem = [&] { return rng.range(0, std::max(0, ints.imem_size - 1)); };
  int variants = g.control_flow ? 5 : 3;
  switch (rng.index(static_cast<size_t>(variants))) {
    case 0:
      return {SInstr::push(Atom{ints.draw(rng), label()}),
              SInstr::push(Atom{valid_mem(), addr_label()}), SInstr::store()};
    case 1:
      return {SInstr::push(Atom{valid_mem(), addr_label()}), SInstr::load()};
    case 2:
      return {SInstr::push(Atom{ints.draw(rng), label()}),
              SInstr::push(Atom{ints.draw(rng), label()}), SInstr::add()};
    case 3:
      return {SInstr::push(Atom{valid_imem(), addr_label()}), SInstr::jump()};
    default: {
      int k = static_cast<int>(rng.range(0, 2));
      std::vector<SInstr> out;
      for (int i = 0; i < k; ++i) out.push_back(SInstr::push(Atom{ints.draw(rng), label()}));
      out.push_back(SInstr::push(Atom{valid_imem(), addr_label()}));
      out.push_back(SInstr::call(k, rng.chance(0.5)));
      return out;
    }
  }
}

std::vector<SInstr> gen_candidate(Rng& rng, const StackGen& g, const SOpTable& t,
                                  const IntDist& ints) {
  double p = g.strategy.kind == GenKind::BY_EXEC ? 0.5 : g.strategy.seq_prob;
  bool seq = g.strategy.kind != GenKind::NAIVE && g.strategy.kind != GenKind::WEIGHTED &&
             rng.chance(p);
  if (seq) return gen_sequence(rng, g, ints);
  return {gen_sinstr(rng, g, t, ints)};
}

SProgram gen_direct_program(Rng& rng, const StackGen& g, int len, const IntDist& ints) {
  SOpTable t = stack_op_table(g);
  SProgram out;
  while (static_cast<int>(out.size()) < len) {
    for (SInstr i : gen_candidate(rng, g, t, ints)) {
      if (static_cast<int>(out.size()) >= len) break;
      out.push_back(i);
    }
  }
  return out;
}

SProgram gen_byexec_program(Rng& rng, const StackGen& g, const SState& seed, int len,
                            const IntDist& ints) {
  SOpTable t = stack_op_table(g);
  SProgram prog(static_cast<size_t>(len), SInstr::noop());
  std::vector<bool> filled(static_cast<size_t>(len), false);
  int filled_count = 0;

  SState st = seed;
  st.imem = alias_program(prog);
  SRuleSet correct{g.lat, SMutant::CORRECT};

  auto probe = [&](int lookahead) {
    SState p = st;
    for (int i = 0; i < lookahead; ++i) {
      int64_t idx = p.pc.value;
      if (idx < 0 || idx >= len) return false;
      if (!filled[static_cast<size_t>(idx)]) return true;
      SStepResult r = sstep(correct, p);
      if (!r.ok()) return r.stuck == StuckKind::Halt;
      p = std::move(*r.next);
    }
    return true;
  };

  int exec = 0;
  while (exec < g.strategy.gen_fuel) {
    int64_t idx = st.pc.value;
    if (idx < 0 || idx >= len) break;
    if (filled[static_cast<size_t>(idx)]) {
      SStepResult r = sstep(correct, st);
      if (!r.ok()) break;
      st = std::move(*r.next);
      ++exec;
      continue;
    }
    double frac = static_cast<double>(filled_count) / static_cast<double>(len);
    double p_halt =
        g.strategy.halt_p0 + (g.strategy.halt_p1 - g.strategy.halt_p0) * frac;

    bool committed = false;
    int lookahead = g.control_flow ? g.strategy.lookahead : std::min(g.strategy.lookahead, 1);
    for (int la : {lookahead, 1, 0}) {
      for (int attempt = 0; attempt < 20 && !committed; ++attempt) {
        std::vector<SInstr> cand = rng.chance(p_halt) ? std::vector<SInstr>{SInstr::halt()}
                                                      : gen_candidate(rng, g, t, ints);
        if (idx + static_cast<int64_t>(cand.size()) > len) continue;
        bool free = true;
        for (size_t i = 0; i < cand.size(); ++i)
          if (filled[static_cast<size_t>(idx) + i]) free = false;
        if (!free) continue;
        for (size_t i = 0; i < cand.size(); ++i) {
          prog[static_cast<size_t>(idx) + i] = cand[i];
          filled[static_cast<size_t>(idx) + i] = true;
        }
        int depth = static_cast<int>(cand.size()) + std::max(0, la - 1);
        if (la == 0 || probe(depth)) {
          committed = true;
          filled_count += static_cast<int>(cand.size());
        } else {
          for (size_t i = 0; i < cand.size(); ++i) {
            prog[static_cast<size_t>(idx) + i] = SInstr::noop();
            filled[static_cast<size_t>(idx) + i] = false;
          }
        }
      }
      if (committed) break;
    }
    if (!committed) break;  // cannot happen: lookahead 0 accepts
  }
  return prog;
}

SInstr gen_tiny_instr(Rng& rng, const StackGen& g, const SOpTable& t, const IntDist& ints) {
  return gen_sinstr(rng, g, t, ints);
}

}  // namespace

SState gen_stack_state(Rng& rng, const StackGen& g, StartSet start) {
  const Lattice& lat = *g.lat;
  const GenStrategy& st = g.strategy;
  const bool tiny = st.kind == GenKind::TINY_SSNI;

  int len = tiny ? 2 : static_cast<int>(rng.range(st.imem_min, st.imem_max));
  int mem_size = tiny ? static_cast<int>(rng.range(0, 2))
                      : static_cast<int>(rng.range(st.mem_min, st.mem_max));
  IntDist ints{st.smart_ints(), -20, 20, mem_size, g.control_flow ? len : 0};

  SState s;
  s.pc = Atom{0, lat.bottom()};
  s.mem.assign(static_cast<size_t>(mem_size), Atom{0, lat.bottom()});

  switch (start) {
    case StartSet::INIT:
      break;
    case StartSet::QUASI_INIT:
      for (Atom& a : s.mem) a = random_atom(rng, lat, ints);
      s.stack = random_stack(rng, lat, ints, g.control_flow, 5);
      break;
    case StartSet::ANY:
    case StartSet::TINY:
      for (Atom& a : s.mem) a = random_atom(rng, lat, ints);
      s.stack = random_stack(rng, lat, ints, g.control_flow, tiny ? 3 : 5);
      s.pc.value = rng.chance(0.9) ? rng.range(0, len - 1) : ints.draw(rng);
      s.pc.label = random_label(rng, lat);
      break;
  }

  if (tiny) {
    SOpTable t = stack_op_table(g);
    SProgram prog;
    prog.push_back(gen_tiny_instr(rng, g, t, ints));
    // the second instruction is often a fresh draw of the same shape
    if (rng.chance(0.5)) prog.push_back(gen_sinstr_op(rng, g, prog[0].op, ints));
    else prog.push_back(gen_tiny_instr(rng, g, t, ints));
    s.imem = std::make_shared<const SProgram>(std::move(prog));
    return s;
  }
  if (st.kind == GenKind::BY_EXEC) {
    SProgram prog = gen_byexec_program(rng, g, s, len, ints);
    s.imem = std::make_shared<const SProgram>(std::move(prog));
    return s;
  }
  s.imem = std::make_shared<const SProgram>(gen_direct_program(rng, g, len, ints));
  return s;
}

Variation<SState> gen_pair(Rng& rng, const StackGen& g, StartSet start, const Relation& rel,
                           GenTelemetry* tel) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    SState left = gen_stack_state(rng, g, start);
    IntDist ints{g.strategy.smart_ints(), -20, 20, static_cast<int>(left.mem.size()),
                 g.control_flow ? static_cast<int>(left.imem->size()) : 0};
    SState right = vary(rng, rel, *g.lat, left, start, ints);
    if (tel) tel->pairs++;
    if (indist_state(rel, *g.lat, left, right)) return {std::move(left), std::move(right)};
    if (tel) tel->vary_retries++;
  }
  throw GenerationExhausted("stack variation generation kept violating the relation");
}

// --- register machine ---

namespace {

struct ROpTable {
  std::vector<ROp> ops;
  std::vector<double> weights;
};

ROpTable reg_op_table(const RegisterGen& g, bool include_halt) {
  ROpTable t;
  for (int i = 0; i < kROpCount; ++i) {
    ROp op = static_cast<ROp>(i);
    if (op == ROp::Halt && !include_halt) continue;
    double w = op == ROp::Halt ? 1.0 : g.strategy.freq.weight(op);
    if (w <= 0) continue;
    t.ops.push_back(op);
    t.weights.push_back(w);
  }
  return t;
}

RInstr gen_rinstr(Rng& rng, const RegisterGen& g, const ROpTable& t, const IntDist& ints,
                  const RState* at) {
  RInstr i;
  i.op = t.ops[rng.weighted(t.weights)];
  auto reg = [&] { return static_cast<int>(rng.index(static_cast<size_t>(g.num_regs))); };
  // prefer registers currently holding the payload kind the rule
  // pattern-matches on; the probe rejects far fewer candidates that way
  auto holding = [&](RValue::Kind kind) {
    if (!at || !rng.chance(0.75)) return reg();
    std::vector<int> match;
    for (int r = 0; r < static_cast<int>(at->rf.size()); ++r)
      if (at->rf[static_cast<size_t>(r)].v.kind == kind) match.push_back(r);
    if (match.empty()) return reg();
    return match[rng.index(match.size())];
  };
  i.r1 = reg();
  i.r2 = reg();
  i.r3 = reg();
  switch (i.op) {
    case ROp::Put:
      // sizes for Alloc and offsets want small positives now and then
      i.n = rng.chance(0.3) ? rng.range(1, g.alloc_max) : ints.draw(rng);
      break;
    case ROp::PutLabel:
      i.lab = random_label(rng, *g.lat);
      break;
    case ROp::BranchNZ:
      i.n = rng.range(-3, 5);
      break;
    case ROp::Load:
    case ROp::GetOffset:
    case ROp::GetBlockSize:
    case ROp::GetBlockLabel:
      i.r1 = holding(RValue::Kind::Ptr);
      break;
    case ROp::Store:
    case ROp::Write:
      i.r1 = holding(RValue::Kind::Ptr);
      break;
    case ROp::Upgrade:
      i.r1 = holding(RValue::Kind::Ptr);
      i.r2 = holding(RValue::Kind::Lab);
      break;
    case ROp::SetOffset:
      i.r1 = holding(RValue::Kind::Ptr);
      i.r2 = holding(RValue::Kind::Int);
      break;
    case ROp::Alloc:
      i.r1 = holding(RValue::Kind::Int);
      i.r2 = holding(RValue::Kind::Lab);
      break;
    case ROp::Jump:
      i.r1 = holding(RValue::Kind::Int);
      break;
    case ROp::Call:
      i.r1 = holding(RValue::Kind::Int);
      i.r3 = holding(RValue::Kind::Lab);
      break;
    case ROp::Join:
    case ROp::FlowsTo:
      i.r1 = holding(RValue::Kind::Lab);
      i.r2 = holding(RValue::Kind::Lab);
      break;
    case ROp::Add:
    case ROp::Mult:
      i.r1 = holding(RValue::Kind::Int);
      i.r2 = holding(RValue::Kind::Int);
      break;
    default:
      break;
  }
  return i;
}

RProgram gen_reg_byexec(Rng& rng, const RegisterGen& g, const RState& seed, int len,
                        const IntDist& ints) {
  ROpTable t = reg_op_table(g, false);
  // unprobed commits go to the rules whose checks keep them out otherwise
  ROpTable heavy;
  heavy.ops = {ROp::Store, ROp::Write, ROp::Upgrade, ROp::Return, ROp::Call, ROp::Load};
  heavy.weights = {1.0, 1.0, 1.6, 0.7, 0.5, 0.4};
  RProgram prog(static_cast<size_t>(len), RInstr{});
  std::vector<bool> filled(static_cast<size_t>(len), false);
  int filled_count = 0;

  RState st = seed;
  st.imem = alias_program(prog);
  RRuleSet correct{g.lat, RMutant::CORRECT};

  auto probe = [&](int lookahead) {
    RState p = st;
    for (int i = 0; i < lookahead; ++i) {
      int64_t idx = p.pc.value;
      if (idx < 0 || idx >= len) return false;
      if (!filled[static_cast<size_t>(idx)]) return true;
      RStepResult r = rstep(correct, p);
      if (!r.ok()) return r.stuck == StuckKind::Halt;
      p = std::move(*r.next);
    }
    return true;
  };

  int exec = 0;
  while (exec < g.strategy.gen_fuel) {
    int64_t idx = st.pc.value;
    if (idx < 0 || idx >= len) break;
    if (filled[static_cast<size_t>(idx)]) {
      RStepResult r = rstep(correct, st);
      if (!r.ok()) break;
      st = std::move(*r.next);
      ++exec;
      continue;
    }
    double frac = static_cast<double>(filled_count) / static_cast<double>(len);
    double p_halt = g.strategy.halt_p0 + (g.strategy.halt_p1 - g.strategy.halt_p0) * frac;

    bool committed = false;
    bool skip_probe = rng.chance(g.strategy.probe_skip);
    for (int la : {g.strategy.lookahead, 1, 0}) {
      for (int attempt = 0; attempt < 20 && !committed; ++attempt) {
        const ROpTable& table = skip_probe ? heavy : t;
        RInstr cand =
            rng.chance(p_halt) ? RInstr{ROp::Halt} : gen_rinstr(rng, g, table, ints, &st);
        prog[static_cast<size_t>(idx)] = cand;
        filled[static_cast<size_t>(idx)] = true;
        if (la == 0 || skip_probe || probe(la)) {
          committed = true;
          ++filled_count;
        } else {
          prog[static_cast<size_t>(idx)] = RInstr{};
          filled[static_cast<size_t>(idx)] = false;
        }
      }
      if (committed) break;
    }
    if (!committed) break;
  }
  return prog;
}

RState random_rstate(Rng& rng, const RegisterGen& g, int len, bool tiny, bool pin_pc) {
  const Lattice& lat = *g.lat;
  IntDist ints{true, -10, 10, 0, len};
  RState s;

  int blocks = tiny ? static_cast<int>(rng.range(0, 1)) : static_cast<int>(rng.range(0, 4));
  std::map<uint8_t, int32_t> next_index;
  for (int i = 0; i < blocks; ++i) {
    Label stamp = random_label(rng, lat);
    RBlock b;
    b.label = random_label(rng, lat);
    b.cells.assign(static_cast<size_t>(rng.range(1, tiny ? 2 : g.alloc_max)), RAtom{});
    s.mem.emplace(BlockId{stamp, next_index[stamp.id]++}, std::move(b));
  }
  for (auto& [id, blk] : s.mem)
    for (RAtom& a : blk.cells) a = random_ratom(rng, lat, ints, s.mem, blk.label);

  if (pin_pc) {
    s.pc = Atom{0, lat.bottom()};
  } else {
    s.pc.value = rng.chance(0.9) ? rng.range(0, std::max(0, len - 1)) : ints.draw(rng);
    s.pc.label = random_label(rng, lat);
  }

  s.rf.reserve(static_cast<size_t>(g.num_regs));
  for (int i = 0; i < g.num_regs; ++i)
    s.rf.push_back(random_ratom(rng, lat, ints, s.mem, s.pc.label));

  int frames = pin_pc || tiny ? 0 : static_cast<int>(rng.range(0, 2));
  for (int i = 0; i < frames; ++i) {
    Frame f;
    f.ret_pc = Atom{rng.range(0, std::max(0, len - 1)), random_label(rng, lat)};
    for (int r = 0; r < g.num_regs; ++r)
      f.saved_rf.push_back(random_ratom(rng, lat, ints, s.mem, f.ret_pc.label));
    f.result_reg = static_cast<int>(rng.index(static_cast<size_t>(g.num_regs)));
    f.result_label = random_label(rng, lat);
    s.cs.push_back(std::move(f));
  }
  return s;
}

}  // namespace

RState gen_register_any(Rng& rng, const RegisterGen& g) {
  int len = static_cast<int>(rng.range(g.strategy.imem_min, g.strategy.imem_max));
  for (int attempt = 0; attempt < 16; ++attempt) {
    RState s = random_rstate(rng, g, len, false, false);
    if (well_stamped(*g.lat, s)) return s;
  }
  throw GenerationExhausted("generated register states keep violating well-stampedness");
}

RState gen_register_state(Rng& rng, const RegisterGen& g, StartSet start) {
  const Lattice& lat = *g.lat;
  const bool tiny = g.strategy.kind == GenKind::TINY_SSNI || start == StartSet::TINY;
  int len = tiny ? 2 : static_cast<int>(rng.range(g.strategy.imem_min, g.strategy.imem_max));
  IntDist ints{g.strategy.smart_ints(), -10, 10, 0, len};

  RState s;
  switch (start) {
    case StartSet::INIT: {
      // empty memory and call stack; registers carry integers and labels
      s.pc = Atom{0, lat.bottom()};
      for (int i = 0; i < g.num_regs; ++i) {
        if (rng.chance(0.4))
          s.rf.push_back(RAtom{RValue::label(random_label(rng, lat)), random_label(rng, lat)});
        else
          s.rf.push_back(RAtom{RValue::integer(ints.draw(rng)), random_label(rng, lat)});
      }
      break;
    }
    case StartSet::QUASI_INIT:
      s = random_rstate(rng, g, len, tiny, true);
      break;
    case StartSet::ANY:
    case StartSet::TINY:
      s = random_rstate(rng, g, len, tiny, false);
      break;
  }

  if (tiny) {
    ROpTable t = reg_op_table(g, true);
    RProgram prog;
    RInstr first = gen_rinstr(rng, g, t, ints, &s);
    prog.push_back(first);
    if (rng.chance(0.5)) {
      RInstr second = gen_rinstr(rng, g, t, ints, &s);
      second.op = first.op;
      prog.push_back(second);
    } else {
      prog.push_back(gen_rinstr(rng, g, t, ints, &s));
    }
    s.imem = std::make_shared<const RProgram>(std::move(prog));
    return s;
  }

  if (g.strategy.kind == GenKind::BY_EXEC) {
    RProgram prog = gen_reg_byexec(rng, g, s, len, ints);
    s.imem = std::make_shared<const RProgram>(std::move(prog));
    return s;
  }
  ROpTable t = reg_op_table(g, true);
  RProgram prog;
  for (int i = 0; i < len; ++i) prog.push_back(gen_rinstr(rng, g, t, ints, nullptr));
  s.imem = std::make_shared<const RProgram>(std::move(prog));
  return s;
}

Variation<RState> gen_pair(Rng& rng, const RegisterGen& g, StartSet start, const Relation& rel,
                           GenTelemetry* tel) {
  for (int attempt = 0; attempt < 16; ++attempt) {
    RState left = gen_register_state(rng, g, start);
    if (rel.kind == RelKind::FULL_WS && !well_stamped(*g.lat, left)) continue;
    IntDist ints{g.strategy.smart_ints(), -10, 10, 0,
                 static_cast<int>(left.imem ? left.imem->size() : 0)};
    RState right = vary(rng, rel, *g.lat, left, start, ints);
    if (tel) tel->pairs++;
    if (indist_state(rel, *g.lat, left, right)) return {std::move(left), std::move(right)};
    if (tel) tel->vary_retries++;
  }
  throw GenerationExhausted("register variation generation kept violating the relation");
}

}  // namespace flowtest
