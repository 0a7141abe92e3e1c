#include "flowtest/register_machine.hpp"

#include <sstream>

namespace flowtest {

namespace {
constexpr int64_t kMaxBlockCells = 1024;  // Alloc premise: larger requests fail
}

const char* to_string(ROp op) {
  switch (op) {
    case ROp::Put: return "Put";
    case ROp::Mov: return "Mov";
    case ROp::Load: return "Load";
    case ROp::Store: return "Store";
    case ROp::Add: return "Add";
    case ROp::Mult: return "Mult";
    case ROp::Noop: return "Noop";
    case ROp::Halt: return "Halt";
    case ROp::Jump: return "Jump";
    case ROp::BranchNZ: return "BranchNZ";
    case ROp::Call: return "Call";
    case ROp::Return: return "Return";
    case ROp::PutLabel: return "PutLabel";
    case ROp::LabelOf: return "LabelOf";
    case ROp::PcLabel: return "PcLabel";
    case ROp::Join: return "Join";
    case ROp::FlowsTo: return "FlowsTo";
    case ROp::Alloc: return "Alloc";
    case ROp::Write: return "Write";
    case ROp::Upgrade: return "Upgrade";
    case ROp::Eq: return "Eq";
    case ROp::GetOffset: return "GetOffset";
    case ROp::SetOffset: return "SetOffset";
    case ROp::GetBlockSize: return "GetBlockSize";
    case ROp::GetBlockLabel: return "GetBlockLabel";
  }
  return "?";
}

const char* to_string(RMutant m) {
  switch (m) {
    case RMutant::CORRECT: return "CORRECT";
    case RMutant::MOV_NO_TAINT: return "MOV_NO_TAINT";
    case RMutant::LOAD_TAINT_TO_VALUE: return "LOAD_TAINT_TO_VALUE";
    case RMutant::LOAD_NO_PTR_TAINT: return "LOAD_NO_PTR_TAINT";
    case RMutant::LOAD_NO_BLOCK_TAINT: return "LOAD_NO_BLOCK_TAINT";
    case RMutant::STORE_NO_PC_CHECK: return "STORE_NO_PC_CHECK";
    case RMutant::STORE_NO_PTR_CHECK: return "STORE_NO_PTR_CHECK";
    case RMutant::STORE_NO_CHECK: return "STORE_NO_CHECK";
    case RMutant::ADD_NO_TAINT: return "ADD_NO_TAINT";
    case RMutant::MULT_NO_TAINT: return "MULT_NO_TAINT";
    case RMutant::NOOP_LOWER_PC: return "NOOP_LOWER_PC";
    case RMutant::JUMP_NO_RAISE_PC: return "JUMP_NO_RAISE_PC";
    case RMutant::JUMP_LOWER_PC: return "JUMP_LOWER_PC";
    case RMutant::BRANCH_NO_RAISE_PC: return "BRANCH_NO_RAISE_PC";
    case RMutant::BRANCH_LOWER_PC: return "BRANCH_LOWER_PC";
    case RMutant::CALL_NO_RAISE_PC: return "CALL_NO_RAISE_PC";
    case RMutant::CALL_LOWER_PC: return "CALL_LOWER_PC";
    case RMutant::CALL_NO_LABEL_TAINT_RET: return "CALL_NO_LABEL_TAINT_RET";
    case RMutant::RETURN_NO_PC_CHECK: return "RETURN_NO_PC_CHECK";
    case RMutant::RETURN_NO_VALUE_CHECK: return "RETURN_NO_VALUE_CHECK";
    case RMutant::RETURN_NO_CHECK: return "RETURN_NO_CHECK";
    case RMutant::RETURN_KEEP_LABEL: return "RETURN_KEEP_LABEL";
    case RMutant::ALLOC_NO_SIZE_TAINT: return "ALLOC_NO_SIZE_TAINT";
    case RMutant::ALLOC_NO_LABEL_TAINT: return "ALLOC_NO_LABEL_TAINT";
    case RMutant::WRITE_NO_PC_CHECK: return "WRITE_NO_PC_CHECK";
    case RMutant::WRITE_NO_PTR_CHECK: return "WRITE_NO_PTR_CHECK";
    case RMutant::WRITE_NO_VALUE_CHECK: return "WRITE_NO_VALUE_CHECK";
    case RMutant::WRITE_REPLACE_LABEL: return "WRITE_REPLACE_LABEL";
    case RMutant::UPGRADE_NO_VALUE_CHECK: return "UPGRADE_NO_VALUE_CHECK";
    case RMutant::UPGRADE_NO_PC_CHECK: return "UPGRADE_NO_PC_CHECK";
    case RMutant::UPGRADE_NO_PTR_CHECK: return "UPGRADE_NO_PTR_CHECK";
    case RMutant::UPGRADE_NO_RAISE_PC: return "UPGRADE_NO_RAISE_PC";
    case RMutant::UPGRADE_NO_WRITE_CHECK: return "UPGRADE_NO_WRITE_CHECK";
    case RMutant::GETOFF_NO_TAINT: return "GETOFF_NO_TAINT";
    case RMutant::SETOFF_NO_OFFSET_TAINT: return "SETOFF_NO_OFFSET_TAINT";
    case RMutant::SETOFF_NO_PTR_TAINT: return "SETOFF_NO_PTR_TAINT";
    case RMutant::SIZE_NO_RAISE_PC: return "SIZE_NO_RAISE_PC";
    case RMutant::SIZE_NO_TAINT: return "SIZE_NO_TAINT";
    case RMutant::LABEL_NO_PTR_TAINT: return "LABEL_NO_PTR_TAINT";
  }
  return "?";
}

std::optional<RMutant> parse_rmutant(const std::string& name) {
  for (int i = 0; i <= kRMutantCount; ++i) {
    auto m = static_cast<RMutant>(i);
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::vector<RMutant> all_rmutants() {
  std::vector<RMutant> out;
  for (int i = 1; i <= kRMutantCount; ++i) out.push_back(static_cast<RMutant>(i));
  return out;
}

ROp rmutant_rule(RMutant m) {
  switch (m) {
    case RMutant::MOV_NO_TAINT: return ROp::Mov;
    case RMutant::LOAD_TAINT_TO_VALUE:
    case RMutant::LOAD_NO_PTR_TAINT:
    case RMutant::LOAD_NO_BLOCK_TAINT: return ROp::Load;
    case RMutant::STORE_NO_PC_CHECK:
    case RMutant::STORE_NO_PTR_CHECK:
    case RMutant::STORE_NO_CHECK: return ROp::Store;
    case RMutant::ADD_NO_TAINT: return ROp::Add;
    case RMutant::MULT_NO_TAINT: return ROp::Mult;
    case RMutant::NOOP_LOWER_PC: return ROp::Noop;
    case RMutant::JUMP_NO_RAISE_PC:
    case RMutant::JUMP_LOWER_PC: return ROp::Jump;
    case RMutant::BRANCH_NO_RAISE_PC:
    case RMutant::BRANCH_LOWER_PC: return ROp::BranchNZ;
    case RMutant::CALL_NO_RAISE_PC:
    case RMutant::CALL_LOWER_PC:
    case RMutant::CALL_NO_LABEL_TAINT_RET: return ROp::Call;
    case RMutant::RETURN_NO_PC_CHECK:
    case RMutant::RETURN_NO_VALUE_CHECK:
    case RMutant::RETURN_NO_CHECK:
    case RMutant::RETURN_KEEP_LABEL: return ROp::Return;
    case RMutant::ALLOC_NO_SIZE_TAINT:
    case RMutant::ALLOC_NO_LABEL_TAINT: return ROp::Alloc;
    case RMutant::WRITE_NO_PC_CHECK:
    case RMutant::WRITE_NO_PTR_CHECK:
    case RMutant::WRITE_NO_VALUE_CHECK:
    case RMutant::WRITE_REPLACE_LABEL: return ROp::Write;
    case RMutant::UPGRADE_NO_VALUE_CHECK:
    case RMutant::UPGRADE_NO_PC_CHECK:
    case RMutant::UPGRADE_NO_PTR_CHECK:
    case RMutant::UPGRADE_NO_RAISE_PC:
    case RMutant::UPGRADE_NO_WRITE_CHECK: return ROp::Upgrade;
    case RMutant::GETOFF_NO_TAINT: return ROp::GetOffset;
    case RMutant::SETOFF_NO_OFFSET_TAINT:
    case RMutant::SETOFF_NO_PTR_TAINT: return ROp::SetOffset;
    case RMutant::SIZE_NO_RAISE_PC:
    case RMutant::SIZE_NO_TAINT: return ROp::GetBlockSize;
    case RMutant::LABEL_NO_PTR_TAINT: return ROp::GetBlockLabel;
    case RMutant::CORRECT: break;
  }
  return ROp::Noop;
}

namespace {

RStepResult stuck(StuckKind k) { return RStepResult{std::nullopt, k}; }

struct Operands {
  const Lattice& lat;
  const RState& s;
  StuckKind fail = StuckKind::TypeError;
  bool bad = false;

  const RAtom* reg(int r) {
    if (r < 0 || r >= static_cast<int>(s.rf.size())) {
      bad = true;
      fail = StuckKind::TypeError;
      return nullptr;
    }
    return &s.rf[static_cast<size_t>(r)];
  }
  // Premises pattern-match on payload shapes; a mismatch means no step.
  std::optional<std::pair<int64_t, Label>> as_int(int r) {
    auto* a = reg(r);
    if (!a || !a->v.is_int()) {
      bad = true;
      return std::nullopt;
    }
    return std::make_pair(a->v.n, a->label);
  }
  std::optional<std::pair<Label, Label>> as_lab(int r) {
    auto* a = reg(r);
    if (!a || !a->v.is_lab()) {
      bad = true;
      return std::nullopt;
    }
    return std::make_pair(a->v.lab, a->label);
  }
  struct Ptr {
    BlockId blk;
    int64_t off;
    Label label;
  };
  std::optional<Ptr> as_ptr(int r) {
    auto* a = reg(r);
    if (!a || !a->v.is_ptr()) {
      bad = true;
      return std::nullopt;
    }
    return Ptr{a->v.blk, a->v.n, a->label};
  }
  const RBlock* block(BlockId b) {
    auto it = s.mem.find(b);
    if (it == s.mem.end()) {
      bad = true;
      fail = StuckKind::AddressOutOfRange;
      return nullptr;
    }
    return &it->second;
  }
  const RAtom* cell(const RBlock* blk, int64_t off) {
    if (!blk) return nullptr;
    if (off < 0 || off >= static_cast<int64_t>(blk->cells.size())) {
      bad = true;
      fail = StuckKind::AddressOutOfRange;
      return nullptr;
    }
    return &blk->cells[static_cast<size_t>(off)];
  }
};

}  // namespace

BlockId fresh(const RMemory& mem, Label stamp) {
  int32_t i = 0;
  for (auto it = mem.lower_bound(BlockId{stamp, 0});
       it != mem.end() && it->first.stamp == stamp; ++it) {
    if (it->first.index == i)
      ++i;
    else if (it->first.index > i)
      break;
  }
  return BlockId{stamp, i};
}

RStepResult rstep(const RRuleSet& rules, const RState& s) {
  const Lattice& lat = *rules.lat;
  const RMutant bug = rules.mutant;
  const RInstr* ip = s.fetch();
  if (!ip) return stuck(StuckKind::EndOfStream);
  const Label pcl = s.pc.label;
  const Label bot = lat.bottom();
  Operands o{lat, s};

  auto put = [&](int rd, RAtom a, Label pc_label) -> RStepResult {
    if (rd < 0 || rd >= static_cast<int>(s.rf.size())) return stuck(StuckKind::TypeError);
    RState n = s;
    n.rf[static_cast<size_t>(rd)] = a;
    n.pc = Atom{s.pc.value + 1, pc_label};
    return RStepResult{std::move(n), StuckKind::Halt};
  };

  switch (ip->op) {
    case ROp::Noop: {
      RState n = s;
      n.pc = Atom{s.pc.value + 1, bug == RMutant::NOOP_LOWER_PC ? bot : pcl};
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::Halt:
      return stuck(StuckKind::Halt);

    case ROp::Put:
      return put(ip->r1, RAtom{RValue::integer(ip->n), bot}, pcl);

    case ROp::Mov: {
      auto* a = o.reg(ip->r1);
      if (!a) return stuck(o.fail);
      RAtom out = *a;
      if (bug == RMutant::MOV_NO_TAINT) out.label = bot;
      return put(ip->r2, out, pcl);
    }

    case ROp::Load: {
      auto p = o.as_ptr(ip->r1);
      if (!p) return stuck(o.fail);
      auto* blk = o.block(p->blk);
      auto* cell = o.cell(blk, p->off);
      if (!cell) return stuck(o.fail);
      RAtom out = *cell;
      Label pc_label = lat.join(pcl, lat.join(p->label, blk->label));
      switch (bug) {
        case RMutant::LOAD_TAINT_TO_VALUE:
          out.label = lat.join(out.label, blk->label);
          pc_label = lat.join(pcl, p->label);
          break;
        case RMutant::LOAD_NO_PTR_TAINT: pc_label = lat.join(pcl, blk->label); break;
        case RMutant::LOAD_NO_BLOCK_TAINT: pc_label = lat.join(pcl, p->label); break;
        default: break;
      }
      return put(ip->r2, out, pc_label);
    }

    case ROp::Store: {
      auto p = o.as_ptr(ip->r1);
      auto* v = o.reg(ip->r2);
      if (!p || !v) return stuck(o.fail);
      auto* blk = o.block(p->blk);
      if (!blk) return stuck(o.fail);
      if (!o.cell(blk, p->off)) return stuck(o.fail);
      Label check = lat.join(pcl, p->label);
      if (bug == RMutant::STORE_NO_PC_CHECK) check = p->label;
      if (bug == RMutant::STORE_NO_PTR_CHECK) check = pcl;
      if (bug != RMutant::STORE_NO_CHECK && !lat.flows_to(check, blk->label))
        return stuck(StuckKind::IfcCheckFailed);
      RState n = s;
      n.mem[p->blk].cells[static_cast<size_t>(p->off)] = *v;
      n.pc = Atom{s.pc.value + 1, pcl};
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::Add:
    case ROp::Mult: {
      auto a = o.as_int(ip->r1);
      auto b = o.as_int(ip->r2);
      if (!a || !b) return stuck(o.fail);
      int64_t r = ip->op == ROp::Add ? a->first + b->first : a->first * b->first;
      bool drop = (ip->op == ROp::Add && bug == RMutant::ADD_NO_TAINT) ||
                  (ip->op == ROp::Mult && bug == RMutant::MULT_NO_TAINT);
      Label lbl = drop ? a->second : lat.join(a->second, b->second);
      return put(ip->r3, RAtom{RValue::integer(r), lbl}, pcl);
    }

    case ROp::Jump: {
      auto t = o.as_int(ip->r1);
      if (!t) return stuck(o.fail);
      Label lbl = lat.join(pcl, t->second);
      if (bug == RMutant::JUMP_NO_RAISE_PC) lbl = pcl;
      if (bug == RMutant::JUMP_LOWER_PC) lbl = t->second;
      RState n = s;
      n.pc = Atom{t->first, lbl};
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::BranchNZ: {
      auto t = o.as_int(ip->r1);
      if (!t) return stuck(o.fail);
      int64_t target = t->first != 0 ? s.pc.value + ip->n : s.pc.value + 1;
      Label lbl = lat.join(pcl, t->second);
      if (bug == RMutant::BRANCH_NO_RAISE_PC) lbl = pcl;
      if (bug == RMutant::BRANCH_LOWER_PC) lbl = t->second;
      RState n = s;
      n.pc = Atom{target, lbl};
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::Call: {
      auto t = o.as_int(ip->r1);
      auto l = o.as_lab(ip->r3);
      if (!t || !l) return stuck(o.fail);
      if (ip->r2 < 0 || ip->r2 >= static_cast<int>(s.rf.size())) return stuck(StuckKind::TypeError);
      Label ret_label = lat.join(pcl, l->second);
      if (bug == RMutant::CALL_NO_LABEL_TAINT_RET) ret_label = pcl;
      Label pc_label = lat.join(pcl, t->second);
      if (bug == RMutant::CALL_NO_RAISE_PC) pc_label = pcl;
      if (bug == RMutant::CALL_LOWER_PC) pc_label = t->second;
      Frame f;
      f.ret_pc = Atom{s.pc.value + 1, ret_label};
      f.saved_rf = s.rf;
      f.result_reg = ip->r2;
      f.result_label = l->first;
      RState n = s;
      n.cs.insert(n.cs.begin(), std::move(f));
      n.pc = Atom{t->first, pc_label};
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::Return: {
      if (s.cs.empty()) return stuck(StuckKind::StackUnderflow);
      const Frame& f = s.cs.front();
      if (f.result_reg < 0 || f.result_reg >= static_cast<int>(f.saved_rf.size()) ||
          f.result_reg >= static_cast<int>(s.rf.size()))
        return stuck(StuckKind::TypeError);
      RAtom result = s.rf[static_cast<size_t>(f.result_reg)];
      Label lhs = lat.join(result.label, pcl);
      if (bug == RMutant::RETURN_NO_PC_CHECK) lhs = result.label;
      if (bug == RMutant::RETURN_NO_VALUE_CHECK) lhs = pcl;
      Label rhs = lat.join(f.result_label, f.ret_pc.label);
      if (bug != RMutant::RETURN_NO_CHECK && !lat.flows_to(lhs, rhs))
        return stuck(StuckKind::IfcCheckFailed);
      RState n = s;
      n.rf = f.saved_rf;
      result.label = bug == RMutant::RETURN_KEEP_LABEL ? result.label : f.result_label;
      n.rf[static_cast<size_t>(f.result_reg)] = result;
      n.pc = f.ret_pc;
      n.cs.erase(n.cs.begin());
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::PutLabel:
      return put(ip->r1, RAtom{RValue::label(ip->lab), bot}, pcl);

    case ROp::LabelOf: {
      auto* a = o.reg(ip->r1);
      if (!a) return stuck(o.fail);
      return put(ip->r2, RAtom{RValue::label(a->label), bot}, pcl);
    }

    case ROp::PcLabel:
      return put(ip->r1, RAtom{RValue::label(pcl), bot}, pcl);

    case ROp::Join: {
      auto a = o.as_lab(ip->r1);
      auto b = o.as_lab(ip->r2);
      if (!a || !b) return stuck(o.fail);
      return put(ip->r3, RAtom{RValue::label(lat.join(a->first, b->first)),
                               lat.join(a->second, b->second)},
                 pcl);
    }

    case ROp::FlowsTo: {
      auto a = o.as_lab(ip->r1);
      auto b = o.as_lab(ip->r2);
      if (!a || !b) return stuck(o.fail);
      return put(ip->r3, RAtom{RValue::integer(lat.flows_to(a->first, b->first) ? 1 : 0),
                               lat.join(a->second, b->second)},
                 pcl);
    }

    case ROp::Alloc: {
      auto sz = o.as_int(ip->r1);
      auto l = o.as_lab(ip->r2);
      if (!sz || !l) return stuck(o.fail);
      if (sz->first <= 0 || sz->first > kMaxBlockCells) return stuck(StuckKind::AddressOutOfRange);
      Label stamp = lat.join(pcl, lat.join(sz->second, l->second));
      BlockId b = fresh(s.mem, stamp);
      Label ptr_label = lat.join(sz->second, l->second);
      if (bug == RMutant::ALLOC_NO_SIZE_TAINT) ptr_label = l->second;
      if (bug == RMutant::ALLOC_NO_LABEL_TAINT) ptr_label = sz->second;
      RState n = s;
      RBlock blk;
      blk.cells.assign(static_cast<size_t>(sz->first), RAtom{RValue::integer(0), bot});
      blk.label = l->first;
      n.mem.emplace(b, std::move(blk));
      if (ip->r3 < 0 || ip->r3 >= static_cast<int>(s.rf.size())) return stuck(StuckKind::TypeError);
      n.rf[static_cast<size_t>(ip->r3)] = RAtom{RValue::pointer(b, 0), ptr_label};
      n.pc = Atom{s.pc.value + 1, pcl};
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::Write: {
      auto p = o.as_ptr(ip->r1);
      auto* v = o.reg(ip->r2);
      if (!p || !v) return stuck(o.fail);
      auto* blk = o.block(p->blk);
      auto* old = o.cell(blk, p->off);
      if (!old) return stuck(o.fail);
      Label lhs = lat.join(pcl, lat.join(p->label, v->label));
      if (bug == RMutant::WRITE_NO_PC_CHECK) lhs = lat.join(p->label, v->label);
      if (bug == RMutant::WRITE_NO_PTR_CHECK) lhs = lat.join(pcl, v->label);
      if (bug == RMutant::WRITE_NO_VALUE_CHECK) lhs = lat.join(pcl, p->label);
      if (!lat.flows_to(lhs, lat.join(blk->label, old->label)))
        return stuck(StuckKind::IfcCheckFailed);
      Label kept = bug == RMutant::WRITE_REPLACE_LABEL ? v->label : old->label;
      RState n = s;
      n.mem[p->blk].cells[static_cast<size_t>(p->off)] = RAtom{v->v, kept};
      n.pc = Atom{s.pc.value + 1, pcl};
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::Upgrade: {
      auto p = o.as_ptr(ip->r1);
      auto l = o.as_lab(ip->r2);
      if (!p || !l) return stuck(o.fail);
      auto* blk = o.block(p->blk);
      auto* old = o.cell(blk, p->off);
      if (!old) return stuck(o.fail);
      Label pc_after = bug == RMutant::UPGRADE_NO_RAISE_PC ? pcl : lat.join(pcl, l->second);
      if (bug != RMutant::UPGRADE_NO_VALUE_CHECK &&
          !lat.flows_to(old->label, lat.join(l->first, blk->label)))
        return stuck(StuckKind::IfcCheckFailed);
      Label lhs = lat.join(pc_after, p->label);
      if (bug == RMutant::UPGRADE_NO_PC_CHECK) lhs = p->label;
      if (bug == RMutant::UPGRADE_NO_PTR_CHECK) lhs = pc_after;
      if (bug != RMutant::UPGRADE_NO_WRITE_CHECK && !lat.flows_to(lhs, blk->label))
        return stuck(StuckKind::IfcCheckFailed);
      RState n = s;
      n.mem[p->blk].cells[static_cast<size_t>(p->off)].label = l->first;
      n.pc = Atom{s.pc.value + 1, pc_after};
      return RStepResult{std::move(n), StuckKind::Halt};
    }

    case ROp::Eq: {
      auto* a = o.reg(ip->r1);
      auto* b = o.reg(ip->r2);
      if (!a || !b) return stuck(o.fail);
      return put(ip->r3, RAtom{RValue::integer(a->v == b->v ? 1 : 0),
                               lat.join(a->label, b->label)},
                 pcl);
    }

    case ROp::GetOffset: {
      auto p = o.as_ptr(ip->r1);
      if (!p) return stuck(o.fail);
      Label lbl = bug == RMutant::GETOFF_NO_TAINT ? bot : p->label;
      return put(ip->r2, RAtom{RValue::integer(p->off), lbl}, pcl);
    }

    case ROp::SetOffset: {
      auto p = o.as_ptr(ip->r1);
      auto off = o.as_int(ip->r2);
      if (!p || !off) return stuck(o.fail);
      Label lbl = lat.join(p->label, off->second);
      if (bug == RMutant::SETOFF_NO_OFFSET_TAINT) lbl = p->label;
      if (bug == RMutant::SETOFF_NO_PTR_TAINT) lbl = off->second;
      return put(ip->r3, RAtom{RValue::pointer(p->blk, off->first), lbl}, pcl);
    }

    case ROp::GetBlockSize: {
      auto p = o.as_ptr(ip->r1);
      if (!p) return stuck(o.fail);
      auto* blk = o.block(p->blk);
      if (!blk) return stuck(o.fail);
      Label lbl = bug == RMutant::SIZE_NO_TAINT ? bot : blk->label;
      Label pc_label = bug == RMutant::SIZE_NO_RAISE_PC ? pcl : lat.join(pcl, p->label);
      return put(ip->r2, RAtom{RValue::integer(static_cast<int64_t>(blk->cells.size())), lbl},
                 pc_label);
    }

    case ROp::GetBlockLabel: {
      auto p = o.as_ptr(ip->r1);
      if (!p) return stuck(o.fail);
      auto* blk = o.block(p->blk);
      if (!blk) return stuck(o.fail);
      Label lbl = bug == RMutant::LABEL_NO_PTR_TAINT ? bot : p->label;
      return put(ip->r2, RAtom{RValue::label(blk->label), lbl}, pcl);
    }
  }
  return stuck(StuckKind::TypeError);
}

RunStatus classify(const RRuleSet& rules, const RState& s) {
  RStepResult r = rstep(rules, s);
  if (r.ok()) return RunStatus::Running;
  return r.stuck == StuckKind::Halt ? RunStatus::Halted : RunStatus::Failed;
}

Trace<RState> run_trace(const RRuleSet& rules, const RState& s, int fuel) {
  Trace<RState> t;
  t.states.push_back(s);
  for (int i = 0; i < fuel; ++i) {
    RStepResult r = rstep(rules, t.states.back());
    if (!r.ok()) {
      t.stop = r.stuck == StuckKind::Halt ? StopReason::Halted : StopReason::Failed;
      t.detail = r.stuck;
      return t;
    }
    t.states.push_back(std::move(*r.next));
  }
  t.stop = StopReason::FuelExhausted;
  return t;
}

namespace {

void collect_pointer_blocks(const Lattice& lat, Label obs, const std::vector<RAtom>& vs,
                            std::set<BlockId>& out) {
  for (const RAtom& a : vs)
    if (a.v.is_ptr() && lat.flows_to(a.label, obs)) out.insert(a.v.blk);
}

}  // namespace

std::set<BlockId> root_set(const Lattice& lat, Label obs, const RState& s) {
  std::set<BlockId> out;
  if (lat.flows_to(s.pc.label, obs)) collect_pointer_blocks(lat, obs, s.rf, out);
  for (const Frame& f : s.cs)
    if (lat.flows_to(f.ret_pc.label, obs)) collect_pointer_blocks(lat, obs, f.saved_rf, out);
  return out;
}

Reachability::Reachability(const Lattice& lat, Label obs, const RState& s)
    : mem_(&s.mem), lat_(&lat), obs_(obs) {}

std::set<BlockId> Reachability::from(BlockId b) const {
  std::set<BlockId> seen{b};
  std::vector<BlockId> work{b};
  while (!work.empty()) {
    BlockId cur = work.back();
    work.pop_back();
    auto it = mem_->find(cur);
    if (it == mem_->end()) continue;
    if (!lat_->flows_to(it->second.label, obs_)) continue;
    for (const RAtom& a : it->second.cells) {
      if (!a.v.is_ptr() || !lat_->flows_to(a.label, obs_)) continue;
      if (seen.insert(a.v.blk).second) work.push_back(a.v.blk);
    }
  }
  return seen;
}

bool Reachability::reachable(BlockId from_b, BlockId to_b) const {
  return from(from_b).count(to_b) > 0;
}

bool well_stamped(const Lattice& lat, const RState& s) {
  for (Label obs : lat.labels()) {
    Reachability reach(lat, obs, s);
    std::set<BlockId> seen;
    for (BlockId root : root_set(lat, obs, s)) {
      if (seen.count(root)) continue;
      for (BlockId b : reach.from(root)) {
        seen.insert(b);
        if (!lat.flows_to(b.stamp, obs)) return false;
      }
    }
  }
  return true;
}

RState initial_rstate(std::shared_ptr<const RProgram> prog, int num_regs, const Lattice& lat) {
  RState s;
  s.pc = Atom{0, lat.bottom()};
  s.rf.assign(static_cast<size_t>(num_regs), RAtom{RValue::integer(0), lat.bottom()});
  s.imem = std::move(prog);
  return s;
}

std::string format_rvalue(const RValue& v, const Lattice& lat) {
  switch (v.kind) {
    case RValue::Kind::Int: return std::to_string(v.n);
    case RValue::Kind::Lab: return lat.name(v.lab);
    case RValue::Kind::Ptr:
      return "(" + lat.name(v.blk.stamp) + "." + std::to_string(v.blk.index) + "," +
             std::to_string(v.n) + ")";
  }
  return "?";
}

std::string format_ratom(const RAtom& a, const Lattice& lat) {
  return format_rvalue(a.v, lat) + "@" + lat.name(a.label);
}

std::string format_rinstr(const RInstr& i, const Lattice& lat) {
  auto r = [](int x) { return " r" + std::to_string(x); };
  switch (i.op) {
    case ROp::Put: return "Put " + std::to_string(i.n) + r(i.r1);
    case ROp::Mov: return "Mov" + r(i.r1) + r(i.r2);
    case ROp::Load: return "Load" + r(i.r1) + r(i.r2);
    case ROp::Store: return "Store" + r(i.r1) + r(i.r2);
    case ROp::Add: return "Add" + r(i.r1) + r(i.r2) + r(i.r3);
    case ROp::Mult: return "Mult" + r(i.r1) + r(i.r2) + r(i.r3);
    case ROp::Noop: return "Noop";
    case ROp::Halt: return "Halt";
    case ROp::Jump: return "Jump" + r(i.r1);
    case ROp::BranchNZ: return "BranchNZ " + std::to_string(i.n) + r(i.r1);
    case ROp::Call: return "Call" + r(i.r1) + r(i.r2) + r(i.r3);
    case ROp::Return: return "Return";
    case ROp::PutLabel: return "PutLabel " + lat.name(i.lab) + r(i.r1);
    case ROp::LabelOf: return "LabelOf" + r(i.r1) + r(i.r2);
    case ROp::PcLabel: return "PcLabel" + r(i.r1);
    case ROp::Join: return "Join" + r(i.r1) + r(i.r2) + r(i.r3);
    case ROp::FlowsTo: return "FlowsTo" + r(i.r1) + r(i.r2) + r(i.r3);
    case ROp::Alloc: return "Alloc" + r(i.r1) + r(i.r2) + r(i.r3);
    case ROp::Write: return "Write" + r(i.r1) + r(i.r2);
    case ROp::Upgrade: return "Upgrade" + r(i.r1) + r(i.r2);
    case ROp::Eq: return "Eq" + r(i.r1) + r(i.r2) + r(i.r3);
    case ROp::GetOffset: return "GetOffset" + r(i.r1) + r(i.r2);
    case ROp::SetOffset: return "SetOffset" + r(i.r1) + r(i.r2) + r(i.r3);
    case ROp::GetBlockSize: return "GetBlockSize" + r(i.r1) + r(i.r2);
    case ROp::GetBlockLabel: return "GetBlockLabel" + r(i.r1) + r(i.r2);
  }
  return "?";
}

std::string format_rprogram(const RProgram& p, const Lattice& lat) {
  std::string out;
  for (auto& i : p) {
    out += format_rinstr(i, lat);
    out += '\n';
  }
  return out;
}

std::string format_rstate(const RState& s, const Lattice& lat) {
  std::ostringstream out;
  out << "pc = " << s.pc.value << "@" << lat.name(s.pc.label) << "\n";
  out << "rf = [";
  for (size_t i = 0; i < s.rf.size(); ++i) {
    if (i) out << ", ";
    out << format_ratom(s.rf[i], lat);
  }
  out << "]\n";
  out << "cs = [";
  for (size_t i = 0; i < s.cs.size(); ++i) {
    const Frame& f = s.cs[i];
    if (i) out << ", ";
    out << "(ret " << f.ret_pc.value << "@" << lat.name(f.ret_pc.label) << ", r"
        << f.result_reg << ", " << lat.name(f.result_label) << ")";
  }
  out << "]\n";
  // memory grouped by stamp
  for (Label stamp : lat.labels()) {
    bool any = false;
    for (auto& [b, blk] : s.mem) {
      if (b.stamp != stamp) continue;
      if (!any) {
        out << "mem@" << lat.name(stamp) << ":";
        any = true;
      }
      out << " " << b.index << ":[";
      for (size_t i = 0; i < blk.cells.size(); ++i) {
        if (i) out << ", ";
        out << format_ratom(blk.cells[i], lat);
      }
      out << "]@" << lat.name(blk.label);
    }
    if (any) out << "\n";
  }
  return out.str();
}

RAtom parse_ratom(const std::string& text, const Lattice& lat) {
  auto at = text.rfind('@');
  if (at == std::string::npos) throw std::runtime_error("bad atom: " + text);
  std::string val = text.substr(0, at);
  Label lbl = lat.parse(text.substr(at + 1));
  if (!val.empty() && val[0] == '(') {
    auto dot = val.find('.');
    auto comma = val.find(',');
    auto close = val.rfind(')');
    if (dot == std::string::npos || comma == std::string::npos || close == std::string::npos)
      throw std::runtime_error("bad pointer: " + text);
    BlockId b{lat.parse(val.substr(1, dot - 1)),
              static_cast<int32_t>(std::stol(val.substr(dot + 1, comma - dot - 1)))};
    int64_t off = std::stoll(val.substr(comma + 1, close - comma - 1));
    return RAtom{RValue::pointer(b, off), lbl};
  }
  if (lat.has(val)) return RAtom{RValue::label(lat.parse(val)), lbl};
  return RAtom{RValue::integer(std::stoll(val)), lbl};
}

RInstr parse_rinstr(const std::string& line, const Lattice& lat) {
  std::istringstream in(line);
  std::string op;
  in >> op;
  auto reg = [&]() {
    std::string w;
    in >> w;
    if (w.empty() || w[0] != 'r') throw std::runtime_error("bad register in: " + line);
    return std::stoi(w.substr(1));
  };
  auto num = [&]() {
    int64_t n;
    in >> n;
    return n;
  };
  RInstr i;
  auto set = [&](ROp o, int nregs) {
    i.op = o;
    if (nregs >= 1) i.r1 = reg();
    if (nregs >= 2) i.r2 = reg();
    if (nregs >= 3) i.r3 = reg();
  };
  if (op == "Put") {
    i.op = ROp::Put;
    i.n = num();
    i.r1 = reg();
  } else if (op == "PutLabel") {
    i.op = ROp::PutLabel;
    std::string l;
    in >> l;
    i.lab = lat.parse(l);
    i.r1 = reg();
  } else if (op == "BranchNZ") {
    i.op = ROp::BranchNZ;
    i.n = num();
    i.r1 = reg();
  } else if (op == "Mov") set(ROp::Mov, 2);
  else if (op == "Load") set(ROp::Load, 2);
  else if (op == "Store") set(ROp::Store, 2);
  else if (op == "Add") set(ROp::Add, 3);
  else if (op == "Mult") set(ROp::Mult, 3);
  else if (op == "Noop") set(ROp::Noop, 0);
  else if (op == "Halt") set(ROp::Halt, 0);
  else if (op == "Jump") set(ROp::Jump, 1);
  else if (op == "Call") set(ROp::Call, 3);
  else if (op == "Return") set(ROp::Return, 0);
  else if (op == "LabelOf") set(ROp::LabelOf, 2);
  else if (op == "PcLabel") set(ROp::PcLabel, 1);
  else if (op == "Join") set(ROp::Join, 3);
  else if (op == "FlowsTo") set(ROp::FlowsTo, 3);
  else if (op == "Alloc") set(ROp::Alloc, 3);
  else if (op == "Write") set(ROp::Write, 2);
  else if (op == "Upgrade") set(ROp::Upgrade, 2);
  else if (op == "Eq") set(ROp::Eq, 3);
  else if (op == "GetOffset") set(ROp::GetOffset, 2);
  else if (op == "SetOffset") set(ROp::SetOffset, 3);
  else if (op == "GetBlockSize") set(ROp::GetBlockSize, 2);
  else if (op == "GetBlockLabel") set(ROp::GetBlockLabel, 2);
  else throw std::runtime_error("bad instruction: " + line);
  return i;
}

RProgram parse_rprogram(const std::string& text, const Lattice& lat) {
  RProgram out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    bool blank = true;
    for (char ch : line)
      if (!isspace(static_cast<unsigned char>(ch))) blank = false;
    if (blank) continue;
    out.push_back(parse_rinstr(line, lat));
  }
  return out;
}

}  // namespace flowtest
