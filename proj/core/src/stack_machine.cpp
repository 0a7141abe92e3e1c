#include "flowtest/stack_machine.hpp"

#include <sstream>

namespace flowtest {

const char* to_string(StuckKind k) {
  switch (k) {
    case StuckKind::Halt: return "halt";
    case StuckKind::StackUnderflow: return "stack underflow";
    case StuckKind::AddressOutOfRange: return "address out of range";
    case StuckKind::IfcCheckFailed: return "failed IFC check";
    case StuckKind::EndOfStream: return "end of instruction stream";
    case StuckKind::TypeError: return "payload type mismatch";
  }
  return "?";
}

const char* to_string(SMutant m) {
  switch (m) {
    case SMutant::CORRECT: return "CORRECT";
    case SMutant::ADD_NO_TAINT: return "ADD_NO_TAINT";
    case SMutant::PUSH_NO_TAINT: return "PUSH_NO_TAINT";
    case SMutant::LOAD_NO_TAINT: return "LOAD_NO_TAINT";
    case SMutant::STORE_NO_VALUE_TAINT: return "STORE_NO_VALUE_TAINT";
    case SMutant::STORE_NO_POINTER_TAINT: return "STORE_NO_POINTER_TAINT";
    case SMutant::WRITE_DOWN_THROUGH_HIGH_PTR: return "WRITE_DOWN_THROUGH_HIGH_PTR";
    case SMutant::JUMP_NO_RAISE_PC: return "JUMP_NO_RAISE_PC";
    case SMutant::JUMP_LOWER_PC: return "JUMP_LOWER_PC";
    case SMutant::STORE_NO_PC_TAINT: return "STORE_NO_PC_TAINT";
    case SMutant::WRITE_DOWN_WITH_HIGH_PC: return "WRITE_DOWN_WITH_HIGH_PC";
    case SMutant::CALL_NO_RAISE_PC: return "CALL_NO_RAISE_PC";
    case SMutant::RETURN_NO_TAINT: return "RETURN_NO_TAINT";
    case SMutant::VALUE_OR_VOID_ON_RETURN: return "VALUE_OR_VOID_ON_RETURN";
    case SMutant::POP_POPS_RETURNS: return "POP_POPS_RETURNS";
  }
  return "?";
}

std::optional<SMutant> parse_smutant(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(SMutant::POP_POPS_RETURNS); ++i) {
    auto m = static_cast<SMutant>(i);
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

std::vector<SMutant> smutants_for_tier(bool control_flow) {
  std::vector<SMutant> out;
  int count = control_flow ? kCfMutantCount : kBasicMutantCount;
  for (int i = 1; i <= count; ++i) out.push_back(static_cast<SMutant>(i));
  return out;
}

namespace {

struct Popper {
  const SState& s;
  size_t at = 0;
  bool underflow = false;
  bool hit_ret = false;

  // Pops a Data entry; records why it could not.
  std::optional<Atom> data() {
    if (at >= s.stack.size()) {
      underflow = true;
      return std::nullopt;
    }
    if (!s.stack[at].is_data()) {
      hit_ret = true;
      return std::nullopt;
    }
    return s.stack[at++].atom;
  }
  StuckKind why() const { return underflow ? StuckKind::StackUnderflow : StuckKind::IfcCheckFailed; }
};

SStepResult stuck(StuckKind k) { return SStepResult{std::nullopt, k}; }

SStepResult advance(SState s, int64_t skip_stack) {
  s.stack.erase(s.stack.begin(), s.stack.begin() + skip_stack);
  s.pc.value += 1;
  return SStepResult{std::move(s), StuckKind::Halt};
}

}  // namespace

SStepResult sstep(const SRuleSet& rules, const SState& s) {
  const Lattice& lat = *rules.lat;
  const SMutant bug = rules.mutant;
  const SInstr* ip = s.fetch();
  if (!ip) return stuck(StuckKind::EndOfStream);
  const Label pcl = s.pc.label;

  switch (ip->op) {
    case SOp::Noop:
      return advance(s, 0);

    case SOp::Halt:
      return stuck(StuckKind::Halt);

    case SOp::Push: {
      Atom a = ip->imm;
      if (bug == SMutant::PUSH_NO_TAINT) a.label = lat.bottom();
      SState n = s;
      n.stack.insert(n.stack.begin(), StackEntry::data(a));
      n.pc.value += 1;
      return SStepResult{std::move(n), StuckKind::Halt};
    }

    case SOp::Pop: {
      if (s.stack.empty()) return stuck(StuckKind::StackUnderflow);
      if (s.stack.front().is_ret() && bug != SMutant::POP_POPS_RETURNS)
        return stuck(StuckKind::IfcCheckFailed);
      return advance(s, 1);
    }

    case SOp::Load: {
      Popper pop{s};
      auto p = pop.data();
      if (!p) return stuck(pop.why());
      if (p->value < 0 || p->value >= static_cast<int64_t>(s.mem.size()))
        return stuck(StuckKind::AddressOutOfRange);
      Atom cell = s.mem[static_cast<size_t>(p->value)];
      Label lbl = bug == SMutant::LOAD_NO_TAINT ? cell.label : lat.join(cell.label, p->label);
      SState n = s;
      n.stack.front() = StackEntry::data(Atom{cell.value, lbl});
      n.pc.value += 1;
      return SStepResult{std::move(n), StuckKind::Halt};
    }

    case SOp::Store: {
      Popper pop{s};
      auto p = pop.data();
      auto v = pop.data();
      if (!v) return stuck(pop.why());
      if (p->value < 0 || p->value >= static_cast<int64_t>(s.mem.size()))
        return stuck(StuckKind::AddressOutOfRange);
      const Label old = s.mem[static_cast<size_t>(p->value)].label;

      Label check = lat.join(p->label, pcl);
      if (bug == SMutant::WRITE_DOWN_THROUGH_HIGH_PTR) check = pcl;
      if (bug == SMutant::WRITE_DOWN_WITH_HIGH_PC) check = p->label;
      if (!lat.flows_to(check, old)) return stuck(StuckKind::IfcCheckFailed);

      Label taint = lat.join(v->label, lat.join(p->label, pcl));
      if (bug == SMutant::STORE_NO_VALUE_TAINT) taint = lat.join(p->label, pcl);
      if (bug == SMutant::STORE_NO_POINTER_TAINT) taint = lat.join(v->label, pcl);
      if (bug == SMutant::STORE_NO_PC_TAINT) taint = lat.join(v->label, p->label);

      SState n = s;
      n.mem[static_cast<size_t>(p->value)] = Atom{v->value, taint};
      n.stack.erase(n.stack.begin(), n.stack.begin() + 2);
      n.pc.value += 1;
      return SStepResult{std::move(n), StuckKind::Halt};
    }

    case SOp::Add: {
      Popper pop{s};
      auto a = pop.data();
      auto b = pop.data();
      if (!b) return stuck(pop.why());
      Label lbl = bug == SMutant::ADD_NO_TAINT ? lat.bottom() : lat.join(a->label, b->label);
      SState n = s;
      n.stack.erase(n.stack.begin(), n.stack.begin() + 2);
      n.stack.insert(n.stack.begin(), StackEntry::data(Atom{a->value + b->value, lbl}));
      n.pc.value += 1;
      return SStepResult{std::move(n), StuckKind::Halt};
    }

    case SOp::Jump: {
      Popper pop{s};
      auto t = pop.data();
      if (!t) return stuck(pop.why());
      Label lbl = lat.join(t->label, pcl);
      if (bug == SMutant::JUMP_NO_RAISE_PC) lbl = pcl;
      if (bug == SMutant::JUMP_LOWER_PC) lbl = t->label;
      SState n = s;
      n.stack.erase(n.stack.begin());
      n.pc = Atom{t->value, lbl};
      return SStepResult{std::move(n), StuckKind::Halt};
    }

    case SOp::Call: {
      const int k = ip->call_args;
      Popper pop{s};
      auto t = pop.data();
      if (!t) return stuck(pop.why());
      for (int i = 0; i < k; ++i)
        if (!pop.data()) return stuck(pop.why());

      Label pclbl = lat.join(t->label, pcl);
      if (bug == SMutant::CALL_NO_RAISE_PC) pclbl = pcl;
      // Under the paired VALUE_OR_VOID rules the frame records no arity;
      // the Return instruction picks one. We keep the slot but ignore it.
      StackEntry frame = StackEntry::ret(s.pc.value + 1, ip->returns_value, pcl);

      SState n = s;
      n.stack.erase(n.stack.begin());  // target
      n.stack.insert(n.stack.begin() + k, frame);
      n.pc = Atom{t->value, pclbl};
      return SStepResult{std::move(n), StuckKind::Halt};
    }

    case SOp::Return: {
      size_t i = 0;
      while (i < s.stack.size() && s.stack[i].is_data()) ++i;
      if (i == s.stack.size()) return stuck(StuckKind::StackUnderflow);
      const StackEntry& frame = s.stack[i];

      int keep = bug == SMutant::VALUE_OR_VOID_ON_RETURN ? (ip->returns_value ? 1 : 0)
                                                         : (frame.ret_returns_value ? 1 : 0);
      if (static_cast<size_t>(keep) > i) return stuck(StuckKind::StackUnderflow);

      SState n = s;
      std::vector<StackEntry> ns;
      for (int j = 0; j < keep; ++j) {
        Atom a = s.stack[static_cast<size_t>(j)].atom;
        if (bug != SMutant::RETURN_NO_TAINT) a.label = lat.join(a.label, pcl);
        ns.push_back(StackEntry::data(a));
      }
      n.stack.erase(n.stack.begin(), n.stack.begin() + static_cast<int64_t>(i) + 1);
      n.stack.insert(n.stack.begin(), ns.begin(), ns.end());
      n.pc = frame.atom;
      return SStepResult{std::move(n), StuckKind::Halt};
    }
  }
  return stuck(StuckKind::TypeError);
}

RunStatus classify(const SRuleSet& rules, const SState& s) {
  SStepResult r = sstep(rules, s);
  if (r.ok()) return RunStatus::Running;
  return r.stuck == StuckKind::Halt ? RunStatus::Halted : RunStatus::Failed;
}

Trace<SState> run_trace(const SRuleSet& rules, const SState& s, int fuel) {
  Trace<SState> t;
  t.states.push_back(s);
  for (int i = 0; i < fuel; ++i) {
    SStepResult r = sstep(rules, t.states.back());
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

std::string format_atom(const Atom& a, const Lattice& lat) {
  return std::to_string(a.value) + "@" + lat.name(a.label);
}

std::string format_instr(const SInstr& i, const Lattice& lat) {
  switch (i.op) {
    case SOp::Noop: return "Noop";
    case SOp::Halt: return "Halt";
    case SOp::Push: return "Push " + format_atom(i.imm, lat);
    case SOp::Pop: return "Pop";
    case SOp::Load: return "Load";
    case SOp::Store: return "Store";
    case SOp::Add: return "Add";
    case SOp::Jump: return "Jump";
    case SOp::Call:
      return "Call " + std::to_string(i.call_args) + (i.returns_value ? " true" : " false");
    case SOp::Return: return i.returns_value ? "Return true" : "Return";
  }
  return "?";
}

std::string format_entry(const StackEntry& e, const Lattice& lat) {
  if (e.is_data()) return format_atom(e.atom, lat);
  return "Ret(" + std::to_string(e.atom.value) + "," + (e.ret_returns_value ? "true" : "false") +
         ")@" + lat.name(e.atom.label);
}

std::string format_program(const SProgram& p, const Lattice& lat) {
  std::string out;
  for (auto& i : p) {
    out += format_instr(i, lat);
    out += '\n';
  }
  return out;
}

Atom parse_atom(const std::string& text, const Lattice& lat) {
  auto pos = text.find('@');
  if (pos == std::string::npos) throw std::runtime_error("bad atom: " + text);
  return Atom{std::stoll(text.substr(0, pos)), lat.parse(text.substr(pos + 1))};
}

SInstr parse_instr(const std::string& line, const Lattice& lat) {
  std::istringstream in(line);
  std::string op;
  in >> op;
  auto parse_bool = [&](const std::string& w) {
    if (w == "true" || w == "1") return true;
    if (w == "false" || w == "0") return false;
    throw std::runtime_error("bad bool: " + w);
  };
  if (op == "Noop") return SInstr::noop();
  if (op == "Halt") return SInstr::halt();
  if (op == "Pop") return SInstr::pop();
  if (op == "Load") return SInstr::load();
  if (op == "Store") return SInstr::store();
  if (op == "Add") return SInstr::add();
  if (op == "Jump") return SInstr::jump();
  if (op == "Push") {
    std::string a;
    in >> a;
    return SInstr::push(parse_atom(a, lat));
  }
  if (op == "Call") {
    int k;
    std::string kp;
    in >> k >> kp;
    return SInstr::call(k, parse_bool(kp));
  }
  if (op == "Return") {
    std::string kp;
    if (in >> kp) return SInstr::ret(parse_bool(kp));
    return SInstr::ret();
  }
  throw std::runtime_error("bad instruction: " + line);
}

StackEntry parse_entry(const std::string& text, const Lattice& lat) {
  if (text.rfind("Ret(", 0) == 0) {
    auto close = text.find(')');
    auto comma = text.find(',');
    auto at = text.find('@', close);
    if (close == std::string::npos || comma == std::string::npos || at == std::string::npos)
      throw std::runtime_error("bad stack entry: " + text);
    int64_t addr = std::stoll(text.substr(4, comma - 4));
    std::string kp = text.substr(comma + 1, close - comma - 1);
    bool rv = kp == "true" || kp == "1";
    return StackEntry::ret(addr, rv, lat.parse(text.substr(at + 1)));
  }
  return StackEntry::data(parse_atom(text, lat));
}

SProgram parse_program(const std::string& text, const Lattice& lat) {
  SProgram out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    bool blank = true;
    for (char c : line)
      if (!isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    out.push_back(parse_instr(line, lat));
  }
  return out;
}

SState initial_sstate(std::shared_ptr<const SProgram> prog, size_t mem_size, const Lattice& lat) {
  SState s;
  s.pc = Atom{0, lat.bottom()};
  s.mem.assign(mem_size, Atom{0, lat.bottom()});
  s.imem = std::move(prog);
  return s;
}

}  // namespace flowtest
