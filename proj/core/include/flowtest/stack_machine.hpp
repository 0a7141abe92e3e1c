#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "flowtest/lattice.hpp"

namespace flowtest {

// Labeled integer; the unit of taint.
struct Atom {
  int64_t value = 0;
  Label label{};
  friend bool operator==(const Atom& a, const Atom& b) {
    return a.value == b.value && a.label == b.label;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
};

enum class SOp : uint8_t { Noop, Halt, Push, Pop, Load, Store, Add, Jump, Call, Return };

// Single struct for all instructions; which fields are meaningful depends
// on op. Call uses (call_args, returns_value); Return carries a
// returns_value flag that only the VALUE_OR_VOID_ON_RETURN rules look at.
struct SInstr {
  SOp op = SOp::Noop;
  Atom imm{};            // Push
  int call_args = 0;     // Call
  bool returns_value = false;  // Call; Return under the buggy paired rules

  static SInstr noop() { return {}; }
  static SInstr halt() { return {SOp::Halt, {}, 0, false}; }
  static SInstr push(Atom a) { return {SOp::Push, a, 0, false}; }
  static SInstr pop() { return {SOp::Pop, {}, 0, false}; }
  static SInstr load() { return {SOp::Load, {}, 0, false}; }
  static SInstr store() { return {SOp::Store, {}, 0, false}; }
  static SInstr add() { return {SOp::Add, {}, 0, false}; }
  static SInstr jump() { return {SOp::Jump, {}, 0, false}; }
  static SInstr call(int k, bool kp) { return {SOp::Call, {}, k, kp}; }
  static SInstr ret(bool kp = false) { return {SOp::Return, {}, 0, kp}; }

  friend bool operator==(const SInstr& a, const SInstr& b) {
    if (a.op != b.op) return false;
    switch (a.op) {
      case SOp::Push: return a.imm == b.imm;
      case SOp::Call: return a.call_args == b.call_args && a.returns_value == b.returns_value;
      case SOp::Return: return a.returns_value == b.returns_value;
      default: return true;
    }
  }
  friend bool operator!=(const SInstr& a, const SInstr& b) { return !(a == b); }
};

using SProgram = std::vector<SInstr>;

// Stack entries: plain data atoms, or return frames created by Call and
// consumed by Return.
struct StackEntry {
  enum class Kind : uint8_t { Data, Ret } kind = Kind::Data;
  Atom atom{};               // Data payload, or Ret(addr)@saved-pc-label
  bool ret_returns_value = false;  // Ret only

  static StackEntry data(Atom a) { return {Kind::Data, a, false}; }
  static StackEntry ret(int64_t addr, bool returns_value, Label l) {
    return {Kind::Ret, Atom{addr, l}, returns_value};
  }
  bool is_data() const { return kind == Kind::Data; }
  bool is_ret() const { return kind == Kind::Ret; }

  friend bool operator==(const StackEntry& a, const StackEntry& b) {
    return a.kind == b.kind && a.atom == b.atom &&
           (a.kind == Kind::Data || a.ret_returns_value == b.ret_returns_value);
  }
  friend bool operator!=(const StackEntry& a, const StackEntry& b) { return !(a == b); }
};

// Machine state. The instruction memory never changes along a trace, so
// states in one run share it.
struct SState {
  Atom pc{};
  std::vector<StackEntry> stack;  // front() is the top
  std::vector<Atom> mem;
  std::shared_ptr<const SProgram> imem;

  const SInstr* fetch() const {
    if (!imem || pc.value < 0 || pc.value >= static_cast<int64_t>(imem->size()))
      return nullptr;
    return &(*imem)[static_cast<size_t>(pc.value)];
  }
};

// Why a machine refused to step.
enum class StuckKind : uint8_t {
  Halt,
  StackUnderflow,
  AddressOutOfRange,
  IfcCheckFailed,
  EndOfStream,
  TypeError,  // register machine payload-kind mismatches
};
const char* to_string(StuckKind k);

enum class SMutant : uint8_t {
  CORRECT,
  ADD_NO_TAINT,
  PUSH_NO_TAINT,
  LOAD_NO_TAINT,
  STORE_NO_VALUE_TAINT,
  STORE_NO_POINTER_TAINT,
  WRITE_DOWN_THROUGH_HIGH_PTR,
  JUMP_NO_RAISE_PC,
  JUMP_LOWER_PC,
  STORE_NO_PC_TAINT,
  WRITE_DOWN_WITH_HIGH_PC,
  CALL_NO_RAISE_PC,
  RETURN_NO_TAINT,
  VALUE_OR_VOID_ON_RETURN,
  POP_POPS_RETURNS,
};

// The first six are expressible on the basic machine; the rest need
// control flow.
constexpr int kBasicMutantCount = 6;
constexpr int kCfMutantCount = 14;

const char* to_string(SMutant m);
std::optional<SMutant> parse_smutant(const std::string& name);
std::vector<SMutant> smutants_for_tier(bool control_flow);

struct SRuleSet {
  const Lattice* lat = nullptr;
  SMutant mutant = SMutant::CORRECT;
};

struct SStepResult {
  std::optional<SState> next;
  StuckKind stuck = StuckKind::Halt;  // valid iff !next
  bool ok() const { return next.has_value(); }
};

SStepResult sstep(const SRuleSet& rules, const SState& s);

enum class RunStatus : uint8_t { Running, Halted, Failed };
RunStatus classify(const SRuleSet& rules, const SState& s);

enum class StopReason : uint8_t { Halted, Failed, FuelExhausted };

template <class State>
struct Trace {
  std::vector<State> states;  // states[0] is the start state
  StopReason stop = StopReason::Halted;
  StuckKind detail = StuckKind::Halt;  // valid when stop != FuelExhausted

  const State& last() const { return states.back(); }
  size_t steps() const { return states.size() - 1; }
};

Trace<SState> run_trace(const SRuleSet& rules, const SState& s, int fuel);

// Textual syntax: one instruction per line ("Push 1@L", "Call 1 true",
// "Return"); atoms render as "n@L".
std::string format_atom(const Atom& a, const Lattice& lat);
std::string format_instr(const SInstr& i, const Lattice& lat);
std::string format_entry(const StackEntry& e, const Lattice& lat);
std::string format_program(const SProgram& p, const Lattice& lat);

Atom parse_atom(const std::string& text, const Lattice& lat);
SInstr parse_instr(const std::string& line, const Lattice& lat);
StackEntry parse_entry(const std::string& text, const Lattice& lat);
SProgram parse_program(const std::string& text, const Lattice& lat);

SState initial_sstate(std::shared_ptr<const SProgram> prog, size_t mem_size, const Lattice& lat);

}  // namespace flowtest
