#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "flowtest/lattice.hpp"
#include "flowtest/stack_machine.hpp"  // Atom, StuckKind, Trace, StopReason

namespace flowtest {

// Block identifier: the stamp records the label of the allocation context,
// the index comes from a separate counter per stamp.
struct BlockId {
  Label stamp{};
  int32_t index = 0;
  friend bool operator==(BlockId a, BlockId b) { return a.stamp == b.stamp && a.index == b.index; }
  friend bool operator!=(BlockId a, BlockId b) { return !(a == b); }
  friend bool operator<(BlockId a, BlockId b) {
    return a.stamp != b.stamp ? a.stamp < b.stamp : a.index < b.index;
  }
};

// Payload of a register-machine value: integer, first-class label, or
// pointer. Compared syntactically.
struct RValue {
  enum class Kind : uint8_t { Int, Lab, Ptr } kind = Kind::Int;
  int64_t n = 0;     // Int payload, Ptr offset
  Label lab{};       // Lab payload
  BlockId blk{};     // Ptr block

  static RValue integer(int64_t v) { return {Kind::Int, v, {}, {}}; }
  static RValue label(Label l) { return {Kind::Lab, 0, l, {}}; }
  static RValue pointer(BlockId b, int64_t off) { return {Kind::Ptr, off, {}, b}; }

  bool is_int() const { return kind == Kind::Int; }
  bool is_lab() const { return kind == Kind::Lab; }
  bool is_ptr() const { return kind == Kind::Ptr; }

  friend bool operator==(const RValue& a, const RValue& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
      case Kind::Int: return a.n == b.n;
      case Kind::Lab: return a.lab == b.lab;
      case Kind::Ptr: return a.blk == b.blk && a.n == b.n;
    }
    return false;
  }
  friend bool operator!=(const RValue& a, const RValue& b) { return !(a == b); }
};

struct RAtom {
  RValue v{};
  Label label{};
  friend bool operator==(const RAtom& a, const RAtom& b) { return a.v == b.v && a.label == b.label; }
  friend bool operator!=(const RAtom& a, const RAtom& b) { return !(a == b); }
};

// A memory block: fixed size, immutable block label, mutable cells.
struct RBlock {
  std::vector<RAtom> cells;
  Label label{};
  friend bool operator==(const RBlock& a, const RBlock& b) {
    return a.label == b.label && a.cells == b.cells;
  }
};

using RMemory = std::map<BlockId, RBlock>;

// Call frame; created only by Call.
struct Frame {
  Atom ret_pc{};                // addr@label
  std::vector<RAtom> saved_rf;
  int result_reg = 0;
  Label result_label{};
  friend bool operator==(const Frame& a, const Frame& b) {
    return a.ret_pc == b.ret_pc && a.saved_rf == b.saved_rf && a.result_reg == b.result_reg &&
           a.result_label == b.result_label;
  }
};

enum class ROp : uint8_t {
  Put, Mov, Load, Store, Add, Mult, Noop, Halt, Jump, BranchNZ, Call, Return,
  PutLabel, LabelOf, PcLabel, Join, FlowsTo,
  Alloc, Write, Upgrade, Eq, GetOffset, SetOffset, GetBlockSize, GetBlockLabel,
};
constexpr int kROpCount = 25;
const char* to_string(ROp op);

struct RInstr {
  ROp op = ROp::Noop;
  int r1 = 0, r2 = 0, r3 = 0;
  int64_t n = 0;   // Put immediate, BranchNZ offset
  Label lab{};     // PutLabel immediate

  friend bool operator==(const RInstr& a, const RInstr& b) {
    return a.op == b.op && a.r1 == b.r1 && a.r2 == b.r2 && a.r3 == b.r3 && a.n == b.n &&
           a.lab == b.lab;
  }
  friend bool operator!=(const RInstr& a, const RInstr& b) { return !(a == b); }
};

using RProgram = std::vector<RInstr>;

struct RState {
  Atom pc{};
  std::vector<RAtom> rf;
  std::vector<Frame> cs;  // front() is the top frame
  RMemory mem;
  std::shared_ptr<const RProgram> imem;

  const RInstr* fetch() const {
    if (!imem || pc.value < 0 || pc.value >= static_cast<int64_t>(imem->size()))
      return nullptr;
    return &(*imem)[static_cast<size_t>(pc.value)];
  }
};

// The 38 deliberately broken rule variants, each one of: drop a taint,
// drop a check, or move taint from the pc to the result.
enum class RMutant : uint8_t {
  CORRECT,
  MOV_NO_TAINT,
  LOAD_TAINT_TO_VALUE,
  LOAD_NO_PTR_TAINT,
  LOAD_NO_BLOCK_TAINT,
  STORE_NO_PC_CHECK,
  STORE_NO_PTR_CHECK,
  STORE_NO_CHECK,
  ADD_NO_TAINT,
  MULT_NO_TAINT,
  NOOP_LOWER_PC,
  JUMP_NO_RAISE_PC,
  JUMP_LOWER_PC,
  BRANCH_NO_RAISE_PC,
  BRANCH_LOWER_PC,
  CALL_NO_RAISE_PC,
  CALL_LOWER_PC,
  CALL_NO_LABEL_TAINT_RET,
  RETURN_NO_PC_CHECK,
  RETURN_NO_VALUE_CHECK,
  RETURN_NO_CHECK,
  RETURN_KEEP_LABEL,
  ALLOC_NO_SIZE_TAINT,
  ALLOC_NO_LABEL_TAINT,
  WRITE_NO_PC_CHECK,
  WRITE_NO_PTR_CHECK,
  WRITE_NO_VALUE_CHECK,
  WRITE_REPLACE_LABEL,
  UPGRADE_NO_VALUE_CHECK,
  UPGRADE_NO_PC_CHECK,
  UPGRADE_NO_PTR_CHECK,
  UPGRADE_NO_RAISE_PC,
  UPGRADE_NO_WRITE_CHECK,
  GETOFF_NO_TAINT,
  SETOFF_NO_OFFSET_TAINT,
  SETOFF_NO_PTR_TAINT,
  SIZE_NO_RAISE_PC,
  SIZE_NO_TAINT,
  LABEL_NO_PTR_TAINT,
};
constexpr int kRMutantCount = 38;

const char* to_string(RMutant m);
std::optional<RMutant> parse_rmutant(const std::string& name);
std::vector<RMutant> all_rmutants();
// The rule (instruction) a mutant belongs to, for report grouping.
ROp rmutant_rule(RMutant m);

struct RRuleSet {
  const Lattice* lat = nullptr;
  RMutant mutant = RMutant::CORRECT;
};

struct RStepResult {
  std::optional<RState> next;
  StuckKind stuck = StuckKind::Halt;
  bool ok() const { return next.has_value(); }
};

RStepResult rstep(const RRuleSet& rules, const RState& s);
RunStatus classify(const RRuleSet& rules, const RState& s);
Trace<RState> run_trace(const RRuleSet& rules, const RState& s, int fuel);

// Per-level allocation: smallest unused index under the given stamp.
BlockId fresh(const RMemory& mem, Label stamp);

// Blocks directly accessible at observation level obs (registers when the
// pc is visible, plus saved register files of visible frames).
std::set<BlockId> root_set(const Lattice& lat, Label obs, const RState& s);

// Queryable reflexive-transitive closure of the pointer-link relation at
// observation level obs.
class Reachability {
 public:
  Reachability(const Lattice& lat, Label obs, const RState& s);
  bool reachable(BlockId from, BlockId to) const;
  std::set<BlockId> from(BlockId b) const;

 private:
  const RMemory* mem_;
  const Lattice* lat_;
  Label obs_;
};

bool well_stamped(const Lattice& lat, const RState& s);

RState initial_rstate(std::shared_ptr<const RProgram> prog, int num_regs, const Lattice& lat);

// Text syntax mirrors the instruction grammar: "Alloc r1 r2 r3",
// "PutLabel M1 r4", "BranchNZ 2 r0".
std::string format_rvalue(const RValue& v, const Lattice& lat);
std::string format_ratom(const RAtom& a, const Lattice& lat);
std::string format_rinstr(const RInstr& i, const Lattice& lat);
std::string format_rprogram(const RProgram& p, const Lattice& lat);
std::string format_rstate(const RState& s, const Lattice& lat);

RAtom parse_ratom(const std::string& text, const Lattice& lat);
RInstr parse_rinstr(const std::string& line, const Lattice& lat);
RProgram parse_rprogram(const std::string& text, const Lattice& lat);

}  // namespace flowtest
