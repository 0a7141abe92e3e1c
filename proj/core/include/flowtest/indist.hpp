#pragma once

#include "flowtest/lattice.hpp"
#include "flowtest/register_machine.hpp"
#include "flowtest/rng.hpp"
#include "flowtest/stack_machine.hpp"

namespace flowtest {

// Observation relations. The first five are the supported modes; the rest
// exist only as regression fixtures for relations that are known wrong.
enum class RelKind : uint8_t {
  MEM,           // memories and instruction memories, all high states equal
  LOW,           // whole low states, all high states equal
  FULL,          // memories always; stacks cropped to the first low return
  FULL_WS,       // register states, requires well-stampedness
  INTS_IN_REGS,  // only integers in registers
  // fixture-only wrong relations
  WRONG_HIGH_EQ_ALL,       // a high value is equivalent to anything
  WRONG_PAYLOAD_ONLY,      // labels unobservable; payload equality decides
  WRONG_RET_EQ_DATA,       // high return addresses equal high data
  WRONG_FULL_STRICT_HIGH,  // high states compared like low ones
  WRONG_STRICT_FRAMES,     // register frames always fully matched
  WRONG_FILTER_FRAMES,     // all high register frames filtered out
};

const char* to_string(RelKind k);
std::optional<RelKind> parse_relkind(const std::string& name);

struct Relation {
  RelKind kind = RelKind::MEM;
  Label obs{};  // defaults to bottom; the only proper observer for two-point
};

bool is_wrong_relation(RelKind k);

// Value/entry level.
bool indist_atom(const Relation& rel, const Lattice& lat, const Atom& a, const Atom& b);
bool indist_entry(const Relation& rel, const Lattice& lat, const StackEntry& a,
                  const StackEntry& b);
bool indist_instr(const Relation& rel, const Lattice& lat, const SInstr& a, const SInstr& b);
bool indist_ratom(const Relation& rel, const Lattice& lat, const RAtom& a, const RAtom& b);

// Drops stack entries until the first return address visible at obs
// (kept), or until nothing is left.
std::vector<StackEntry> crop_stack(const Lattice& lat, Label obs,
                                   const std::vector<StackEntry>& stack);

bool indist_state(const Relation& rel, const Lattice& lat, const SState& a, const SState& b);
bool indist_state(const Relation& rel, const Lattice& lat, const RState& a, const RState& b);

// A pair of states indistinguishable at the relation's observation level;
// the unit test case.
template <class State>
struct Variation {
  State left;
  State right;
};

enum class StartSet : uint8_t { INIT, QUASI_INIT, ANY, TINY };
const char* to_string(StartSet s);
std::optional<StartSet> parse_startset(const std::string& name);

// Integer payload distribution; smart mode prefers valid addresses.
struct IntDist {
  bool smart = false;
  int64_t raw_lo = -20;
  int64_t raw_hi = 20;
  int mem_size = 0;
  int imem_size = 0;

  int64_t draw(Rng& rng) const {
    if (smart && mem_size > 0 && rng.chance(0.6)) return rng.range(0, mem_size - 1);
    if (smart && imem_size > 0 && rng.chance(0.4)) return rng.range(0, imem_size - 1);
    return rng.range(raw_lo, raw_hi);
  }
};

// Re-randomizes everything the relation ignores; the low parts are copied
// verbatim. The start set pins components that must not change (e.g. INIT
// keeps stacks empty). The result always satisfies the relation.
SState vary(Rng& rng, const Relation& rel, const Lattice& lat, const SState& s, StartSet start,
            const IntDist& ints);
RState vary(Rng& rng, const Relation& rel, const Lattice& lat, const RState& s, StartSet start,
            const IntDist& ints);

}  // namespace flowtest
