#pragma once

#include <map>
#include <stdexcept>

#include "flowtest/indist.hpp"
#include "flowtest/properties.hpp"
#include "flowtest/rng.hpp"

namespace flowtest {

struct GenerationExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GenKind : uint8_t {
  NAIVE,
  WEIGHTED,
  SEQUENCE,
  SEQUENCE_SMART_INTS,
  BY_EXEC,
  TINY_SSNI,
};
const char* to_string(GenKind k);
std::optional<GenKind> parse_genkind(const std::string& name);

// Per-instruction generation weights for the register machine. Tuned so
// that instructions that survive the probing step come out roughly
// uniform; the restrictive ones need a big boost.
struct FreqTable {
  std::map<ROp, double> weights;
  static FreqTable uniform();
  static FreqTable tuned();
  double weight(ROp op) const;
};

struct GenStrategy {
  GenKind kind = GenKind::NAIVE;
  int imem_min = 20, imem_max = 50;
  int mem_min = 2, mem_max = 10;
  int lookahead = 2;
  double halt_p0 = 0.05, halt_p1 = 0.40;
  FreqTable freq = FreqTable::tuned();
  int gen_fuel = 100;  // execution budget while generating
  // how often the direct strategies emit a template instead of a single
  // instruction; generation by execution mixes them in more aggressively
  // since its probe disarms the crash-prone ones anyway
  double seq_prob = 0.18;
  // chance of committing a candidate unprobed; useful on the register
  // machine, where the interesting rule variants sit behind checks the
  // correct probe would never pass
  double probe_skip = 0.0;

  bool smart_ints() const {
    return kind == GenKind::SEQUENCE_SMART_INTS || kind == GenKind::BY_EXEC ||
           kind == GenKind::TINY_SSNI;
  }
};

struct GenTelemetry {
  uint64_t pairs = 0;
  uint64_t vary_retries = 0;
};

// --- stack machine ---

struct StackGen {
  const Lattice* lat = nullptr;
  bool control_flow = false;
  GenStrategy strategy;
  int num_fallback = 0;
};

SState gen_stack_state(Rng& rng, const StackGen& g, StartSet start);
Variation<SState> gen_pair(Rng& rng, const StackGen& g, StartSet start, const Relation& rel,
                           GenTelemetry* tel = nullptr);

// --- register machine ---

struct RegisterGen {
  const Lattice* lat = nullptr;
  GenStrategy strategy;
  int num_regs = 10;
  int alloc_max = 4;  // requested cells per generated block
};

// Random register state satisfying well_stamped; memories are built
// stamp-first and pointers only handed out at labels the stamp flows to.
RState gen_register_any(Rng& rng, const RegisterGen& g);
RState gen_register_state(Rng& rng, const RegisterGen& g, StartSet start);
Variation<RState> gen_pair(Rng& rng, const RegisterGen& g, StartSet start, const Relation& rel,
                           GenTelemetry* tel = nullptr);

}  // namespace flowtest
