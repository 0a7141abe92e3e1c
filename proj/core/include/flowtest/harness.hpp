#pragma once

#include <map>
#include <variant>

#include "flowtest/generators.hpp"
#include "flowtest/properties.hpp"
#include "flowtest/shrinker.hpp"

namespace flowtest {

enum class MachineKind : uint8_t { STACK_BASIC, STACK_CF, REGISTER };
const char* to_string(MachineKind m);
std::optional<MachineKind> parse_machine(const std::string& name);

struct CampaignConfig {
  MachineKind machine = MachineKind::STACK_BASIC;
  PropertyCfg prop;
  GenStrategy strategy;
  std::vector<std::string> mutants;  // resolved names; empty = all for machine
  int64_t test_budget = -1;          // -1 = no test cap; 0 runs nothing
  int64_t time_budget_ms = 0;        // 0 = no time cap
  int ce_quota = 1;                  // counterexamples per mutant before stopping
  uint64_t seed = 1;
  bool shrink_on = true;
  ShrinkConfig shrink;
  int workers = 1;
  int num_regs = 10;
  int profile_every = 8;  // profiling sample rate inside campaigns

  bool has_stop_criterion() const { return test_budget >= 0 || time_budget_ms || ce_quota; }
};

struct ProfileStats {
  uint64_t runs = 0;            // traces profiled
  uint64_t steps = 0;           // total execution steps over profiled traces
  uint64_t pairs = 0;           // profiled pairs
  uint64_t both_halt = 0;
  std::map<std::string, uint64_t> reasons;  // termination reason histogram

  double mean_exec_len() const { return runs ? double(steps) / double(runs) : 0.0; }
  double both_halt_fraction() const { return pairs ? double(both_halt) / double(pairs) : 0.0; }
  void merge(const ProfileStats& o);
};

struct MutantStats {
  std::string mutant;
  uint64_t tests = 0;
  uint64_t passes = 0;
  uint64_t discards = 0;
  uint64_t fails = 0;
  uint64_t tests_to_first_fail = 0;
  double search_ms = 0;  // generation + checking time, shrinking excluded
  double shrink_ms = 0;
  ProfileStats profile;

  bool found() const { return fails > 0; }
  double mttf_ms() const { return fails ? search_ms / double(fails) : 0.0; }
  double tests_per_sec() const { return search_ms > 0 ? double(tests) * 1000.0 / search_ms : 0.0; }
  double discard_fraction() const { return tests ? double(discards) / double(tests) : 0.0; }
};

struct CampaignStats {
  std::vector<MutantStats> per_mutant;
  double arithmetic_mean_mttf() const;
  double geometric_mean_mttf() const;
  size_t found_count() const;
};

struct FoundCounterexample {
  std::string mutant;
  std::variant<Variation<SState>, Variation<RState>> var;
  std::string rendered;
  bool shrunk = false;
  bool shrink_budget_exhausted = false;
};

struct CampaignResult {
  CampaignStats stats;
  std::vector<FoundCounterexample> counterexamples;
};

CampaignResult run_campaign(const CampaignConfig& cfg, const Lattice& lat);

// Generation statistics only: runs pairs of the given strategy under the
// selected rules and tallies execution profiles plus the property's
// discard rate.
struct ProfileReport {
  ProfileStats profile;
  uint64_t tests = 0;
  uint64_t discards = 0;
  double discard_fraction() const { return tests ? double(discards) / double(tests) : 0.0; }
};
ProfileReport run_profile(const CampaignConfig& cfg, const Lattice& lat, uint64_t pairs);

// Counterexample rendering in the merged two-machine format.
std::string render_counterexample(const Lattice& lat, const Counterexample<SState>& ce);
std::string render_counterexample(const Lattice& lat, const Counterexample<RState>& ce);
std::string render_merged_program(const Lattice& lat, const SProgram& a, const SProgram& b);

enum class ReportFormat : uint8_t { CSV, JSON, MARKDOWN };
std::optional<ReportFormat> parse_format(const std::string& name);
std::string emit_report(const CampaignStats& stats, ReportFormat format);
// Parses a CSV/JSON report back; used by round-trip checks.
std::optional<CampaignStats> parse_report_json(const std::string& text);

std::vector<std::string> mutant_names(MachineKind m);

}  // namespace flowtest
