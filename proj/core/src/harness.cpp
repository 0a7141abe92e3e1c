#include "flowtest/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

namespace flowtest {

const char* to_string(MachineKind m) {
  switch (m) {
    case MachineKind::STACK_BASIC: return "stack-basic";
    case MachineKind::STACK_CF: return "stack-cf";
    case MachineKind::REGISTER: return "register";
  }
  return "?";
}

std::optional<MachineKind> parse_machine(const std::string& name) {
  if (name == "stack-basic") return MachineKind::STACK_BASIC;
  if (name == "stack-cf") return MachineKind::STACK_CF;
  if (name == "register") return MachineKind::REGISTER;
  return std::nullopt;
}

void ProfileStats::merge(const ProfileStats& o) {
  runs += o.runs;
  steps += o.steps;
  pairs += o.pairs;
  both_halt += o.both_halt;
  for (auto& [k, v] : o.reasons) reasons[k] += v;
}

double CampaignStats::arithmetic_mean_mttf() const {
  double sum = 0;
  size_t n = 0;
  for (auto& m : per_mutant)
    if (m.found()) {
      sum += m.mttf_ms();
      ++n;
    }
  return n ? sum / double(n) : 0.0;
}

double CampaignStats::geometric_mean_mttf() const {
  double logsum = 0;
  size_t n = 0;
  for (auto& m : per_mutant)
    if (m.found() && m.mttf_ms() > 0) {
      logsum += std::log(m.mttf_ms());
      ++n;
    }
  return n ? std::exp(logsum / double(n)) : 0.0;
}

size_t CampaignStats::found_count() const {
  size_t n = 0;
  for (auto& m : per_mutant)
    if (m.found()) ++n;
  return n;
}

std::vector<std::string> mutant_names(MachineKind m) {
  std::vector<std::string> out;
  if (m == MachineKind::REGISTER) {
    for (RMutant x : all_rmutants()) out.push_back(to_string(x));
  } else {
    for (SMutant x : smutants_for_tier(m == MachineKind::STACK_CF)) out.push_back(to_string(x));
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

const char* reason_name(const StopReason stop, StuckKind detail) {
  if (stop == StopReason::FuelExhausted) return "fuel exhausted";
  return to_string(detail);
}

template <class Model, class GenT, class State>
void profile_pair(const CampaignConfig& cfg, const Model& model, const Variation<State>& v,
                  ProfileStats& p) {
  auto t1 = model.run(v.left, cfg.prop.fuel);
  auto t2 = model.run(v.right, cfg.prop.fuel);
  p.runs += 2;
  p.pairs += 1;
  p.steps += t1.steps() + t2.steps();
  p.reasons[reason_name(t1.stop, t1.detail)]++;
  p.reasons[reason_name(t2.stop, t2.detail)]++;
  if (t1.stop == StopReason::Halted && t2.stop == StopReason::Halted) p.both_halt++;
}

template <class Model, class GenT>
MutantStats run_mutant(const CampaignConfig& cfg, const Lattice& lat, const Model& model,
                       const GenT& gen, const std::string& mutant_name, size_t mutant_index,
                       std::vector<FoundCounterexample>& ces) {
  MutantStats st;
  st.mutant = mutant_name;
  const auto t0 = Clock::now();
  double shrink_ms = 0;

  for (uint64_t test_idx = 0;; ++test_idx) {
    if (cfg.test_budget >= 0 && st.tests >= static_cast<uint64_t>(cfg.test_budget)) break;
    if (cfg.ce_quota && st.fails >= static_cast<uint64_t>(cfg.ce_quota)) break;
    if (cfg.time_budget_ms && ms_since(t0) - shrink_ms >= double(cfg.time_budget_ms)) break;
    if (cfg.test_budget < 0 && !cfg.time_budget_ms && !cfg.ce_quota) break;

    Rng rng(Rng::derive(cfg.seed, mutant_index, test_idx));
    auto pair = gen_pair(rng, gen, cfg.prop.start, cfg.prop.relation);
    auto verdict = check_property(cfg.prop, model, pair);
    st.tests++;
    if (verdict.pass()) st.passes++;
    if (verdict.discarded()) st.discards++;
    if (cfg.profile_every && test_idx % static_cast<uint64_t>(cfg.profile_every) == 0)
      profile_pair<Model, GenT>(cfg, model, pair, st.profile);

    if (!verdict.fail()) continue;
    st.fails++;
    if (st.fails == 1) st.tests_to_first_fail = st.tests;

    const auto s0 = Clock::now();
    FoundCounterexample found;
    found.mutant = mutant_name;
    auto minimized = pair;
    if (cfg.shrink_on) {
      auto still_fails = [&](const decltype(pair)& v) {
        return check_property(cfg.prop, model, v).fail();
      };
      auto res =
          shrink_loop<typename Model::State>(cfg.shrink, cfg.prop.relation, lat, still_fails, pair);
      minimized = res.var;
      found.shrunk = true;
      found.shrink_budget_exhausted = res.budget_exhausted;
    }
    auto final_verdict = check_property(cfg.prop, model, minimized);
    if (final_verdict.ce) found.rendered = render_counterexample(lat, *final_verdict.ce);
    found.var = minimized;
    ces.push_back(std::move(found));
    shrink_ms += ms_since(s0);
  }
  st.shrink_ms = shrink_ms;
  st.search_ms = ms_since(t0) - shrink_ms;
  return st;
}

struct MutantJob {
  std::string name;
  size_t index;
};

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg, const Lattice& lat) {
  if (!cfg.has_stop_criterion())
    throw std::runtime_error("campaign needs a test, time, or counterexample budget");

  std::vector<std::string> mutants = cfg.mutants;
  if (mutants.empty()) mutants = mutant_names(cfg.machine);
  for (auto& name : mutants) {
    bool ok = cfg.machine == MachineKind::REGISTER
                  ? (parse_rmutant(name).has_value())
                  : (parse_smutant(name).has_value() &&
                     (cfg.machine == MachineKind::STACK_CF ||
                      static_cast<int>(*parse_smutant(name)) <= kBasicMutantCount));
    if (!ok && name != "CORRECT")
      throw std::runtime_error("unknown mutant for this machine: " + name);
  }

  CampaignResult result;
  result.stats.per_mutant.resize(mutants.size());
  std::vector<std::vector<FoundCounterexample>> ces(mutants.size());

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= mutants.size()) return;
      const std::string& name = mutants[i];
      if (cfg.machine == MachineKind::REGISTER) {
        RegisterModel model{RRuleSet{&lat, *parse_rmutant(name)}};
        RegisterGen gen{&lat, cfg.strategy, cfg.num_regs};
        result.stats.per_mutant[i] = run_mutant(cfg, lat, model, gen, name, i, ces[i]);
      } else {
        StackModel model{SRuleSet{&lat, *parse_smutant(name)}};
        StackGen gen{&lat, cfg.machine == MachineKind::STACK_CF, cfg.strategy};
        result.stats.per_mutant[i] = run_mutant(cfg, lat, model, gen, name, i, ces[i]);
      }
    }
  };

  int workers = std::max(1, cfg.workers);
  if (workers == 1 || mutants.size() == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& v : ces)
    for (auto& ce : v) result.counterexamples.push_back(std::move(ce));
  return result;
}

ProfileReport run_profile(const CampaignConfig& cfg, const Lattice& lat, uint64_t pairs) {
  ProfileReport report;
  std::string mutant = cfg.mutants.empty() ? "CORRECT" : cfg.mutants[0];
  auto one = [&](auto model, auto gen) {
    for (uint64_t i = 0; i < pairs; ++i) {
      Rng rng(Rng::derive(cfg.seed, 0x9e0f, i));
      auto pair = gen_pair(rng, gen, cfg.prop.start, cfg.prop.relation);
      profile_pair<decltype(model), decltype(gen)>(cfg, model, pair, report.profile);
      auto verdict = check_property(cfg.prop, model, pair);
      report.tests++;
      if (verdict.discarded()) report.discards++;
    }
  };
  if (cfg.machine == MachineKind::REGISTER) {
    auto m = parse_rmutant(mutant);
    one(RegisterModel{RRuleSet{&lat, m.value_or(RMutant::CORRECT)}},
        RegisterGen{&lat, cfg.strategy, cfg.num_regs});
  } else {
    auto m = parse_smutant(mutant);
    one(StackModel{SRuleSet{&lat, m.value_or(SMutant::CORRECT)}},
        StackGen{&lat, cfg.machine == MachineKind::STACK_CF, cfg.strategy});
  }
  return report;
}

// --- reports ---

std::optional<ReportFormat> parse_format(const std::string& name) {
  if (name == "csv") return ReportFormat::CSV;
  if (name == "json") return ReportFormat::JSON;
  if (name == "md" || name == "markdown") return ReportFormat::MARKDOWN;
  return std::nullopt;
}

namespace {

std::string fmt(double v, int prec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

}  // namespace

std::string emit_report(const CampaignStats& stats, ReportFormat format) {
  if (format == ReportFormat::JSON) {
    nlohmann::ordered_json j;
    j["mutants"] = nlohmann::ordered_json::array();
    for (auto& m : stats.per_mutant) {
      nlohmann::ordered_json row;
      row["mutant"] = m.mutant;
      if (m.found()) row["mttf_ms"] = fmt(m.mttf_ms(), 3);
      else row["mttf_ms"] = nullptr;
      row["tests"] = m.tests;
      row["tests_per_sec"] = fmt(m.tests_per_sec(), 1);
      row["discard_pct"] = fmt(100.0 * m.discard_fraction(), 2);
      row["found"] = m.found();
      row["tests_to_first_fail"] = m.tests_to_first_fail;
      row["fails"] = m.fails;
      row["discards"] = m.discards;
      row["search_ms"] = fmt(m.search_ms, 3);
      j["mutants"].push_back(row);
    }
    j["aggregate"]["arithmetic_mean_mttf"] = fmt(stats.arithmetic_mean_mttf(), 3);
    j["aggregate"]["geometric_mean_mttf"] = fmt(stats.geometric_mean_mttf(), 3);
    j["aggregate"]["found"] = stats.found_count();
    return j.dump(2) + "\n";
  }

  if (format == ReportFormat::CSV) {
    std::string out = "mutant,mttf_ms,tests,tests_per_sec,discard_pct,found\n";
    for (auto& m : stats.per_mutant) {
      out += m.mutant + ",";
      out += (m.found() ? fmt(m.mttf_ms(), 3) : "") + ",";
      out += std::to_string(m.tests) + ",";
      out += fmt(m.tests_per_sec(), 1) + ",";
      out += fmt(100.0 * m.discard_fraction(), 2) + ",";
      out += m.found() ? "yes" : "no";
      out += "\n";
    }
    out += "arithmetic_mean_mttf," + fmt(stats.arithmetic_mean_mttf(), 3) + ",,,,\n";
    out += "geometric_mean_mttf," + fmt(stats.geometric_mean_mttf(), 3) + ",,,,\n";
    return out;
  }

  std::string out = "| mutant | MTTF (ms) | tests | tests/s | discard % | found |\n";
  out += "|---|---|---|---|---|---|\n";
  for (auto& m : stats.per_mutant) {
    out += "| " + m.mutant + " | " + (m.found() ? fmt(m.mttf_ms(), 3) : "—") + " | " +
           std::to_string(m.tests) + " | " + fmt(m.tests_per_sec(), 1) + " | " +
           fmt(100.0 * m.discard_fraction(), 2) + " | " + (m.found() ? "yes" : "no") + " |\n";
  }
  out += "| arithmetic mean | " + fmt(stats.arithmetic_mean_mttf(), 3) + " | | | | |\n";
  out += "| geometric mean | " + fmt(stats.geometric_mean_mttf(), 3) + " | | | | |\n";
  return out;
}

std::optional<CampaignStats> parse_report_json(const std::string& text) {
  auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.contains("mutants")) return std::nullopt;
  CampaignStats stats;
  for (auto& row : j["mutants"]) {
    MutantStats m;
    m.mutant = row["mutant"].get<std::string>();
    m.tests = row["tests"].get<uint64_t>();
    m.tests_to_first_fail = row["tests_to_first_fail"].get<uint64_t>();
    m.fails = row["fails"].get<uint64_t>();
    m.discards = row["discards"].get<uint64_t>();
    m.search_ms = std::stod(row["search_ms"].get<std::string>());
    m.passes = m.tests - m.fails - m.discards;
    stats.per_mutant.push_back(std::move(m));
  }
  return stats;
}

}  // namespace flowtest
