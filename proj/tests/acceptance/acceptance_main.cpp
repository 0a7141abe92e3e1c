// Acceptance suite: every criterion prints one PASS/FAIL line. Run a
// subset with e.g. `flowtest_acceptance c1 c8`, or everything with no
// arguments. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "flowtest/config.hpp"
#include "flowtest/fixtures.hpp"
#include "flowtest/harness.hpp"

using namespace flowtest;

namespace {

using Clock = std::chrono::steady_clock;

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void record(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

void progress(const std::string& what) {
  std::fprintf(stderr, "... %s\n", what.c_str());
}

constexpr uint64_t kSeed = 2026;

GenStrategy stack_byexec() {
  GenStrategy s;
  s.kind = GenKind::BY_EXEC;
  return s;
}

GenStrategy reg_byexec() {
  GenStrategy s;
  s.kind = GenKind::BY_EXEC;
  s.probe_skip = 0.1;
  return s;
}

CampaignConfig base_cfg(MachineKind machine, Property prop, StartSet start, EndSet end,
                        RelKind rel, GenKind gen) {
  CampaignConfig cfg;
  cfg.machine = machine;
  cfg.prop.property = prop;
  cfg.prop.start = start;
  cfg.prop.end = end;
  cfg.prop.relation.kind = rel;
  cfg.prop.relation.obs = Label{0};
  cfg.prop.fuel = 50;
  cfg.strategy = machine == MachineKind::REGISTER ? reg_byexec() : stack_byexec();
  cfg.strategy.kind = gen;
  cfg.seed = kSeed;
  cfg.shrink_on = false;
  cfg.profile_every = 0;
  return cfg;
}

std::string fixture_dir() {
  for (const char* dir : {"fixtures", "../fixtures", "../../fixtures", "../../../fixtures"})
    if (!list_fixture_files(dir).empty()) return dir;
  return "fixtures";
}

// --- criterion 1: zero failures on the correct machines ---

bool c1() {
  auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  auto run_correct = [&](const char* what, CampaignConfig cfg, const Lattice& lat) {
    cfg.mutants = {"CORRECT"};
    cfg.test_budget = 10000;
    cfg.ce_quota = 0;
    auto result = run_campaign(cfg, lat);
    uint64_t fails = result.stats.per_mutant[0].fails;
    if (fails) ok = false;
    detail += std::string(what) + "=" + std::to_string(fails) + " ";
    progress(std::string("c1 ") + what + " done");
  };
  Lattice two = Lattice::two_point();
  Lattice dia = Lattice::diamond();
  run_correct("basic-eeni", base_cfg(MachineKind::STACK_BASIC, Property::EENI, StartSet::INIT,
                                     EndSet::HALTED, RelKind::MEM, GenKind::BY_EXEC), two);
  run_correct("cf-eeni", base_cfg(MachineKind::STACK_CF, Property::EENI, StartSet::INIT,
                                  EndSet::HALTED_AND_LOW, RelKind::MEM, GenKind::BY_EXEC), two);
  run_correct("cf-llni", base_cfg(MachineKind::STACK_CF, Property::LLNI, StartSet::QUASI_INIT,
                                  EndSet::HALTED_AND_LOW, RelKind::LOW, GenKind::BY_EXEC), two);
  run_correct("cf-ssni", base_cfg(MachineKind::STACK_CF, Property::SSNI, StartSet::TINY,
                                  EndSet::HALTED_AND_LOW, RelKind::FULL, GenKind::TINY_SSNI), two);
  run_correct("reg-msni", base_cfg(MachineKind::REGISTER, Property::MSNI, StartSet::ANY,
                                   EndSet::HALTED_AND_LOW, RelKind::FULL_WS, GenKind::BY_EXEC),
              dia);
  double elapsed = secs_since(t0);
  bool in_time = elapsed < 300.0;
  record("C1 correct-machines-zero-failures", ok && in_time,
         "failure counts: " + detail + "| elapsed " + std::to_string(int(elapsed)) +
             "s (target < 300s)");
  return ok && in_time;
}

// --- criterion 2: basic-machine mutants, by-exec and naive columns ---

bool c2() {
  Lattice two = Lattice::two_point();
  bool ok = true;
  std::string detail;

  CampaignConfig byexec = base_cfg(MachineKind::STACK_BASIC, Property::EENI, StartSet::INIT,
                                   EndSet::HALTED, RelKind::MEM, GenKind::BY_EXEC);
  byexec.time_budget_ms = 60000;
  auto result = run_campaign(byexec, two);
  for (auto& m : result.stats.per_mutant)
    if (!m.found()) {
      ok = false;
      detail += m.mutant + " missed by by-exec; ";
    }
  progress("c2 by-exec column done");

  CampaignConfig naive = base_cfg(MachineKind::STACK_BASIC, Property::EENI, StartSet::INIT,
                                  EndSet::HALTED, RelKind::MEM, GenKind::NAIVE);
  naive.time_budget_ms = 300000;
  naive.mutants = {"ADD_NO_TAINT", "PUSH_NO_TAINT", "STORE_NO_VALUE_TAINT",
                   "WRITE_DOWN_THROUGH_HIGH_PTR", "LOAD_NO_TAINT"};
  auto naive_result = run_campaign(naive, two);
  for (auto& m : naive_result.stats.per_mutant) {
    bool should_find = m.mutant != "LOAD_NO_TAINT";
    if (should_find && !m.found()) {
      ok = false;
      detail += m.mutant + " missed by naive; ";
    }
    if (!should_find && m.found()) {
      ok = false;
      detail += "naive unexpectedly found LOAD_NO_TAINT; ";
    }
  }
  progress("c2 naive column done");
  if (detail.empty())
    detail = "by-exec found all 6 within 60s; naive found the easy 4 and missed LOAD_NO_TAINT "
             "over its full 300s budget";
  record("C2 basic-mutant-detection", ok, detail);
  return ok;
}

// --- criterion 3: strategy ladder ordering ---

bool c3() {
  Lattice two = Lattice::two_point();
  const std::vector<GenKind> ladder = {GenKind::NAIVE, GenKind::WEIGHTED, GenKind::SEQUENCE,
                                       GenKind::SEQUENCE_SMART_INTS, GenKind::BY_EXEC};
  const std::vector<std::string> bugs = {"ADD_NO_TAINT", "PUSH_NO_TAINT",
                                         "STORE_NO_VALUE_TAINT", "WRITE_DOWN_THROUGH_HIGH_PTR"};
  const std::vector<uint64_t> seeds = {101, 202, 303};

  bool ok = true;
  std::string detail;
  std::vector<double> geomean;
  for (GenKind kind : ladder) {
    double logsum = 0;
    int n = 0;
    for (uint64_t seed : seeds) {
      CampaignConfig cfg = base_cfg(MachineKind::STACK_BASIC, Property::EENI, StartSet::INIT,
                                    EndSet::HALTED, RelKind::MEM, kind);
      cfg.mutants = bugs;
      cfg.seed = seed;
      // the paper protocol: a fixed budget, counting every counterexample,
      // so the mean settles instead of resting on a single observation
      cfg.time_budget_ms = 120000;
      cfg.test_budget = kind == GenKind::NAIVE || kind == GenKind::WEIGHTED ? 400000 : 150000;
      cfg.ce_quota = 4000;
      auto result = run_campaign(cfg, two);
      for (auto& m : result.stats.per_mutant) {
        if (!m.found()) {
          ok = false;
          detail += std::string(to_string(kind)) + " missed " + m.mutant + "; ";
          continue;
        }
        logsum += std::log(std::max(m.mttf_ms(), 1e-3));
        ++n;
      }
    }
    geomean.push_back(n ? std::exp(logsum / n) : 1e18);
    progress(std::string("c3 ") + to_string(kind) + " done");
  }
  for (size_t i = 0; i + 1 < geomean.size(); ++i)
    if (!(geomean[i] > geomean[i + 1])) {
      ok = false;
      detail += std::string(to_string(ladder[i])) + " not strictly worse than " +
                to_string(ladder[i + 1]) + "; ";
    }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "geometric mean MTTF ms over 3 seeds x 4 bugs: naive=%.2f weighted=%.2f "
                "sequence=%.2f seqints=%.2f byexec=%.2f",
                geomean[0], geomean[1], geomean[2], geomean[3], geomean[4]);
  record("C3 strategy-ladder-ordering", ok, detail + buf);
  return ok;
}

// --- criterion 4: control-flow machine ---

bool c4() {
  Lattice two = Lattice::two_point();
  bool ok = true;
  std::string detail;

  CampaignConfig tiny = base_cfg(MachineKind::STACK_CF, Property::SSNI, StartSet::TINY,
                                 EndSet::HALTED_AND_LOW, RelKind::FULL, GenKind::TINY_SSNI);
  tiny.time_budget_ms = 5000;
  auto tiny_result = run_campaign(tiny, two);
  int tiny_found = 0;
  for (auto& m : tiny_result.stats.per_mutant) {
    if (m.found()) ++tiny_found;
    else {
      ok = false;
      detail += m.mutant + " missed by tiny+ssni; ";
    }
  }
  progress("c4 tiny-ssni column done");

  CampaignConfig byexec = base_cfg(MachineKind::STACK_CF, Property::EENI, StartSet::INIT,
                                   EndSet::HALTED_AND_LOW, RelKind::MEM, GenKind::BY_EXEC);
  byexec.time_budget_ms = 300000;
  auto eeni_result = run_campaign(byexec, two);
  int found = 0;
  std::string missed;
  for (auto& m : eeni_result.stats.per_mutant) {
    if (m.found()) ++found;
    else missed += m.mutant + " ";
  }
  if (found < 12) {
    ok = false;
    detail += "by-exec+eeni found only " + std::to_string(found) + "/14; ";
  }
  progress("c4 by-exec eeni column done");
  record("C4 control-flow-machine", ok,
         detail + "ssni found " + std::to_string(tiny_found) + "/14 within 5s; eeni found " +
             std::to_string(found) + "/14 within 300s each" +
             (missed.empty() ? "" : " (missed: " + missed + ")"));
  return ok;
}

// --- criterion 5: register machine ---

bool c5() {
  Lattice dia = Lattice::diamond();
  bool ok = true;
  std::string detail;

  CampaignConfig optimized = base_cfg(MachineKind::REGISTER, Property::MSNI, StartSet::ANY,
                                      EndSet::HALTED_AND_LOW, RelKind::FULL_WS, GenKind::BY_EXEC);
  optimized.time_budget_ms = 10000;
  auto msni = run_campaign(optimized, dia);
  int found = 0;
  for (auto& m : msni.stats.per_mutant) {
    if (m.found()) ++found;
    else {
      ok = false;
      detail += m.mutant + " missed by optimized msni; ";
    }
  }
  progress("c5 optimized msni done (" + std::to_string(found) + "/38)");

  CampaignConfig baseline = base_cfg(MachineKind::REGISTER, Property::EENI, StartSet::INIT,
                                     EndSet::HALTED_AND_LOW, RelKind::INTS_IN_REGS,
                                     GenKind::BY_EXEC);
  baseline.time_budget_ms = 300000;
  auto eeni = run_campaign(baseline, dia);
  int missed = 0;
  for (auto& m : eeni.stats.per_mutant)
    if (!m.found()) ++missed;
  if (missed < 10) {
    ok = false;
    detail += "baseline eeni missed only " + std::to_string(missed) + " mutants; ";
  }
  progress("c5 baseline eeni done");
  record("C5 register-machine", ok,
         detail + "optimized msni found " + std::to_string(found) +
             "/38 within 10s each; baseline eeni missed " + std::to_string(missed) +
             "/38 within 300s each");
  return ok;
}

// --- criterion 6: well-stampedness along correct traces ---

bool c6() {
  Lattice dia = Lattice::diamond();
  RegisterGen gen{&dia, reg_byexec()};
  RRuleSet correct{&dia, RMutant::CORRECT};
  Relation rel{RelKind::FULL_WS, dia.bottom()};
  uint64_t steps = 0, states = 0, violations = 0, pair_idx = 0;
  while (steps < 1000000) {
    Rng rng(Rng::derive(kSeed, 0xc6, pair_idx));
    auto v = gen_pair(rng, gen, StartSet::ANY, rel);
    for (const RState* s : {&v.left, &v.right}) {
      auto t = run_trace(correct, *s, 50);
      steps += t.steps();
      for (auto& st : t.states) {
        ++states;
        if (!well_stamped(dia, st)) ++violations;
      }
    }
    ++pair_idx;
    if (pair_idx % 20000 == 0) progress("c6 " + std::to_string(steps) + " steps so far");
  }
  record("C6 well-stamped-preservation", violations == 0,
         std::to_string(violations) + " violations over " + std::to_string(steps) + " steps / " +
             std::to_string(states) + " states");
  return violations == 0;
}

// --- criterion 7: shrinking quality ---

// exhaustive minimal counterexample length for the basic ISA, or 0 when
// none exists within the length bound
int brute_min_length(const Lattice& lat, SMutant mutant, int max_len) {
  Label L = lat.bottom(), H = lat.top();
  std::vector<SInstr> instrs = {SInstr::noop(), SInstr::halt(), SInstr::pop(),
                                SInstr::load(), SInstr::store(), SInstr::add()};
  for (int64_t v : {0, 1})
    for (Label l : {L, H}) instrs.push_back(SInstr::push({v, l}));
  PropertyCfg cfg;
  cfg.property = Property::EENI;
  cfg.relation = {RelKind::MEM, L};
  cfg.end = EndSet::HALTED;
  cfg.fuel = 10;
  StackModel model{SRuleSet{&lat, mutant}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<size_t> idx(static_cast<size_t>(len), 0);
    for (;;) {
      SProgram prog;
      for (size_t i : idx) prog.push_back(instrs[i]);
      std::vector<size_t> high;
      for (size_t i = 0; i < prog.size(); ++i)
        if (prog[i].op == SOp::Push && prog[i].imm.label == H) high.push_back(i);
      for (uint64_t mask = 1; mask < (1ull << high.size()); ++mask) {
        SProgram varied = prog;
        for (size_t b = 0; b < high.size(); ++b)
          if (mask & (1ull << b)) varied[high[b]].imm.value ^= 1;
        Variation<SState> v{initial_sstate(std::make_shared<const SProgram>(prog), 2, lat),
                            initial_sstate(std::make_shared<const SProgram>(varied), 2, lat)};
        if (check_property(cfg, model, v).fail()) return len;
      }
      size_t k = 0;
      while (k < idx.size() && ++idx[k] == instrs.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return 0;
}

bool c7() {
  Lattice two = Lattice::two_point();
  Label L = two.bottom(), H = two.top();
  bool ok = true;
  std::string detail;

  // part 1: one hundred shrunk write-down counterexamples, canonical shape
  PropertyCfg cfg;
  cfg.property = Property::EENI;
  cfg.relation = {RelKind::MEM, L};
  cfg.start = StartSet::INIT;
  cfg.end = EndSet::HALTED;
  cfg.fuel = 50;
  StackModel buggy{SRuleSet{&two, SMutant::WRITE_DOWN_THROUGH_HIGH_PTR}};
  StackGen gen{&two, false, GenStrategy{GenKind::SEQUENCE_SMART_INTS}};
  auto still_fails = [&](const Variation<SState>& v) {
    return check_property(cfg, buggy, v).fail();
  };
  ShrinkConfig sc;
  int canonical = 0, total = 0;
  for (uint64_t i = 0; total < 100; ++i) {
    Rng rng(Rng::derive(kSeed, 0xc7, i));
    auto v = gen_pair(rng, gen, StartSet::INIT, cfg.relation);
    if (!still_fails(v)) continue;
    auto res = shrink_loop<SState>(sc, cfg.relation, two, still_fails, v);
    ++total;
    const SProgram& a = *res.var.left.imem;
    const SProgram& b = *res.var.right.imem;
    bool canon = a.size() == 4 && a[0].op == SOp::Push && a[1].op == SOp::Push &&
                 a[2].op == SOp::Store && a[3].op == SOp::Halt && a[0].imm.label == L &&
                 a[0].imm == b[0].imm && a[1].imm.label == H && b[1].imm.label == H &&
                 a[1].imm.value != b[1].imm.value;
    if (canon) ++canonical;
  }
  if (canonical != 100) {
    ok = false;
    detail += "canonical shapes " + std::to_string(canonical) + "/100; ";
  }
  progress("c7 canonical shapes done (" + std::to_string(canonical) + "/100)");

  // part 2: shrunk output is a re-verified local minimum for every mutant
  for (SMutant m : smutants_for_tier(true)) {
    CampaignConfig camp = base_cfg(MachineKind::STACK_CF, Property::SSNI, StartSet::TINY,
                                   EndSet::HALTED_AND_LOW, RelKind::FULL, GenKind::TINY_SSNI);
    camp.mutants = {to_string(m)};
    camp.time_budget_ms = 5000;
    camp.shrink_on = true;
    camp.shrink = sc;
    auto result = run_campaign(camp, two);
    if (result.counterexamples.empty()) {
      ok = false;
      detail += std::string("no counterexample to shrink for ") + to_string(m) + "; ";
      continue;
    }
    auto& var = std::get<Variation<SState>>(result.counterexamples[0].var);
    StackModel mm{SRuleSet{&two, m}};
    PropertyCfg scfg = camp.prop;
    auto fail_here = [&](const Variation<SState>& x) {
      return check_property(scfg, mm, x).fail();
    };
    if (!fail_here(var)) {
      ok = false;
      detail += std::string("shrunk output no longer fails for ") + to_string(m) + "; ";
      continue;
    }
    for (auto& c : shrink_candidates(scfg.relation, two, var)) {
      if (fail_here(c)) {
        ok = false;
        detail += std::string("not locally minimal: ") + to_string(m) + "; ";
        break;
      }
    }
  }
  progress("c7 per-mutant local minimality done");

  // part 3: brute-force minimal-length oracle for the basic ISA
  for (SMutant m : smutants_for_tier(false)) {
    int min_len = brute_min_length(two, m, 5);
    if (min_len == 0) continue;  // oracle infeasible within the bound
    StackModel model{SRuleSet{&two, m}};
    auto fails_m = [&](const Variation<SState>& v) {
      return check_property(cfg, model, v).fail();
    };
    bool got = false;
    for (uint64_t i = 0; i < 400000 && !got; ++i) {
      Rng rng(Rng::derive(kSeed, 0x3c7, i));
      auto v = gen_pair(rng, gen, StartSet::INIT, cfg.relation);
      if (!fails_m(v)) continue;
      got = true;
      auto res = shrink_loop<SState>(sc, cfg.relation, two, fails_m, v);
      size_t n = res.var.left.imem->size();
      if (n > static_cast<size_t>(min_len + 2)) {
        ok = false;
        detail += std::string(to_string(m)) + " shrunk to " + std::to_string(n) + " > oracle " +
                  std::to_string(min_len) + "+2; ";
      }
    }
    progress(std::string("c7 oracle for ") + to_string(m) + " done (min " +
             std::to_string(min_len) + ")");
  }
  if (detail.empty())
    detail = "100/100 canonical; every shrunk output locally minimal; all within oracle bound +2";
  record("C7 shrinking-quality", ok, detail);
  return ok;
}

// --- criterion 8: exhaustive small-program oracle ---

bool c8() {
  auto t0 = Clock::now();
  Lattice two = Lattice::two_point();
  Label L = two.bottom(), H = two.top();
  std::vector<SInstr> instrs = {SInstr::noop(), SInstr::halt(), SInstr::pop(),
                                SInstr::load(), SInstr::store(), SInstr::add()};
  for (int64_t v : {0, 1})
    for (Label l : {L, H}) instrs.push_back(SInstr::push({v, l}));
  std::vector<Atom> atoms;
  for (int64_t v : {0, 1})
    for (Label l : {L, H}) atoms.push_back({v, l});

  PropertyCfg cfg;
  cfg.property = Property::EENI;
  cfg.relation = {RelKind::MEM, L};
  cfg.end = EndSet::HALTED;
  cfg.fuel = 10;

  std::map<SMutant, uint64_t> fails;
  uint64_t checked = 0;
  // data stacks up to depth three over the small payload domain
  std::vector<std::vector<StackEntry>> stacks = {{}};
  for (size_t round = 0; round < 3; ++round) {
    size_t end = stacks.size();
    for (size_t i = 0; i < end; ++i) {
      if (stacks[i].size() != round) continue;
      for (const Atom& a : atoms) {
        auto s = stacks[i];
        s.push_back(StackEntry::data(a));
        stacks.push_back(std::move(s));
      }
    }
  }

  for (SMutant m : {SMutant::CORRECT, SMutant::PUSH_NO_TAINT, SMutant::ADD_NO_TAINT}) {
    StackModel model{SRuleSet{&two, m}};
    for (size_t len = 1; len <= 3; ++len) {
      std::vector<size_t> idx(len, 0);
      for (;;) {
        SProgram prog;
        for (size_t i : idx) prog.push_back(instrs[i]);
        auto shared = std::make_shared<const SProgram>(prog);
        std::vector<size_t> high_prog;
        for (size_t i = 0; i < prog.size(); ++i)
          if (prog[i].op == SOp::Push && prog[i].imm.label == H) high_prog.push_back(i);
        for (auto& stack : stacks) {
          std::vector<size_t> high_stack;
          for (size_t i = 0; i < stack.size(); ++i)
            if (stack[i].atom.label == H) high_stack.push_back(i);
          size_t bits = high_prog.size() + high_stack.size();
          for (uint64_t mask = 0; mask < (1ull << bits); ++mask) {
            SState left;
            left.imem = shared;
            left.stack = stack;
            left.mem = {{0, L}, {0, L}};
            left.pc = {0, L};
            SState right = left;
            if (!high_prog.empty()) {
              SProgram varied = prog;
              for (size_t b = 0; b < high_prog.size(); ++b)
                if (mask & (1ull << b)) varied[high_prog[b]].imm.value ^= 1;
              right.imem = std::make_shared<const SProgram>(std::move(varied));
            }
            for (size_t b = 0; b < high_stack.size(); ++b)
              if (mask & (1ull << (high_prog.size() + b)))
                right.stack[high_stack[b]].atom.value ^= 1;
            Variation<SState> v{std::move(left), std::move(right)};
            ++checked;
            if (check_property(cfg, model, v).fail()) fails[m]++;
          }
        }
        size_t k = 0;
        while (k < idx.size() && ++idx[k] == instrs.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
    progress(std::string("c8 enumerated ") + to_string(m));
  }
  bool ok = fails[SMutant::CORRECT] == 0 && fails[SMutant::PUSH_NO_TAINT] > 0 &&
            fails[SMutant::ADD_NO_TAINT] > 0;
  double elapsed = secs_since(t0);
  record("C8 brute-force-oracle", ok && elapsed < 60.0,
         "checked " + std::to_string(checked) + " pairs per rule set; failing pairs: correct=" +
             std::to_string(fails[SMutant::CORRECT]) + " push=" +
             std::to_string(fails[SMutant::PUSH_NO_TAINT]) + " add=" +
             std::to_string(fails[SMutant::ADD_NO_TAINT]) + "; elapsed " +
             std::to_string(int(elapsed)) + "s");
  return ok;
}

// --- criterion 9: fixture regressions ---

bool c9() {
  bool ok = true;
  std::string detail;
  auto files = list_fixture_files(fixture_dir());
  if (files.size() < 20) {
    ok = false;
    detail = "fixture tree missing; ";
  }
  for (auto& path : files) {
    Fixture f = load_fixture_file(path);
    FixtureOutcome outcome = check_fixture(f);
    if (!outcome.ok) {
      ok = false;
      detail += f.name + " mismatched; ";
    }
  }
  if (detail.empty())
    detail = std::to_string(files.size()) + " fixtures reproduce their documented verdicts";
  record("C9 fixture-regressions", ok, detail);
  return ok;
}

// --- criterion 10: metamorphic implications ---

bool c10() {
  bool ok = true;
  std::string detail;
  uint64_t rechecked = 0;

  // every EENI counterexample must also fail LLNI and MSNI under a
  // relation satisfying the strengthening assumptions
  Lattice two = Lattice::two_point();
  auto stack_part = [&](MachineKind machine, EndSet end) {
    CampaignConfig cfg =
        base_cfg(machine, Property::EENI, StartSet::INIT, end, RelKind::MEM, GenKind::BY_EXEC);
    cfg.time_budget_ms = 60000;
    cfg.ce_quota = 5;
    auto result = run_campaign(cfg, two);
    for (auto& ce : result.counterexamples) {
      auto& var = std::get<Variation<SState>>(ce.var);
      auto m = parse_smutant(ce.mutant);
      StackModel model{SRuleSet{&two, *m}};
      PropertyCfg recheck;
      recheck.relation = {RelKind::LOW, two.bottom()};
      recheck.fuel = 50;
      recheck.property = Property::LLNI;
      bool llni = check_property(recheck, model, var).fail();
      recheck.property = Property::MSNI;
      bool msni = check_property(recheck, model, var).fail();
      ++rechecked;
      if (!llni || !msni) {
        ok = false;
        detail += ce.mutant + " implication violated; ";
      }
    }
  };
  stack_part(MachineKind::STACK_BASIC, EndSet::HALTED);
  progress("c10 basic machine done");
  stack_part(MachineKind::STACK_CF, EndSet::HALTED_AND_LOW);
  progress("c10 cf machine done");

  Lattice dia = Lattice::diamond();
  CampaignConfig reg = base_cfg(MachineKind::REGISTER, Property::EENI, StartSet::INIT,
                                EndSet::HALTED_AND_LOW, RelKind::INTS_IN_REGS, GenKind::BY_EXEC);
  reg.time_budget_ms = 30000;
  reg.ce_quota = 2;
  auto result = run_campaign(reg, dia);
  for (auto& ce : result.counterexamples) {
    auto& var = std::get<Variation<RState>>(ce.var);
    auto m = parse_rmutant(ce.mutant);
    RegisterModel model{RRuleSet{&dia, *m}};
    PropertyCfg recheck;
    recheck.relation = {RelKind::FULL_WS, dia.bottom()};
    recheck.fuel = 50;
    recheck.property = Property::LLNI;
    bool llni = check_property(recheck, model, var).fail();
    recheck.property = Property::MSNI;
    bool msni = check_property(recheck, model, var).fail();
    ++rechecked;
    if (!llni || !msni) {
      ok = false;
      detail += ce.mutant + " (register) implication violated; ";
    }
  }
  progress("c10 register machine done");
  if (rechecked == 0) {
    ok = false;
    detail = "no counterexamples collected";
  }
  record("C10 metamorphic-implications", ok,
         detail + std::to_string(rechecked) +
             " counterexamples rechecked under llni and msni, zero violations required");
  return ok;
}

// --- criterion 11: generation health ---

bool c11() {
  Lattice two = Lattice::two_point();
  bool ok = true;
  std::string detail;

  CampaignConfig byexec = base_cfg(MachineKind::STACK_BASIC, Property::EENI, StartSet::INIT,
                                   EndSet::HALTED, RelKind::MEM, GenKind::BY_EXEC);
  byexec.mutants = {"CORRECT"};
  auto prof = run_profile(byexec, two, 3000);
  double both_halt = prof.profile.both_halt_fraction();
  double discard = prof.discard_fraction();
  if (both_halt < 0.85) {
    ok = false;
    detail += "by-exec both-halt below 85%; ";
  }
  if (discard > 0.15) {
    ok = false;
    detail += "by-exec discard above 15%; ";
  }

  CampaignConfig naive = base_cfg(MachineKind::STACK_BASIC, Property::EENI, StartSet::INIT,
                                  EndSet::HALTED, RelKind::MEM, GenKind::NAIVE);
  naive.mutants = {"CORRECT"};
  auto nprof = run_profile(naive, two, 3000);
  double mean_len = nprof.profile.mean_exec_len();
  std::string modal;
  uint64_t modal_count = 0;
  for (auto& [name, count] : nprof.profile.reasons)
    if (count > modal_count) {
      modal_count = count;
      modal = name;
    }
  if (mean_len >= 10.0) {
    ok = false;
    detail += "naive mean execution length not below 10; ";
  }
  if (modal != "stack underflow") {
    ok = false;
    detail += "naive modal failure is " + modal + ", not stack underflow; ";
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "by-exec both-halt %.1f%%, discard %.1f%%; naive mean length %.2f steps, modal "
                "reason '%s'",
                100 * both_halt, 100 * discard, mean_len, modal.c_str());
  record("C11 generation-health", ok, detail + buf);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  std::map<std::string, bool (*)()> criteria = {
      {"c1", c1}, {"c2", c2}, {"c3", c3}, {"c4", c4},   {"c5", c5},   {"c6", c6},
      {"c7", c7}, {"c8", c8}, {"c9", c9}, {"c10", c10}, {"c11", c11},
  };
  std::vector<std::string> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(argv[i]);
  if (wanted.empty())
    for (auto& [name, fn] : criteria) wanted.push_back(name);
  std::sort(wanted.begin(), wanted.end(), [](const std::string& a, const std::string& b) {
    return std::stoi(a.substr(1)) < std::stoi(b.substr(1));
  });

  int failed = 0;
  for (auto& name : wanted) {
    auto it = criteria.find(name);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %s\n", name.c_str());
      return 64;
    }
    if (!it->second()) ++failed;
  }
  return failed;
}
