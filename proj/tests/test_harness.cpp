#include <doctest.h>

#include "flowtest/config.hpp"
#include "flowtest/fixtures.hpp"
#include "flowtest/harness.hpp"

using namespace flowtest;

namespace {

CampaignConfig quick_cfg() {
  CampaignConfig cfg;
  cfg.machine = MachineKind::STACK_BASIC;
  cfg.prop.property = Property::EENI;
  cfg.prop.relation = Relation{RelKind::MEM, Label{0}};
  cfg.prop.start = StartSet::INIT;
  cfg.prop.end = EndSet::HALTED;
  cfg.strategy.kind = GenKind::BY_EXEC;
  cfg.test_budget = 30000;
  cfg.ce_quota = 1;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("a campaign finds the easy bugs and accounts every test") {
  Lattice lat = Lattice::two_point();
  CampaignConfig cfg = quick_cfg();
  cfg.mutants = {"ADD_NO_TAINT", "PUSH_NO_TAINT", "WRITE_DOWN_THROUGH_HIGH_PTR"};
  auto result = run_campaign(cfg, lat);
  REQUIRE(result.stats.per_mutant.size() == 3);
  for (auto& m : result.stats.per_mutant) {
    CAPTURE(m.mutant);
    CHECK(m.found());
    CHECK(m.passes + m.discards + m.fails == m.tests);
    CHECK(m.mttf_ms() > 0);
  }
  CHECK(result.counterexamples.size() == 3);
  for (auto& ce : result.counterexamples) CHECK_FALSE(ce.rendered.empty());
}

TEST_CASE("zero test budget runs nothing and does not crash") {
  Lattice lat = Lattice::two_point();
  CampaignConfig cfg = quick_cfg();
  cfg.test_budget = 0;
  cfg.mutants = {"ADD_NO_TAINT"};
  auto result = run_campaign(cfg, lat);
  CHECK(result.stats.per_mutant[0].tests == 0);
  CHECK(result.counterexamples.empty());
  CHECK(result.stats.found_count() == 0);
}

TEST_CASE("fixed seed gives byte-identical reports") {
  Lattice lat = Lattice::two_point();
  CampaignConfig cfg = quick_cfg();
  cfg.mutants = {"PUSH_NO_TAINT"};
  cfg.test_budget = 2000;
  auto a = run_campaign(cfg, lat);
  auto b = run_campaign(cfg, lat);
  // wall-clock columns differ run to run, so compare the test accounting
  CHECK(a.stats.per_mutant[0].tests == b.stats.per_mutant[0].tests);
  CHECK(a.stats.per_mutant[0].discards == b.stats.per_mutant[0].discards);
  CHECK(a.stats.per_mutant[0].fails == b.stats.per_mutant[0].fails);
  CHECK(a.stats.per_mutant[0].tests_to_first_fail == b.stats.per_mutant[0].tests_to_first_fail);
  REQUIRE(a.counterexamples.size() == b.counterexamples.size());
  for (size_t i = 0; i < a.counterexamples.size(); ++i)
    CHECK(a.counterexamples[i].rendered == b.counterexamples[i].rendered);
  // and the formatted report is byte-identical for equal stats
  CHECK(emit_report(a.stats, ReportFormat::JSON) == emit_report(a.stats, ReportFormat::JSON));
}

TEST_CASE("report formats") {
  CampaignStats stats;
  MutantStats found;
  found.mutant = "ADD_NO_TAINT";
  found.tests = 120;
  found.discards = 30;
  found.fails = 2;
  found.search_ms = 25.0;
  MutantStats missed;
  missed.mutant = "LOAD_NO_TAINT";
  missed.tests = 9000;
  missed.discards = 900;
  stats.per_mutant = {found, missed};

  SUBCASE("one data row per mutant plus two aggregate rows") {
    std::string csv = emit_report(stats, ReportFormat::CSV);
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 1 + 2 + 2);
    CHECK(csv.find("ADD_NO_TAINT,12.500,120") != std::string::npos);
    // a missed mutant renders an empty MTTF field and stays out of the means
    CHECK(csv.find("LOAD_NO_TAINT,,9000") != std::string::npos);
    CHECK(csv.find("arithmetic_mean_mttf,12.500") != std::string::npos);
  }
  SUBCASE("json round-trips to equal stats") {
    std::string json = emit_report(stats, ReportFormat::JSON);
    auto parsed = parse_report_json(json);
    REQUIRE(parsed.has_value());
    REQUIRE(parsed->per_mutant.size() == 2);
    CHECK(parsed->per_mutant[0].mutant == "ADD_NO_TAINT");
    CHECK(parsed->per_mutant[0].tests == 120);
    CHECK(parsed->per_mutant[0].found());
    CHECK(parsed->per_mutant[0].mttf_ms() == doctest::Approx(12.5));
    CHECK(parsed->per_mutant[1].found() == false);
    CHECK(emit_report(*parsed, ReportFormat::JSON) == json);
  }
  SUBCASE("markdown has a row per mutant") {
    std::string md = emit_report(stats, ReportFormat::MARKDOWN);
    CHECK(md.find("| ADD_NO_TAINT |") != std::string::npos);
    CHECK(md.find("| LOAD_NO_TAINT | —") != std::string::npos);
  }
}

TEST_CASE("counterexample rendering uses the merged format") {
  Lattice lat = Lattice::two_point();
  Label L = lat.parse("L"), H = lat.parse("H");
  auto prog = [&](int64_t v) {
    SState s;
    s.imem = std::make_shared<const SProgram>(
        SProgram{SInstr::push({1, L}), SInstr::push({v, H}), SInstr::store(), SInstr::halt()});
    s.mem = {{0, L}, {0, L}};
    s.pc = {0, L};
    return s;
  };
  Variation<SState> v{prog(0), prog(1)};
  StackModel buggy{SRuleSet{&lat, SMutant::WRITE_DOWN_THROUGH_HIGH_PTR}};
  PropertyCfg c;
  c.property = Property::EENI;
  c.relation = {RelKind::MEM, L};
  c.end = EndSet::HALTED;
  auto verdict = check_eeni(c, buggy, v);
  REQUIRE(verdict.fail());
  std::string text = render_counterexample(lat, *verdict.ce);
  CHECK(text.find("Push {0/1}@H") != std::string::npos);
  CHECK(text.find("Common execution prefix") != std::string::npos);
  // identical components carry no braces
  CHECK(text.find("Push 1@L") != std::string::npos);

  // divergence renders the two-block form
  auto jump = [&](int64_t target) {
    SState s;
    s.imem = std::make_shared<const SProgram>(
        SProgram{SInstr::push({target, H}), SInstr::jump(), SInstr::halt(), SInstr::halt()});
    s.mem = {{0, L}};
    s.pc = {0, L};
    return s;
  };
  Variation<SState> dv{jump(2), jump(3)};
  StackModel nojump{SRuleSet{&lat, SMutant::JUMP_NO_RAISE_PC}};
  PropertyCfg lc = c;
  lc.property = Property::LLNI;
  lc.relation = {RelKind::LOW, L};
  auto dverdict = check_llni(lc, nojump, dv);
  REQUIRE(dverdict.fail());
  std::string dtext = render_counterexample(lat, *dverdict.ce);
  CHECK(dtext.find("Machine 1 continues...") != std::string::npos);
  CHECK(dtext.find("Machine 2 continues...") != std::string::npos);
}

TEST_CASE("campaign profiling stays internally consistent") {
  Lattice lat = Lattice::two_point();
  CampaignConfig cfg = quick_cfg();
  cfg.strategy.kind = GenKind::NAIVE;
  cfg.mutants = {"ADD_NO_TAINT"};
  cfg.test_budget = 4000;
  cfg.ce_quota = 0;  // keep going; we want profile volume
  cfg.profile_every = 1;
  auto result = run_campaign(cfg, lat);
  const ProfileStats& p = result.stats.per_mutant[0].profile;
  uint64_t reason_total = 0;
  for (auto& [k, v] : p.reasons) reason_total += v;
  CHECK(reason_total == p.runs);
  CHECK(p.pairs * 2 == p.runs);
  CHECK(p.mean_exec_len() == doctest::Approx(double(p.steps) / double(p.runs)));
}

TEST_CASE("config files override generation knobs") {
  ConfigFile f = ConfigFile::parse(
      "fuel = 80\nregisters = 6\nlattice = diamond\nfreq.Store = 9.5\nhalt_p0 = 0.2\n"
      "imem_min = 5\nimem_max = 9\n# comment\n");
  CampaignConfig cfg;
  std::string lattice = apply_config(f, cfg);
  CHECK(lattice == "diamond");
  CHECK(cfg.prop.fuel == 80);
  CHECK(cfg.num_regs == 6);
  CHECK(cfg.strategy.freq.weight(ROp::Store) == doctest::Approx(9.5));
  CHECK(cfg.strategy.halt_p0 == doctest::Approx(0.2));
  CHECK(cfg.strategy.imem_min == 5);
  CHECK(cfg.strategy.imem_max == 9);
}

TEST_CASE("lattice config text loads through the choice helper") {
  Lattice lat = lattice_from_choice("two-point");
  CHECK(lat.size() == 2);
  CHECK_THROWS(lattice_from_choice("no-such-lattice"));
}

TEST_CASE("worker sharding never changes per-mutant streams") {
  Lattice lat = Lattice::two_point();
  CampaignConfig cfg = quick_cfg();
  cfg.mutants = {"ADD_NO_TAINT", "PUSH_NO_TAINT", "WRITE_DOWN_THROUGH_HIGH_PTR"};
  cfg.test_budget = 3000;
  cfg.ce_quota = 0;
  cfg.shrink_on = false;
  auto serial = run_campaign(cfg, lat);
  cfg.workers = 3;
  auto parallel = run_campaign(cfg, lat);
  REQUIRE(serial.stats.per_mutant.size() == parallel.stats.per_mutant.size());
  for (size_t i = 0; i < serial.stats.per_mutant.size(); ++i) {
    CHECK(serial.stats.per_mutant[i].mutant == parallel.stats.per_mutant[i].mutant);
    CHECK(serial.stats.per_mutant[i].tests == parallel.stats.per_mutant[i].tests);
    CHECK(serial.stats.per_mutant[i].fails == parallel.stats.per_mutant[i].fails);
    CHECK(serial.stats.per_mutant[i].discards == parallel.stats.per_mutant[i].discards);
  }
}
