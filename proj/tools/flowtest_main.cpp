#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "flowtest/config.hpp"
#include "flowtest/fixtures.hpp"
#include "flowtest/harness.hpp"

using namespace flowtest;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
T checked(std::optional<T> v, const std::string& what, const std::string& given,
          const std::string& valid) {
  if (!v) throw CliError("unknown " + what + " '" + given + "' (valid: " + valid + ")");
  return *v;
}

struct RunOpts {
  std::string machine = "stack-basic";
  std::string prop = "eeni";
  std::string start;
  std::string rel;
  std::string end;
  std::string gen = "byexec";
  std::string bug = "all";
  std::string lattice;
  std::string shrink = "on";
  std::string format = "csv";
  std::string config_path;
  std::string out_path;
  std::string obs;
  int64_t tests = -1;
  int64_t timeout_ms = 0;
  int quota = 1;
  uint64_t seed = 1;
  int fuel = 50;
  int workers = 1;
  bool print_ces = false;
};

void add_run_flags(CLI::App* cmd, RunOpts& o) {
  cmd->add_option("--machine", o.machine, "stack-basic | stack-cf | register");
  cmd->add_option("--prop", o.prop, "eeni | llni | ssni | msni");
  cmd->add_option("--start", o.start, "init | quasi | any | tiny");
  cmd->add_option("--rel", o.rel, "mem | low | full | full-ws | ints");
  cmd->add_option("--end", o.end, "halted | halted-low (EENI end set)");
  cmd->add_option("--gen", o.gen, "naive | weighted | sequence | seqints | byexec | tiny");
  cmd->add_option("--bug", o.bug, "mutant name or 'all'");
  cmd->add_option("--lattice", o.lattice, "two-point | diamond | @file");
  cmd->add_option("--tests", o.tests, "test budget per mutant");
  cmd->add_option("--timeout-ms", o.timeout_ms, "time budget per mutant");
  cmd->add_option("--quota", o.quota, "counterexamples per mutant (0 = unlimited)");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--fuel", o.fuel, "step budget per execution");
  cmd->add_option("--shrink", o.shrink, "on | off");
  cmd->add_option("--format", o.format, "csv | json | md");
  cmd->add_option("--config", o.config_path, "key=value config file");
  cmd->add_option("--out", o.out_path, "write the report here instead of stdout");
  cmd->add_option("--obs", o.obs, "observation label (default: bottom)");
  cmd->add_option("--workers", o.workers, "parallel workers (mutants are sharded)");
  cmd->add_flag("--print-counterexamples", o.print_ces, "dump rendered counterexamples");
}

CampaignConfig build_config(const RunOpts& o, Lattice& lat_out) {
  CampaignConfig cfg;
  cfg.machine = checked(parse_machine(o.machine), "machine", o.machine,
                        "stack-basic, stack-cf, register");
  cfg.prop.property = checked(parse_property(o.prop), "property", o.prop,
                              "eeni, llni, ssni, msni");
  cfg.strategy.kind = checked(parse_genkind(o.gen), "generator", o.gen,
                              "naive, weighted, sequence, seqints, byexec, tiny");
  cfg.prop.fuel = o.fuel;
  cfg.test_budget = o.tests;
  cfg.time_budget_ms = o.timeout_ms;
  cfg.ce_quota = o.quota;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  if (o.shrink == "on") cfg.shrink_on = true;
  else if (o.shrink == "off") cfg.shrink_on = false;
  else throw CliError("unknown shrink mode '" + o.shrink + "' (valid: on, off)");

  // property-appropriate defaults, overridable by flags
  switch (cfg.prop.property) {
    case Property::EENI: cfg.prop.start = StartSet::INIT; break;
    case Property::LLNI: cfg.prop.start = StartSet::QUASI_INIT; break;
    case Property::SSNI: cfg.prop.start = StartSet::TINY; break;
    case Property::MSNI: cfg.prop.start = StartSet::ANY; break;
  }
  if (!o.start.empty())
    cfg.prop.start = checked(parse_startset(o.start), "start set", o.start,
                             "init, quasi, any, tiny");
  if (cfg.prop.start == StartSet::TINY && cfg.strategy.kind == GenKind::BY_EXEC)
    cfg.strategy.kind = GenKind::TINY_SSNI;

  if (cfg.machine == MachineKind::REGISTER) {
    cfg.prop.relation.kind =
        cfg.prop.property == Property::EENI ? RelKind::INTS_IN_REGS : RelKind::FULL_WS;
    cfg.strategy.probe_skip = 0.1;
  } else {
    switch (cfg.prop.property) {
      case Property::EENI: cfg.prop.relation.kind = RelKind::MEM; break;
      case Property::LLNI: cfg.prop.relation.kind = RelKind::LOW; break;
      default: cfg.prop.relation.kind = RelKind::FULL; break;
    }
  }
  if (!o.rel.empty()) {
    auto k = parse_relkind(o.rel);
    if (!k || is_wrong_relation(*k))
      throw CliError("unknown relation '" + o.rel + "' (valid: mem, low, full, full-ws, ints)");
    cfg.prop.relation.kind = *k;
  }
  cfg.prop.end = cfg.machine == MachineKind::STACK_BASIC ? EndSet::HALTED : EndSet::HALTED_AND_LOW;
  if (!o.end.empty()) {
    if (o.end == "halted") cfg.prop.end = EndSet::HALTED;
    else if (o.end == "halted-low") cfg.prop.end = EndSet::HALTED_AND_LOW;
    else throw CliError("unknown end set '" + o.end + "' (valid: halted, halted-low)");
  }

  std::string lattice_choice =
      cfg.machine == MachineKind::REGISTER ? "diamond" : "two-point";
  if (!o.config_path.empty()) {
    ConfigFile file = ConfigFile::load(o.config_path);
    std::string from_file = apply_config(file, cfg);
    if (!from_file.empty()) lattice_choice = from_file;
  }
  if (!o.lattice.empty()) lattice_choice = o.lattice;
  lat_out = lattice_from_choice(lattice_choice);
  cfg.prop.relation.obs = o.obs.empty() ? lat_out.bottom() : lat_out.parse(o.obs);

  if (o.bug != "all") {
    bool known = cfg.machine == MachineKind::REGISTER
                     ? parse_rmutant(o.bug).has_value()
                     : parse_smutant(o.bug).has_value();
    if (!known || o.bug == "CORRECT") {
      std::string valid;
      for (auto& n : mutant_names(cfg.machine)) valid += n + " ";
      throw CliError("unknown mutant '" + o.bug + "' (valid: " + valid + ")");
    }
    cfg.mutants = {o.bug};
  }
  if (!cfg.has_stop_criterion())
    throw CliError("set at least one stopping criterion (--tests, --timeout-ms, or --quota)");
  return cfg;
}

int cmd_run(const RunOpts& o) {
  Lattice lat = Lattice::two_point();
  CampaignConfig cfg = build_config(o, lat);
  CampaignResult result = run_campaign(cfg, lat);
  auto format = checked(parse_format(o.format), "format", o.format, "csv, json, md");
  std::string report = emit_report(result.stats, format);
  if (o.out_path.empty()) {
    std::cout << report;
  } else {
    std::ofstream out(o.out_path, std::ios::binary);
    out << report;
  }
  if (o.print_ces)
    for (auto& ce : result.counterexamples)
      std::cout << "\n=== " << ce.mutant << (ce.shrunk ? " (shrunk)" : "") << "\n"
                << ce.rendered;
  return 0;
}

int cmd_profile(const RunOpts& o, uint64_t pairs) {
  Lattice lat = Lattice::two_point();
  RunOpts local = o;
  if (local.tests < 0 && local.timeout_ms == 0) local.tests = static_cast<int64_t>(pairs);
  CampaignConfig cfg = build_config(local, lat);
  ProfileReport rep = run_profile(cfg, lat, pairs);
  std::cout << "pairs: " << rep.profile.pairs << "\n";
  std::cout << "mean execution length: ";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", rep.profile.mean_exec_len());
  std::cout << buf << " steps\n";
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * rep.profile.both_halt_fraction());
  std::cout << "both halt: " << buf << "%\n";
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * rep.discard_fraction());
  std::cout << "discard rate: " << buf << "%\n";
  std::cout << "termination reasons:\n";
  std::vector<std::pair<std::string, uint64_t>> reasons(rep.profile.reasons.begin(),
                                                        rep.profile.reasons.end());
  std::sort(reasons.begin(), reasons.end(),
            [](auto& a, auto& b) { return a.second > b.second; });
  for (auto& [name, count] : reasons) std::cout << "  " << name << ": " << count << "\n";
  return 0;
}

int cmd_fixture(const std::string& name, const std::string& dir) {
  std::string path = name;
  if (!std::filesystem::exists(path)) path = dir + "/" + name + ".fx";
  if (!std::filesystem::exists(path)) throw CliError("no such fixture: " + name);
  Fixture f = load_fixture_file(path);
  FixtureOutcome outcome = check_fixture(f);
  std::cout << outcome.report;
  return outcome.ok ? 0 : 2;
}

int cmd_list(const std::string& what, const std::string& fixture_dir) {
  if (what.empty() || what == "mutants") {
    for (auto m : {MachineKind::STACK_BASIC, MachineKind::STACK_CF, MachineKind::REGISTER}) {
      std::cout << to_string(m) << ":\n";
      for (auto& n : mutant_names(m)) std::cout << "  " << n << "\n";
    }
  }
  if (what.empty() || what == "strategies") {
    std::cout << "strategies: naive weighted sequence seqints byexec tiny\n";
  }
  if (what.empty() || what == "properties") {
    std::cout << "properties: eeni llni ssni msni\n";
    std::cout << "relations: mem low full full-ws ints\n";
    std::cout << "start sets: init quasi any tiny\n";
  }
  if (what.empty() || what == "fixtures") {
    std::cout << "fixtures:\n";
    for (auto& path : list_fixture_files(fixture_dir))
      std::cout << "  " << std::filesystem::path(path).stem().string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Property-based testing bench for labeled abstract machines"};
  app.require_subcommand(1);

  RunOpts run_opts;
  CLI::App* run = app.add_subcommand("run", "run a bug-finding campaign");
  add_run_flags(run, run_opts);

  RunOpts prof_opts;
  uint64_t pairs = 2000;
  CLI::App* profile = app.add_subcommand("profile", "generation statistics only");
  add_run_flags(profile, prof_opts);
  profile->add_option("--pairs", pairs, "number of pairs to profile");

  std::string fixture_name, fixture_dir = "fixtures";
  CLI::App* fixture = app.add_subcommand("fixture", "re-check a named regression fixture");
  fixture->add_option("name", fixture_name, "fixture name or path")->required();
  fixture->add_option("--fixtures", fixture_dir, "fixture directory");

  std::string list_what;
  CLI::App* list = app.add_subcommand("list", "list mutants, strategies, properties, fixtures");
  list->add_option("what", list_what, "mutants | strategies | properties | fixtures");
  list->add_option("--fixtures", fixture_dir, "fixture directory");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(run_opts);
    if (profile->parsed()) return cmd_profile(prof_opts, pairs);
    if (fixture->parsed()) return cmd_fixture(fixture_name, fixture_dir);
    if (list->parsed()) return cmd_list(list_what, fixture_dir);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
