#pragma once

#include "flowtest/harness.hpp"

namespace flowtest {

// Regression fixtures: a (possibly merged) program text, an initial-state
// block, and expected verdicts under named configurations.
struct FixtureExpect {
  bool expect_fail = false;
  PropertyCfg prop;
  std::string bug;  // mutant name or CORRECT
};

struct Fixture {
  std::string name;
  std::string title;
  MachineKind machine = MachineKind::STACK_BASIC;
  std::string lattice = "two-point";
  int fuel = 50;
  std::vector<FixtureExpect> expects;
  std::string raw;  // full source text, reparsed against the lattice on use
};

Fixture parse_fixture(const std::string& name, const std::string& text);
Fixture load_fixture_file(const std::string& path);

struct FixtureOutcome {
  bool ok = true;
  std::string report;
};

// Runs every expectation; a "pass" expectation means no Fail verdict.
FixtureOutcome check_fixture(const Fixture& f);

// The shipped fixture tree.
std::vector<std::string> list_fixture_files(const std::string& dir);

}  // namespace flowtest
