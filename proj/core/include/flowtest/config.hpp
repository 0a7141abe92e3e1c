#pragma once

#include <map>
#include <string>

#include "flowtest/harness.hpp"

namespace flowtest {

// key=value configuration: fuel, registers, lattice, generator weights and
// ranges. Instruction names are valid keys for the register frequency
// table ("freq.Store=2.4").
struct ConfigFile {
  std::map<std::string, std::string> values;

  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& key) const { return values.count(key) > 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_num(const std::string& key, double fallback) const;
};

// Applies recognized keys onto a campaign configuration; returns the
// lattice choice ("two-point", "diamond", or "@path").
std::string apply_config(const ConfigFile& file, CampaignConfig& cfg);

Lattice lattice_from_choice(const std::string& choice);

}  // namespace flowtest
