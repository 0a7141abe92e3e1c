#include "flowtest/config.hpp"

#include <fstream>
#include <sstream>

namespace flowtest {

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile f;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      size_t b = 0, e = s.size();
      while (b < e && isspace(static_cast<unsigned char>(s[b]))) ++b;
      while (e > b && isspace(static_cast<unsigned char>(s[e - 1]))) --e;
      return s.substr(b, e - b);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) f.values[key] = value;
  }
  return f;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string ConfigFile::get(const std::string& key, const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

double ConfigFile::get_num(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : std::stod(it->second);
}

std::string apply_config(const ConfigFile& file, CampaignConfig& cfg) {
  auto& s = cfg.strategy;
  cfg.prop.fuel = static_cast<int>(file.get_num("fuel", cfg.prop.fuel));
  cfg.num_regs = static_cast<int>(file.get_num("registers", cfg.num_regs));
  cfg.workers = static_cast<int>(file.get_num("workers", cfg.workers));
  s.imem_min = static_cast<int>(file.get_num("imem_min", s.imem_min));
  s.imem_max = static_cast<int>(file.get_num("imem_max", s.imem_max));
  s.mem_min = static_cast<int>(file.get_num("mem_min", s.mem_min));
  s.mem_max = static_cast<int>(file.get_num("mem_max", s.mem_max));
  s.lookahead = static_cast<int>(file.get_num("lookahead", s.lookahead));
  s.halt_p0 = file.get_num("halt_p0", s.halt_p0);
  s.halt_p1 = file.get_num("halt_p1", s.halt_p1);
  for (int i = 0; i < kROpCount; ++i) {
    ROp op = static_cast<ROp>(i);
    std::string key = std::string("freq.") + to_string(op);
    if (file.has(key)) s.freq.weights[op] = file.get_num(key, 1.0);
  }
  return file.get("lattice", "");
}

Lattice lattice_from_choice(const std::string& choice) {
  if (choice.rfind('@', 0) == 0) {
    std::ifstream in(choice.substr(1));
    if (!in) throw LatticeError("cannot open lattice config: " + choice.substr(1));
    std::stringstream buf;
    buf << in.rdbuf();
    return Lattice::from_config(buf.str());
  }
  return Lattice::named(choice);
}

}  // namespace flowtest
