#include "flowtest/fixtures.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace flowtest {

namespace {

// "{a/b}rest" splits into "a rest" and "b rest"; text without braces is
// shared by both machines.
std::pair<std::string, std::string> expand_merged(const std::string& line) {
  std::string left, right;
  size_t i = 0;
  while (i < line.size()) {
    if (line[i] != '{') {
      left += line[i];
      right += line[i];
      ++i;
      continue;
    }
    size_t slash = line.find('/', i);
    size_t close = line.find('}', i);
    if (slash == std::string::npos || close == std::string::npos || slash > close)
      throw std::runtime_error("bad merged syntax: " + line);
    left += line.substr(i + 1, slash - i - 1);
    right += line.substr(slash + 1, close - slash - 1);
    i = close + 1;
  }
  return {left, right};
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::map<std::string, std::string> kv_pairs(const std::vector<std::string>& words) {
  std::map<std::string, std::string> out;
  for (auto& w : words) {
    auto eq = w.find('=');
    if (eq != std::string::npos) out[w.substr(0, eq)] = w.substr(eq + 1);
  }
  return out;
}

struct Sections {
  std::map<std::string, std::vector<std::string>> lines;  // section -> body lines
  std::vector<std::string> header;
};

Sections split_sections(const std::string& text) {
  Sections s;
  std::string cur;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::string trimmed = line;
    while (!trimmed.empty() && isspace(static_cast<unsigned char>(trimmed.back())))
      trimmed.pop_back();
    size_t b = 0;
    while (b < trimmed.size() && isspace(static_cast<unsigned char>(trimmed[b]))) ++b;
    trimmed = trimmed.substr(b);
    if (trimmed.empty()) continue;
    if (trimmed.front() == '[' && trimmed.back() == ']') {
      cur = trimmed.substr(1, trimmed.size() - 2);
      continue;
    }
    if (cur.empty()) s.header.push_back(trimmed);
    else s.lines[cur].push_back(trimmed);
  }
  return s;
}

PropertyCfg expect_prop(const std::map<std::string, std::string>& kv, const Lattice& lat,
                        int fuel) {
  PropertyCfg p;
  p.fuel = fuel;
  if (auto it = kv.find("prop"); it != kv.end()) p.property = *parse_property(it->second);
  if (auto it = kv.find("rel"); it != kv.end()) p.relation.kind = *parse_relkind(it->second);
  if (auto it = kv.find("start"); it != kv.end()) p.start = *parse_startset(it->second);
  p.relation.obs = lat.bottom();
  if (auto it = kv.find("obs"); it != kv.end()) p.relation.obs = lat.parse(it->second);
  p.end = EndSet::HALTED_AND_LOW;
  if (auto it = kv.find("end"); it != kv.end())
    p.end = it->second == "halted" ? EndSet::HALTED : EndSet::HALTED_AND_LOW;
  return p;
}

}  // namespace

Fixture parse_fixture(const std::string& name, const std::string& text) {
  Fixture f;
  f.name = name;
  f.raw = text;
  Sections s = split_sections(text);
  for (auto& line : s.header) {
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 1);
    size_t b = 0;
    while (b < value.size() && isspace(static_cast<unsigned char>(value[b]))) ++b;
    value = value.substr(b);
    if (key == "machine") f.machine = *parse_machine(value);
    else if (key == "lattice") f.lattice = value;
    else if (key == "title") f.title = value;
    else if (key == "fuel") f.fuel = std::stoi(value);
    else if (key == "expect") {
      // kept as raw words; resolved in check_fixture once the lattice exists
    }
  }
  // expects need the lattice; validated lazily in check_fixture
  return f;
}

Fixture load_fixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string name = std::filesystem::path(path).stem().string();
  return parse_fixture(name, buf.str());
}

namespace {

template <class State, class Model>
std::string run_expect(const Fixture& f, const FixtureExpect& e, const Lattice& lat,
                       const Model& model, const Variation<State>& var, bool& ok) {
  std::ostringstream out;
  out << "expect " << (e.expect_fail ? "fail" : "pass") << " prop=" << to_string(e.prop.property)
      << " rel=" << to_string(e.prop.relation.kind) << " bug=" << e.bug << ": ";
  if (!indist_state(e.prop.relation, lat, var.left, var.right)) {
    if (e.expect_fail) {
      ok = false;
      out << "MISMATCH (initial states not related under the relation)\n";
    } else {
      out << "ok (initial states not related; nothing to check)\n";
    }
    return out.str();
  }
  auto verdict = check_property(e.prop, model, var);
  bool failed = verdict.fail();
  bool good = failed == e.expect_fail;
  if (!good) ok = false;
  std::string shown = "Pass";
  if (failed) shown = "Fail";
  else if (verdict.discarded()) shown = std::string("Discard(") + to_string(verdict.discard) + ")";
  out << shown;
  out << (good ? "  [as expected]" : "  [MISMATCH]") << "\n";
  if (failed && verdict.ce) out << render_counterexample(lat, *verdict.ce);
  return out.str();
}

}  // namespace

FixtureOutcome check_fixture(const Fixture& f) {
  FixtureOutcome outcome;
  Lattice lat = f.lattice.rfind("@", 0) == 0
                    ? Lattice::from_config([&] {
                        std::ifstream in(f.lattice.substr(1));
                        std::stringstream b;
                        b << in.rdbuf();
                        return b.str();
                      }())
                    : Lattice::named(f.lattice);
  Sections s = split_sections(f.raw);
  std::ostringstream report;
  if (!f.title.empty()) report << f.name << ": " << f.title << "\n";

  auto joined = [&](const char* section) {
    std::string out;
    if (auto it = s.lines.find(section); it != s.lines.end())
      for (auto& l : it->second) out += l + "\n";
    return out;
  };

  std::vector<FixtureExpect> expects;
  for (auto& line : s.header) {
    if (line.rfind("expect:", 0) != 0) continue;
    auto words = tokens(line.substr(7));
    FixtureExpect e;
    e.expect_fail = !words.empty() && words[0] == "fail";
    e.prop = expect_prop(kv_pairs(words), lat, f.fuel);
    auto kv = kv_pairs(words);
    e.bug = kv.count("bug") ? kv["bug"] : "CORRECT";
    expects.push_back(std::move(e));
  }

  if (f.machine == MachineKind::REGISTER) {
    auto [pl, pr] = expand_merged(joined("imem"));
    RState left, right;
    left.imem = std::make_shared<const RProgram>(parse_rprogram(pl, lat));
    right.imem = std::make_shared<const RProgram>(parse_rprogram(pr, lat));
    left.pc = right.pc = Atom{0, lat.bottom()};
    auto fill_side = [&](RState& st, bool is_left) {
      auto pick = [&](const std::string& tok) {
        auto [l, r] = expand_merged(tok);
        return is_left ? l : r;
      };
      for (auto& tok : tokens(joined("rf"))) st.rf.push_back(parse_ratom(pick(tok), lat));
      if (auto it = s.lines.find("pc"); it != s.lines.end() && !it->second.empty()) {
        Atom pc_atom = parse_atom(pick(it->second[0]), lat);
        st.pc = pc_atom;
      }
      if (auto it = s.lines.find("cs"); it != s.lines.end()) {
        for (auto& line : it->second) {
          // frame: ret 4@L reg r3 res H rf=[a,b,c]
          auto w = tokens(line);
          Frame fr;
          for (size_t i = 0; i < w.size(); ++i) {
            if (w[i] == "ret" && i + 1 < w.size()) fr.ret_pc = parse_atom(pick(w[i + 1]), lat);
            if (w[i] == "reg" && i + 1 < w.size()) fr.result_reg = std::stoi(w[i + 1].substr(1));
            if (w[i] == "res" && i + 1 < w.size()) fr.result_label = lat.parse(pick(w[i + 1]));
            if (w[i].rfind("rf=[", 0) == 0) {
              std::string list = w[i].substr(4);
              if (!list.empty() && list.back() == ']') list.pop_back();
              std::istringstream ls(list);
              std::string item;
              while (std::getline(ls, item, ','))
                if (!item.empty()) fr.saved_rf.push_back(parse_ratom(pick(item), lat));
            }
          }
          st.cs.push_back(std::move(fr));
        }
      }
      if (auto it = s.lines.find("rmem"); it != s.lines.end()) {
        for (auto& line : it->second) {
          // L.0@H: atom atom ...
          auto colon = line.find(':');
          std::string head = line.substr(0, colon);
          auto at = head.rfind('@');
          auto dot = head.find('.');
          BlockId id{lat.parse(head.substr(0, dot)),
                     static_cast<int32_t>(std::stol(head.substr(dot + 1, at - dot - 1)))};
          RBlock blk;
          blk.label = lat.parse(head.substr(at + 1));
          for (auto& tok : tokens(line.substr(colon + 1)))
            blk.cells.push_back(parse_ratom(pick(tok), lat));
          st.mem.emplace(id, std::move(blk));
        }
      }
    };
    fill_side(left, true);
    fill_side(right, false);
    Variation<RState> var{std::move(left), std::move(right)};
    for (auto& e : expects) {
      auto m = parse_rmutant(e.bug);
      if (!m) {
        outcome.ok = false;
        report << "unknown mutant " << e.bug << "\n";
        continue;
      }
      RegisterModel model{RRuleSet{&lat, *m}};
      report << run_expect(f, e, lat, model, var, outcome.ok);
    }
  } else {
    auto [pl, pr] = expand_merged(joined("imem"));
    SState left, right;
    left.imem = std::make_shared<const SProgram>(parse_program(pl, lat));
    right.imem = std::make_shared<const SProgram>(parse_program(pr, lat));
    left.pc = right.pc = Atom{0, lat.bottom()};
    auto fill_side = [&](SState& st, bool is_left) {
      auto pick = [&](const std::string& tok) {
        auto [l, r] = expand_merged(tok);
        return is_left ? l : r;
      };
      for (auto& tok : tokens(joined("mem"))) st.mem.push_back(parse_atom(pick(tok), lat));
      for (auto& tok : tokens(joined("stack"))) st.stack.push_back(parse_entry(pick(tok), lat));
      if (auto it = s.lines.find("pc"); it != s.lines.end() && !it->second.empty())
        st.pc = parse_atom(pick(it->second[0]), lat);
    };
    fill_side(left, true);
    fill_side(right, false);
    Variation<SState> var{std::move(left), std::move(right)};
    for (auto& e : expects) {
      auto m = parse_smutant(e.bug);
      if (!m) {
        outcome.ok = false;
        report << "unknown mutant " << e.bug << "\n";
        continue;
      }
      StackModel model{SRuleSet{&lat, *m}};
      report << run_expect(f, e, lat, model, var, outcome.ok);
    }
  }
  outcome.report = report.str();
  return outcome;
}

std::vector<std::string> list_fixture_files(const std::string& dir) {
  std::vector<std::string> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".fx") out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace flowtest
