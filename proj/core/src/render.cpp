#include "flowtest/harness.hpp"

#include <sstream>

namespace flowtest {

namespace {

// Values equal on both machines print once; where they differ, both are
// written as {first/second}.
std::string merged(const std::string& a, const std::string& b) {
  return a == b ? a : "{" + a + "/" + b + "}";
}

std::string merged_atoms(const Lattice& lat, const Atom& a, const Atom& b) {
  if (a.label == b.label && a.value != b.value)
    return "{" + std::to_string(a.value) + "/" + std::to_string(b.value) + "}@" +
           lat.name(a.label);
  return merged(format_atom(a, lat), format_atom(b, lat));
}

std::string merged_instr(const Lattice& lat, const SInstr& a, const SInstr& b) {
  if (a.op == SOp::Push && b.op == SOp::Push)
    return "Push " + merged_atoms(lat, a.imm, b.imm);
  return merged(format_instr(a, lat), format_instr(b, lat));
}

std::string merged_mem(const Lattice& lat, const std::vector<Atom>& a,
                       const std::vector<Atom>& b) {
  if (a.size() != b.size()) {
    auto one = [&](const std::vector<Atom>& m) {
      std::string s = "[";
      for (size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + format_atom(m[i], lat);
      return s + "]";
    };
    return merged(one(a), one(b));
  }
  std::string s = "[";
  for (size_t i = 0; i < a.size(); ++i) s += (i ? "," : "") + merged_atoms(lat, a[i], b[i]);
  return s + "]";
}

std::string merged_stack(const Lattice& lat, const std::vector<StackEntry>& a,
                         const std::vector<StackEntry>& b) {
  auto one = [&](const std::vector<StackEntry>& s) {
    std::string out = "[";
    for (size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + format_entry(s[i], lat);
    return out + "]";
  };
  if (a.size() != b.size()) return merged(one(a), one(b));
  std::string s = "[";
  for (size_t i = 0; i < a.size(); ++i) {
    s += i ? "," : "";
    if (a[i].is_data() && b[i].is_data()) s += merged_atoms(lat, a[i].atom, b[i].atom);
    else s += merged(format_entry(a[i], lat), format_entry(b[i], lat));
  }
  return s + "]";
}

std::string next_instr(const Lattice& lat, const SState& s) {
  const SInstr* i = s.fetch();
  return i ? format_instr(*i, lat) : "<eof>";
}

void render_srow(std::ostringstream& out, const Lattice& lat, const SState& a, const SState& b) {
  out << merged_atoms(lat, a.pc, b.pc) << "\tM=" << merged_mem(lat, a.mem, b.mem)
      << "\tS=" << merged_stack(lat, a.stack, b.stack) << "\tnext=";
  const SInstr* ia = a.fetch();
  const SInstr* ib = b.fetch();
  if (ia && ib) out << merged_instr(lat, *ia, *ib);
  else out << merged(next_instr(lat, a), next_instr(lat, b));
  out << "\n";
}

void render_srow_single(std::ostringstream& out, const Lattice& lat, const SState& s) {
  out << format_atom(s.pc, lat) << "\tM=" << merged_mem(lat, s.mem, s.mem)
      << "\tS=" << merged_stack(lat, s.stack, s.stack) << "\tnext=" << next_instr(lat, s) << "\n";
}

}  // namespace

std::string render_merged_program(const Lattice& lat, const SProgram& a, const SProgram& b) {
  std::string out = "[";
  size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    out += i ? "," : "";
    if (i < a.size() && i < b.size()) out += merged_instr(lat, a[i], b[i]);
    else if (i < a.size()) out += "{" + format_instr(a[i], lat) + "/}";
    else out += "{/" + format_instr(b[i], lat) + "}";
  }
  return out + "]";
}

std::string render_counterexample(const Lattice& lat, const Counterexample<SState>& ce) {
  std::ostringstream out;
  out << render_merged_program(lat, *ce.var.left.imem, *ce.var.right.imem) << "\n";
  out << "--- " << ce.clause << "\n";
  out << "--- Common execution prefix:\n";
  const auto& t1 = ce.left.states;
  const auto& t2 = ce.right.states;
  size_t k = 0;
  while (k < t1.size() && k < t2.size() && t1[k].pc.value == t2[k].pc.value) {
    render_srow(out, lat, t1[k], t2[k]);
    ++k;
  }
  if (k < t1.size()) {
    out << "--- Machine 1 continues...\n";
    for (size_t i = k; i < t1.size(); ++i) render_srow_single(out, lat, t1[i]);
  }
  if (k < t2.size()) {
    out << "--- Machine 2 continues...\n";
    for (size_t i = k; i < t2.size(); ++i) render_srow_single(out, lat, t2[i]);
  }
  return out.str();
}

namespace {

std::string merged_ratoms(const Lattice& lat, const RAtom& a, const RAtom& b) {
  return merged(format_ratom(a, lat), format_ratom(b, lat));
}

std::string merged_rf(const Lattice& lat, const std::vector<RAtom>& a,
                      const std::vector<RAtom>& b) {
  std::string s = "[";
  size_t n = std::max(a.size(), b.size());
  for (size_t i = 0; i < n; ++i) {
    s += i ? "," : "";
    if (i < a.size() && i < b.size()) s += merged_ratoms(lat, a[i], b[i]);
    else s += "?";
  }
  return s + "]";
}

std::string rmem_line(const Lattice& lat, const RState& s) {
  std::string out = "{";
  bool first = true;
  for (auto& [id, blk] : s.mem) {
    if (!first) out += " ";
    first = false;
    out += lat.name(id.stamp) + "." + std::to_string(id.index) + ":[";
    for (size_t i = 0; i < blk.cells.size(); ++i)
      out += (i ? "," : "") + format_ratom(blk.cells[i], lat);
    out += "]@" + lat.name(blk.label);
  }
  return out + "}";
}

void render_rrow(std::ostringstream& out, const Lattice& lat, const RState& a, const RState& b) {
  out << merged(std::to_string(a.pc.value) + "@" + lat.name(a.pc.label),
                std::to_string(b.pc.value) + "@" + lat.name(b.pc.label))
      << "\trf=" << merged_rf(lat, a.rf, b.rf) << "\tcs=" << merged(std::to_string(a.cs.size()),
                                                                    std::to_string(b.cs.size()))
      << "\tmem=" << merged(rmem_line(lat, a), rmem_line(lat, b));
  const RInstr* ia = a.fetch();
  const RInstr* ib = b.fetch();
  out << "\tnext="
      << merged(ia ? format_rinstr(*ia, lat) : "<eof>", ib ? format_rinstr(*ib, lat) : "<eof>")
      << "\n";
}

void render_rrow_single(std::ostringstream& out, const Lattice& lat, const RState& s) {
  const RInstr* i = s.fetch();
  out << s.pc.value << "@" << lat.name(s.pc.label) << "\trf=" << merged_rf(lat, s.rf, s.rf)
      << "\tcs=" << s.cs.size() << "\tmem=" << rmem_line(lat, s)
      << "\tnext=" << (i ? format_rinstr(*i, lat) : "<eof>") << "\n";
}

}  // namespace

std::string render_counterexample(const Lattice& lat, const Counterexample<RState>& ce) {
  std::ostringstream out;
  const RProgram& prog = *ce.var.left.imem;
  out << "[";
  for (size_t i = 0; i < prog.size(); ++i) out << (i ? "," : "") << format_rinstr(prog[i], lat);
  out << "]\n";
  out << "--- " << ce.clause << "\n";
  out << "--- Common execution prefix:\n";
  const auto& t1 = ce.left.states;
  const auto& t2 = ce.right.states;
  size_t k = 0;
  while (k < t1.size() && k < t2.size() && t1[k].pc.value == t2[k].pc.value) {
    render_rrow(out, lat, t1[k], t2[k]);
    ++k;
  }
  if (k < t1.size()) {
    out << "--- Machine 1 continues...\n";
    for (size_t i = k; i < t1.size(); ++i) render_rrow_single(out, lat, t1[i]);
  }
  if (k < t2.size()) {
    out << "--- Machine 2 continues...\n";
    for (size_t i = k; i < t2.size(); ++i) render_rrow_single(out, lat, t2[i]);
  }
  return out.str();
}

}  // namespace flowtest
