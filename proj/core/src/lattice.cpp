#include "flowtest/lattice.hpp"

#include <sstream>

namespace flowtest {

Lattice::Lattice(std::vector<std::string> names, std::vector<std::vector<bool>> leq)
    : names_(std::move(names)), leq_(std::move(leq)) {
  const size_t n = names_.size();
  if (n == 0 || n > 255) throw LatticeError("lattice must have 1..255 elements");
  if (leq_.size() != n) throw NotAPartialOrder("leq matrix is not square");
  for (auto& row : leq_)
    if (row.size() != n) throw NotAPartialOrder("leq matrix is not square");

  for (size_t i = 0; i < n; ++i)
    if (!leq_[i][i]) throw NotAPartialOrder("leq not reflexive at " + names_[i]);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (i != j && leq_[i][j] && leq_[j][i])
        throw NotAPartialOrder("leq not antisymmetric: " + names_[i] + ", " + names_[j]);
      if (!leq_[i][j]) continue;
      for (size_t k = 0; k < n; ++k)
        if (leq_[j][k] && !leq_[i][k])
          throw NotAPartialOrder("leq not transitive via " + names_[j]);
    }

  join_.assign(n, std::vector<Label>(n));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      int lub = -1;
      for (size_t c = 0; c < n; ++c) {
        if (!leq_[a][c] || !leq_[b][c]) continue;
        if (lub < 0 || leq_[c][static_cast<size_t>(lub)]) {
          // candidate must be below every other upper bound
          bool least = true;
          for (size_t d = 0; d < n; ++d)
            if (leq_[a][d] && leq_[b][d] && !leq_[c][d]) least = false;
          if (least) lub = static_cast<int>(c);
        }
      }
      if (lub < 0)
        throw NoUniqueJoin("no least upper bound for " + names_[a] + ", " + names_[b]);
      join_[a][b] = Label{static_cast<uint8_t>(lub)};
    }

  bool found_bottom = false;
  for (size_t i = 0; i < n; ++i) {
    bool is_bottom = true;
    for (size_t j = 0; j < n; ++j)
      if (!leq_[i][j]) is_bottom = false;
    if (is_bottom) {
      bottom_ = Label{static_cast<uint8_t>(i)};
      found_bottom = true;
      break;
    }
  }
  if (!found_bottom) throw LatticeError("lattice has no bottom element");

  Label t = bottom_;
  for (size_t i = 0; i < n; ++i) t = join(t, Label{static_cast<uint8_t>(i)});
  top_ = t;
  display_name_ = "custom";
}

Lattice Lattice::two_point() {
  Lattice l({"L", "H"}, {{true, true}, {false, true}});
  l.display_name_ = "two-point";
  return l;
}

Lattice Lattice::diamond() {
  // L below M1 and M2, which are incomparable; H on top.
  std::vector<std::vector<bool>> leq = {
      {true, true, true, true},
      {false, true, false, true},
      {false, false, true, true},
      {false, false, false, true},
  };
  Lattice l({"L", "M1", "M2", "H"}, leq);
  l.display_name_ = "diamond";
  return l;
}

Lattice Lattice::one_point() {
  Lattice l({"L"}, {{true}});
  l.display_name_ = "one-point";
  return l;
}

Lattice Lattice::named(const std::string& name) {
  if (name == "two-point" || name == "2") return two_point();
  if (name == "diamond") return diamond();
  if (name == "one-point" || name == "1") return one_point();
  throw LatticeError("unknown lattice: " + name);
}

Lattice Lattice::from_config(const std::string& text) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> edges;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    if (line.find("<=") != std::string::npos) {
      std::istringstream ls(line);
      std::string a, op, b;
      if (!(ls >> a >> op >> b) || op != "<=")
        throw LatticeError("expected 'a <= b', got: " + line);
      edges.emplace_back(a, b);
    } else {
      std::istringstream ls(line);
      std::string a;
      while (ls >> a) names.push_back(a);
    }
  }
  if (names.empty()) throw LatticeError("lattice config names no elements");

  auto idx = [&](const std::string& s) -> size_t {
    for (size_t i = 0; i < names.size(); ++i)
      if (names[i] == s) return i;
    throw LatticeError("unknown lattice element: " + s);
  };

  const size_t n = names.size();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) leq[i][i] = true;
  for (auto& [a, b] : edges) leq[idx(a)][idx(b)] = true;
  // transitive closure
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (leq[i][k] && leq[k][j]) leq[i][j] = true;

  Lattice l(std::move(names), std::move(leq));
  l.display_name_ = "custom";
  return l;
}

Label Lattice::parse(const std::string& name) const {
  for (size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return Label{static_cast<uint8_t>(i)};
  throw LatticeError("unknown label: " + name);
}

bool Lattice::has(const std::string& name) const {
  for (auto& n : names_)
    if (n == name) return true;
  return false;
}

std::vector<Label> Lattice::labels() const {
  std::vector<Label> out;
  for (size_t i = 0; i < names_.size(); ++i) out.push_back(Label{static_cast<uint8_t>(i)});
  return out;
}

std::vector<Label> Lattice::proper_observers() const {
  std::vector<Label> out;
  for (Label l : labels())
    if (l != top_ || size() == 1) out.push_back(l);
  return out;
}

}  // namespace flowtest
