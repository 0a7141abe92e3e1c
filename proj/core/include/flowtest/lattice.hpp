#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace flowtest {

// Security level; an index into the element table of the lattice it was
// created by. Kept to one byte so atoms stay small.
struct Label {
  uint8_t id = 0;
  friend bool operator==(Label a, Label b) { return a.id == b.id; }
  friend bool operator!=(Label a, Label b) { return a.id != b.id; }
  friend bool operator<(Label a, Label b) { return a.id < b.id; }
};

struct LatticeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAPartialOrder : LatticeError {
  using LatticeError::LatticeError;
};
struct NoUniqueJoin : LatticeError {
  using LatticeError::LatticeError;
};

// Finite security lattice with a precomputed flows-to matrix and join table.
// Immutable after construction, so it can be shared freely across workers.
class Lattice {
 public:
  // Validates that `leq` is a partial order with unique least upper bounds
  // and a unique bottom; throws NotAPartialOrder / NoUniqueJoin otherwise.
  Lattice(std::vector<std::string> names, std::vector<std::vector<bool>> leq);

  static Lattice two_point();
  static Lattice diamond();
  static Lattice one_point();
  // Named instance ("two-point", "diamond", ...) or throws LatticeError.
  static Lattice named(const std::string& name);
  // Config text: first the element names (whitespace separated or one per
  // line), then lines "a <= b". Reflexive-transitive closure is taken before
  // validation. '#' starts a comment.
  static Lattice from_config(const std::string& text);

  size_t size() const { return names_.size(); }
  Label bottom() const { return bottom_; }
  Label top() const { return top_; }

  bool flows_to(Label a, Label b) const { return leq_[a.id][b.id]; }
  Label join(Label a, Label b) const { return join_[a.id][b.id]; }

  const std::string& name(Label l) const { return names_[l.id]; }
  // Throws LatticeError on unknown names.
  Label parse(const std::string& name) const;
  bool has(const std::string& name) const;

  std::vector<Label> labels() const;
  // Observation levels that can actually hide something (everything but top).
  std::vector<Label> proper_observers() const;

  const std::string& display_name() const { return display_name_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<Label>> join_;
  Label bottom_{0};
  Label top_{0};
  std::string display_name_;
};

}  // namespace flowtest
