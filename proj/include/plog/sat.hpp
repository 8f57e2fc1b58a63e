#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "plog/logic.hpp"

namespace plog {

struct SatLimits {
  std::size_t max_ground_atoms = 64;
  std::size_t max_aux_vars = 4096;
};

// Clause form in DIMACS convention: literal +v / -v for variable v-1.
// Variables [0, atom_count) are ground atoms, the rest auxiliaries.
struct Cnf {
  std::size_t atom_count = 0;
  std::size_t aux_count = 0;
  std::vector<std::vector<int>> clauses;

  std::size_t variable_count() const noexcept { return atom_count + aux_count; }
  void write_dimacs(std::ostream& out) const;
};

// Equisatisfiable clause form (Plaisted-Greenbaum): one auxiliary variable per
// non-literal subformula, with only the implications its polarity needs.
// Throws ResourceError past the limits.
Cnf to_cnf(const GroundSentence& g, const SatLimits& limits = {});

// Returns ground-atom values of a model, or nullopt if unsatisfiable.
// DPLL with unit propagation over two watched literals.
std::optional<std::vector<bool>> solve(const Cnf& cnf);

// Satisfiability oracle over ground sentences. Not thread-safe when a DIMACS
// sink is attached.
class SatOracle {
 public:
  SatOracle() = default;
  explicit SatOracle(SatLimits limits, std::ostream* dimacs_sink = nullptr)
      : limits_(limits), dimacs_(dimacs_sink) {}

  std::optional<std::vector<bool>> model(const GroundSentence& g) const;
  bool satisfiable(const GroundSentence& g) const { return model(g).has_value(); }
  bool valid(const GroundSentence& g) const;
  bool implies(const GroundSentence& premise, const GroundSentence& conclusion) const;
  bool disjoint(const GroundSentence& a, const GroundSentence& b) const;

  const SatLimits& limits() const noexcept { return limits_; }

 private:
  SatLimits limits_;
  std::ostream* dimacs_ = nullptr;
};

bool is_satisfiable(const GroundSentence& g);
bool is_valid(const GroundSentence& g);
bool implies(const GroundSentence& premise, const GroundSentence& conclusion);
bool disjoint(const GroundSentence& a, const GroundSentence& b);

}  // namespace plog
