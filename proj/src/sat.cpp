#include "plog/sat.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <string>

#include "plog/error.hpp"

namespace plog {

void Cnf::write_dimacs(std::ostream& out) const {
  out << "c ground atoms " << atom_count << ", auxiliary " << aux_count << "\n";
  out << "p cnf " << variable_count() << ' ' << clauses.size() << "\n";
  for (const auto& clause : clauses) {
    for (int lit : clause) out << lit << ' ';
    out << "0\n";
  }
}

namespace {

enum Polarity : unsigned { Positive = 1, Negative = 2, Both = 3 };

Polarity flip(Polarity p) {
  if (p == Both) return Both;
  return p == Positive ? Negative : Positive;
}

class CnfBuilder {
 public:
  CnfBuilder(std::size_t atoms, const SatLimits& limits) : limits_(limits) { cnf_.atom_count = atoms; }

  Cnf finish(const GroundSentence& root) {
    if (root.op() == GroundOp::False) {
      cnf_.clauses.push_back({});
    } else if (root.op() != GroundOp::True) {
      cnf_.clauses.push_back({encode(root, Positive)});
    }
    return std::move(cnf_);
  }

 private:
  int fresh() {
    if (cnf_.aux_count >= limits_.max_aux_vars)
      throw ResourceError("clause form needs more than " + std::to_string(limits_.max_aux_vars) +
                          " auxiliary variables");
    ++cnf_.aux_count;
    return static_cast<int>(cnf_.atom_count + cnf_.aux_count);
  }

  void clause(std::vector<int> c) { cnf_.clauses.push_back(std::move(c)); }

  // Returns a literal equivalent (in the required direction) to g.
  int encode(const GroundSentence& g, Polarity pol) {
    const auto& ch = g.children();
    switch (g.op()) {
      case GroundOp::Atom:
        return static_cast<int>(g.atom_index()) + 1;
      case GroundOp::Not:
        return -encode(ch[0], flip(pol));
      case GroundOp::True:
      case GroundOp::False: {
        int x = fresh();
        clause({g.op() == GroundOp::True ? x : -x});
        return x;
      }
      case GroundOp::And:
      case GroundOp::Or: {
        std::vector<int> lits;
        lits.reserve(ch.size());
        for (const auto& c : ch) lits.push_back(encode(c, pol));
        int x = fresh();
        bool conj = g.op() == GroundOp::And;
        // And: x -> each child (positive), all children -> x (negative).
        // Or:  x -> some child (positive), each child -> x (negative).
        if (pol & (conj ? Positive : Negative))
          for (int l : lits) clause({conj ? -x : x, conj ? l : -l});
        if (pol & (conj ? Negative : Positive)) {
          std::vector<int> big{conj ? x : -x};
          for (int l : lits) big.push_back(conj ? -l : l);
          clause(std::move(big));
        }
        return x;
      }
      case GroundOp::Implies: {
        int a = encode(ch[0], flip(pol));
        int b = encode(ch[1], pol);
        int x = fresh();
        if (pol & Positive) clause({-x, -a, b});
        if (pol & Negative) {
          clause({x, a});
          clause({x, -b});
        }
        return x;
      }
      case GroundOp::Iff: {
        int a = encode(ch[0], Both);
        int b = encode(ch[1], Both);
        int x = fresh();
        if (pol & Positive) {
          clause({-x, -a, b});
          clause({-x, a, -b});
        }
        if (pol & Negative) {
          clause({x, a, b});
          clause({x, -a, -b});
        }
        return x;
      }
    }
    throw Error("unknown ground node");
  }

  Cnf cnf_;
  SatLimits limits_;
};

// Literal encoding inside the solver: 2*var + (negated ? 1 : 0).
using Lit = std::uint32_t;
inline Lit neg(Lit l) { return l ^ 1U; }
inline std::uint32_t var_of(Lit l) { return l >> 1; }

class Dpll {
 public:
  explicit Dpll(const Cnf& cnf) : vars_(cnf.variable_count()), value_(vars_, Unassigned), watches_(2 * vars_) {
    for (const auto& raw : cnf.clauses) {
      std::vector<Lit> c;
      c.reserve(raw.size());
      for (int l : raw) c.push_back(2 * static_cast<Lit>(std::abs(l) - 1) + (l < 0 ? 1U : 0U));
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      bool tautology = false;
      for (std::size_t i = 1; i < c.size(); ++i)
        if (var_of(c[i]) == var_of(c[i - 1])) tautology = true;
      if (tautology) continue;
      if (c.empty()) {
        trivially_unsat_ = true;
        continue;
      }
      if (c.size() == 1) {
        units_.push_back(c[0]);
        continue;
      }
      watches_[c[0]].push_back(clauses_.size());
      watches_[c[1]].push_back(clauses_.size());
      clauses_.push_back(std::move(c));
    }
  }

  bool solve() {
    if (trivially_unsat_) return false;
    for (Lit u : units_) {
      if (is_false(u)) return false;
      if (!is_true(u)) assign(u);
    }
    if (!propagate()) return false;
    for (;;) {
      std::size_t v = next_unassigned();
      if (v == vars_) return true;
      decisions_.push_back({trail_.size(), false});
      assign(2 * static_cast<Lit>(v) + 1);  // try false first
      while (!propagate()) {
        if (!backtrack()) return false;
      }
    }
  }

  bool value(std::size_t v) const { return value_[v] == True; }

 private:
  enum Value : std::int8_t { Unassigned = -1, False = 0, True = 1 };
  struct Decision {
    std::size_t trail_start;
    bool flipped;
  };

  bool is_true(Lit l) const {
    auto v = value_[var_of(l)];
    return v != Unassigned && (v == True) != (l & 1U);
  }
  bool is_false(Lit l) const {
    auto v = value_[var_of(l)];
    return v != Unassigned && (v == True) == (l & 1U);
  }

  void assign(Lit l) {
    value_[var_of(l)] = (l & 1U) ? False : True;
    trail_.push_back(l);
  }

  std::size_t next_unassigned() {
    while (cursor_ < vars_ && value_[cursor_] != Unassigned) ++cursor_;
    return cursor_;
  }

  // Undo the innermost unflipped decision and assert its negation.
  bool backtrack() {
    while (!decisions_.empty() && decisions_.back().flipped) {
      undo_to(decisions_.back().trail_start);
      decisions_.pop_back();
    }
    if (decisions_.empty()) return false;
    Decision& d = decisions_.back();
    Lit decided = trail_[d.trail_start];
    undo_to(d.trail_start);
    d.flipped = true;
    assign(neg(decided));
    return true;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      std::uint32_t v = var_of(trail_.back());
      value_[v] = Unassigned;
      cursor_ = std::min<std::size_t>(cursor_, v);
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, trail_.size());
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      Lit false_lit = neg(trail_[qhead_++]);
      auto& ws = watches_[false_lit];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t k = 0; k < ws.size(); ++k) {
        std::size_t ci = ws[k];
        if (conflict) {
          ws[keep++] = ci;
          continue;
        }
        auto& c = clauses_[ci];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        if (is_true(c[0])) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t j = 2; j < c.size(); ++j) {
          if (!is_false(c[j])) {
            std::swap(c[1], c[j]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (is_false(c[0])) {
          conflict = true;
        } else {
          assign(c[0]);
        }
      }
      ws.resize(keep);
      if (conflict) {
        qhead_ = trail_.size();
        return false;
      }
    }
    return true;
  }

  std::size_t vars_;
  std::vector<Value> value_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<Lit> units_;
  std::vector<Lit> trail_;
  std::vector<Decision> decisions_;
  std::size_t qhead_ = 0;
  std::size_t cursor_ = 0;
  bool trivially_unsat_ = false;
};

}  // namespace

Cnf to_cnf(const GroundSentence& g, const SatLimits& limits) {
  std::size_t atoms = g.atom_bound();
  if (atoms > limits.max_ground_atoms)
    throw ResourceError("sentence uses " + std::to_string(atoms) + " ground atoms; the limit is " +
                        std::to_string(limits.max_ground_atoms));
  return CnfBuilder(atoms, limits).finish(g);
}

std::optional<std::vector<bool>> solve(const Cnf& cnf) {
  Dpll solver(cnf);
  if (!solver.solve()) return std::nullopt;
  std::vector<bool> model(cnf.atom_count);
  for (std::size_t v = 0; v < cnf.atom_count; ++v) model[v] = solver.value(v);
  return model;
}

std::optional<std::vector<bool>> SatOracle::model(const GroundSentence& g) const {
  Cnf cnf = to_cnf(g, limits_);
  if (dimacs_) cnf.write_dimacs(*dimacs_);
  return solve(cnf);
}

bool SatOracle::valid(const GroundSentence& g) const { return !satisfiable(GroundSentence::negation(g)); }

bool SatOracle::implies(const GroundSentence& premise, const GroundSentence& conclusion) const {
  return !satisfiable(GroundSentence::conjunction({premise, GroundSentence::negation(conclusion)}));
}

bool SatOracle::disjoint(const GroundSentence& a, const GroundSentence& b) const {
  return !satisfiable(GroundSentence::conjunction({a, b}));
}

bool is_satisfiable(const GroundSentence& g) { return SatOracle().satisfiable(g); }
bool is_valid(const GroundSentence& g) { return SatOracle().valid(g); }
bool implies(const GroundSentence& premise, const GroundSentence& conclusion) {
  return SatOracle().implies(premise, conclusion);
}
bool disjoint(const GroundSentence& a, const GroundSentence& b) { return SatOracle().disjoint(a, b); }

}  // namespace plog
