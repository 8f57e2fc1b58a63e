#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "plog/logic.hpp"

namespace plog {

// A sentence with its target probability mu0.
struct Constraint {
  std::string label;
  Sentence sentence;
  double target = 0.0;
};

class ConstraintSet {
 public:
  ConstraintSet() = default;

  // Throws InputError if target is outside [0,1].
  void add(std::string label, Sentence sentence, double target);

  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }
  const Constraint& operator[](std::size_t i) const { return items_.at(i); }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.end(); }

  std::vector<Sentence> sentences() const;
  std::vector<double> targets() const;

 private:
  std::vector<Constraint> items_;
};

struct NamedSentence {
  std::string name;
  Sentence sentence;
};

// Result of parsing a knowledge base (.plog):
//
//   domain Door = { d1, d2, d3 }
//   pred prize : Door
//   prop p
//   sentence s := exists d:Door. prize(d)
//   believe s = 1
//   believe p & q = 3/10
//
// Operators by decreasing precedence: ~, &, |, -> (right-assoc), <->.
// Quantifiers `forall v:Dom.` / `exists v:Dom.` extend as far right as
// possible. `=` compares domain terms. `#` starts a line comment.
struct Program {
  Vocabulary vocabulary;
  std::vector<NamedSentence> sentences;
  ConstraintSet constraints;

  const Sentence* find_sentence(std::string_view name) const;
  // Parses a formula against this program's vocabulary and named sentences.
  Sentence parse_formula(std::string_view text) const;
};

Program parse_program(std::string_view text);

// Parses a decimal ("0.25") or fraction ("1/4") and checks it lies in [0,1].
double parse_probability(std::string_view text);

}  // namespace plog
