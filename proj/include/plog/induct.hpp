#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "plog/belief.hpp"
#include "plog/worlds.hpp"

namespace plog {

// A law over infinite 0/1 sequences B(1), B(2), ...
struct SequenceComponent {
  enum class Kind { AllTrue, AllFalse, FiniteSet, Iid };

  Kind kind = Kind::AllTrue;
  double mass = 0.0;
  double theta = 0.0;               // Iid: P(B(k)) for every k
  std::vector<std::size_t> indices;  // FiniteSet: the k (1-based) with B(k) true

  // Probability that B(1..n) are all true.
  double prefix(std::size_t n) const;
  // Probability that every B(k) is true.
  double universal() const;
};

// Finite mixture with strictly positive masses summing to 1.
class SequencePrior {
 public:
  explicit SequencePrior(std::vector<SequenceComponent> components);

  // `kind:mass[@param]` items joined by commas: alltrue:m, allfalse:m,
  // iid:m@theta, finite:m@1|2|3. Masses and theta accept decimals or p/q.
  static SequencePrior parse(std::string_view spec);

  const std::vector<SequenceComponent>& components() const noexcept { return components_; }

 private:
  std::vector<SequenceComponent> components_;
};

// mu(B(1) & ... & B(n)).
double prefix_prob(const SequencePrior& p, std::size_t n);
// mu(forall x. B(x)).
double universal_prob(const SequencePrior& p);
// mu(forall x. B(x) | B(1..n)). Throws UndefinedConditional if the prefix has
// probability zero; likewise predictive.
double posterior_universal(const SequencePrior& p, std::size_t n);
// mu(B(n+1) | B(1..n)).
double predictive(const SequencePrior& p, std::size_t n);

struct CuhReport {
  double universal = 0.0;
  std::vector<double> left_gap;    // 1 - posterior_universal(n), n = 0..n_max
  std::vector<double> right_gap;   // prefix_prob(n) - universal_prob
  std::vector<double> tail_bound;  // per-component bound on right_gap
  bool left_holds = false;         // posterior within tol of 1 at n_max
  bool right_holds = false;        // universal > 0 and prefix within tol*universal of it
  bool equivalent = false;
  bool gaps_bounded = false;       // right_gap <= tail_bound and left_gap <= tail_bound / universal
};

CuhReport cuh_equivalence_check(const SequencePrior& p, std::size_t n_max, double tol = 1e-6);

// World space over B(1..n) and the mixture's marginal on it.
std::shared_ptr<const WorldSpace> sequence_space(std::size_t n);
Belief to_belief(const SequencePrior& p, std::shared_ptr<const WorldSpace> space);

// Columns n, prefix_prob, posterior_universal, predictive for n = 0..n_max,
// shortest round-trip floats; undefined entries are left empty.
void write_csv(std::ostream& out, const SequencePrior& p, std::size_t n_max);

}  // namespace plog
