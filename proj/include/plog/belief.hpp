#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include "plog/logic.hpp"
#include "plog/worlds.hpp"

namespace plog {

// A probability over the worlds of a WorldSpace. mu(phi) is the total weight
// of Mod(phi).
class Belief {
 public:
  static constexpr double normalization_tol = 1e-12;

  // Validates weights: one per world, finite, non-negative, summing to 1
  // within normalization_tol. Negative zeros become +0.
  Belief(std::shared_ptr<const WorldSpace> space, std::vector<double> weights);

  static Belief uniform(std::shared_ptr<const WorldSpace> space);
  static Belief point_mass(std::shared_ptr<const WorldSpace> space, std::size_t world);

  const WorldSpace& space() const noexcept { return *space_; }
  const std::shared_ptr<const WorldSpace>& space_ptr() const noexcept { return space_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(std::size_t world) const { return weights_.at(world); }

 private:
  std::shared_ptr<const WorldSpace> space_;
  std::vector<double> weights_;
};

double prob(const Belief& b, const ModelSet& m);
double prob(const Belief& b, const GroundSentence& g);
double prob(const Belief& b, const Sentence& s);

// mu(phi | psi). Throws UndefinedConditional when mu(psi) = 0.
double cond(const Belief& b, const ModelSet& phi, const ModelSet& psi);
double cond(const Belief& b, const GroundSentence& phi, const GroundSentence& psi);
double cond(const Belief& b, const Sentence& phi, const Sentence& psi);

// Zeroes the weight outside Mod(psi) and renormalizes.
Belief condition(const Belief& b, const ModelSet& psi);
Belief condition(const Belief& b, const GroundSentence& psi);
Belief condition(const Belief& b, const Sentence& psi);

// Sum over worlds of mu_w log(mu_w / xi_w); +infinity if mu puts weight where
// xi has none. Throws VocabularyMismatch for different world spaces.
double kl(const Belief& mu, const Belief& xi);

// Every satisfiable sentence gets positive probability, i.e. every world has
// positive weight.
bool is_strongly_cournot(const Belief& b);

// mu(psi_S) for every S in 0..2^n-1 of the partition.
std::vector<double> block_masses(const Belief& b, const Partition& p);

// alpha_{n,S} = mu(psi_{n,S}) for levels 1..depth.
TreeCoefficients tree_coefficients(const Belief& b, const std::vector<GroundSentence>& sentences,
                                   std::size_t depth);

// Text table: a header naming the atom order, then `world weight` lines for
// the worlds of positive weight. Weights use shortest round-trip formatting.
void write_belief(std::ostream& out, const Belief& b);
// Missing worlds read as weight 0. Throws VocabularyMismatch if the header's
// atom order differs from the space, InputError on malformed lines.
Belief read_belief(std::istream& in, std::shared_ptr<const WorldSpace> space);

}  // namespace plog
