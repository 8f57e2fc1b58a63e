#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plog/belief.hpp"
#include "plog/maxent.hpp"
#include "plog/program.hpp"
#include "plog/sat.hpp"
#include "plog/worlds.hpp"

namespace plog {

// Verdict of the block LP:  sum_S alpha_S = 1,  sum_{S containing i} alpha_S =
// target_i,  alpha_S >= 0, over the satisfiable blocks only.
struct Feasibility {
  bool feasible = false;
  std::size_t sentence_count = 0;
  std::vector<Subset> blocks;   // satisfiable blocks, ascending
  std::vector<double> witness;  // alpha per entry of `blocks` when feasible
  // When infeasible: a minimal set of constraint indices whose targets cannot
  // be met together.
  std::vector<std::size_t> conflict;
  double infeasibility = 0.0;  // phase-one optimum of the full system

  double alpha(Subset s) const;
};

constexpr double feasibility_tol = 1e-9;

Feasibility extend_feasible(const Partition& partition, const std::vector<double>& targets);
Feasibility extend_feasible(const std::vector<GroundSentence>& sentences, const std::vector<double>& targets,
                            const WorldSpace& space);
Feasibility extend_feasible(const ConstraintSet& c, const WorldSpace& space);

// mu(phi) = sum_S alpha_S prior(phi | psi_S): spreads each block's witness
// mass over its worlds in proportion to the prior. Throws InputError if the
// prior gives a block with positive alpha no mass.
Belief expand_witness(const Feasibility& f, const Partition& partition, const Belief& prior);

enum class Rule { Subadditive, Eligible, LpInfeasible, Hierarchy };
const char* tag(Rule rule);

struct Violation {
  Rule rule = Rule::Subadditive;
  std::size_t index = 0;            // the sentence phi_i concerned
  std::vector<std::size_t> subset;  // disjoint family, conflict set, or pair partner
  double sum = 0.0;                 // sum of the family's targets
  double target = 0.0;              // target of phi_i
  bool equality = false;            // the family also covers phi_i
};

// Pairwise facts about phi_1..phi_n, decided by the SAT oracle.
struct Relations {
  std::vector<bool> satisfiable;
  std::vector<std::vector<bool>> implies;   // implies[i][j]: phi_i -> phi_j valid
  std::vector<std::vector<bool>> disjoint;  // ~(phi_i & phi_j) valid
};
Relations relations(const std::vector<GroundSentence>& sentences, const SatOracle& oracle = {});

struct SubadditivityOptions {
  std::size_t exhaustive_limit = 12;
  std::size_t samples = 10000;
  std::uint64_t seed = 0x5eed;
  double tol = 1e-9;
};

struct SubadditivityReport {
  std::vector<Violation> violations;
  bool exhaustive = true;  // false when families were sampled
};

// For every i and every non-empty pairwise-disjoint family J whose
// disjunction implies phi_i: sum_J target <= target_i, with equality when
// phi_i also implies the disjunction.
SubadditivityReport check_subadditive(const std::vector<GroundSentence>& sentences, const std::vector<double>& targets,
                                      const SatOracle& oracle = {}, const SubadditivityOptions& options = {});

// Unsatisfiable sentences with a positive target.
std::vector<Violation> check_eligible(const std::vector<GroundSentence>& sentences, const std::vector<double>& targets,
                                      const SatOracle& oracle = {});

enum class PairRelation { Disjoint, Implies, ImpliedBy, None, Multiple };
const char* to_string(PairRelation r);

struct Hierarchy {
  bool hierarchical = false;
  std::vector<std::vector<PairRelation>> relation;  // relation[i][j] for i != j
  std::vector<std::size_t> depth;                   // filled only when hierarchical
  std::size_t max_depth = 0;
};

// Hierarchical iff every pair is exactly one of disjoint, i => j, j => i.
// Depth counts the sentences on the implication chain from a maximal element.
Hierarchy is_hierarchical(const std::vector<GroundSentence>& sentences, const SatOracle& oracle = {});

struct Diagnostics {
  std::vector<Violation> violations;
  bool exhaustive = true;
};

struct Extension {
  std::optional<Projection> projection;  // set iff feasible
  Feasibility feasibility;
  Diagnostics diagnostics;
};

// Projects the prior onto the constraints when they are feasible, otherwise
// collects eligibility, subadditivity and LP findings. Rejects priors that
// are not strongly Cournot.
Extension extend_or_explain(const ConstraintSet& c, const Belief& prior, const ProjectionOptions& options = {});

// One line per violation, tagged SUBADD, ELIG, LP-INFEASIBLE or HIER.
std::string describe(const Violation& v, const std::vector<std::string>& labels);

}  // namespace plog
