#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "plog/belief.hpp"
#include "plog/error.hpp"
#include "plog/program.hpp"
#include "plog/worlds.hpp"

namespace plog {

struct ProjectionOptions {
  double hard_tol = 1e-12;      // targets this close to 0 or 1 are conditioned on
  double target_residual = 1e-13;
  double max_residual = 1e-8;   // worse than this after max_iterations is a failure
  std::size_t max_iterations = 10000;
};

// One psi_S block that keeps positive mass.
struct ProjectedBlock {
  Subset subset = 0;
  double prior_mass = 0.0;  // xi(psi_S)
  double weight = 0.0;      // w_S = exp(sum_{j in S} lambda_j) / Phi
  double mass = 0.0;        // w_S xi(psi_S)
};

// The minimum relative entropy belief matching the targets.
struct Projection {
  Belief belief;
  // Per constraint. nullopt marks a target of 0 or 1, realized by
  // conditioning rather than a finite multiplier.
  std::vector<std::optional<double>> lambda;
  std::vector<ProjectedBlock> blocks;
  // Satisfiable blocks of positive prior mass that every matching belief
  // must leave empty.
  std::vector<Subset> forced_empty;
  double phi = 1.0;
  double log_phi = 0.0;
  double kl = 0.0;
  std::size_t iterations = 0;
  bool used_scaling = false;  // iterative scaling replaced a Newton step
  std::vector<double> residuals;  // prob(phi_i) - target_i
  double max_residual = 0.0;
};

// Raised when the solver stalls above the residual limit. Carries the best
// multipliers found.
class ProjectionError : public NumericalError {
 public:
  ProjectionError(const std::string& msg, std::vector<double> best_lambda, double residual)
      : NumericalError(msg), best_lambda_(std::move(best_lambda)), residual_(residual) {}
  const std::vector<double>& best_lambda() const noexcept { return best_lambda_; }
  double residual() const noexcept { return residual_; }

 private:
  std::vector<double> best_lambda_;
  double residual_;
};

// KL projection of `prior` onto {mu : mu(phi_i) = target_i}. Throws
// InfeasibleError if no belief absolutely continuous w.r.t. the prior meets
// the targets.
Projection project(const Belief& prior, const std::vector<GroundSentence>& sentences,
                   const std::vector<double>& targets, const ProjectionOptions& options = {});
Projection project(const Belief& prior, const ConstraintSet& c, const ProjectionOptions& options = {});

// g(lambda) = sum_i lambda_i target_i - log Phi(lambda), with
// Phi(lambda) = sum_S xi(psi_S) exp(sum_{j in S} lambda_j).
double dual_value(const std::vector<double>& lambda, const Belief& prior, const std::vector<GroundSentence>& sentences,
                  const std::vector<double>& targets);
double dual_value(const std::vector<double>& lambda, const Belief& prior, const ConstraintSet& c);

// Gradient of dual_value: target_i - sum_{S containing i} w_S xi(psi_S).
std::vector<double> dual_gradient(const std::vector<double>& lambda, const Belief& prior,
                                  const std::vector<GroundSentence>& sentences, const std::vector<double>& targets);
std::vector<double> dual_gradient(const std::vector<double>& lambda, const Belief& prior, const ConstraintSet& c);

// Lambda table, block table, Phi, KL and residuals.
std::string format_report(const Projection& p, const std::vector<std::string>& labels);

}  // namespace plog
