#include "plog/maxent.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "compensated_sum.hpp"
#include "plog/simplex.hpp"

namespace plog {

namespace {

// Below this an LP value counts as zero when deciding which blocks can carry
// mass. Smaller than hard_tol so a soft target always has room.
constexpr double kPositive = 1e-13;

std::vector<GroundSentence> ground_all(const ConstraintSet& c, const Vocabulary& v) {
  std::vector<GroundSentence> out;
  out.reserve(c.size());
  for (const auto& item : c) out.push_back(ground(item.sentence, v));
  return out;
}

// Which columns some feasible point can make positive; nullopt if the LP is
// infeasible.
std::optional<std::vector<bool>> positive_support(const ZeroOneLp& lp) {
  LpResult first = lp.feasibility();
  if (first.status == LpResult::Status::IterationLimit) throw NumericalError("simplex hit its iteration limit");
  if (first.status != LpResult::Status::Optimal) return std::nullopt;
  std::vector<bool> pos(lp.columns(), false);
  for (std::size_t j = 0; j < first.x.size(); ++j) pos[j] = first.x[j] > kPositive;
  for (;;) {
    std::vector<double> cost(lp.columns(), 0.0);
    bool open = false;
    for (std::size_t j = 0; j < cost.size(); ++j)
      if (!pos[j]) {
        cost[j] = -1.0;
        open = true;
      }
    if (!open) break;
    LpResult r = lp.minimize(cost);
    if (r.status != LpResult::Status::Optimal) throw NumericalError("support search failed in the simplex");
    bool progress = false;
    for (std::size_t j = 0; j < r.x.size(); ++j)
      if (!pos[j] && r.x[j] > kPositive) pos[j] = progress = true;
    if (!progress) break;
  }
  return pos;
}

// Exponential family over the kept blocks: p_S proportional to
// q_S exp(sum_{k in bits_S} lambda_k).
class Family {
 public:
  Family(std::vector<double> log_q, std::vector<std::uint32_t> bits, std::size_t dim)
      : log_q_(std::move(log_q)), bits_(std::move(bits)), dim_(dim) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return bits_.size(); }
  std::uint32_t bits(std::size_t s) const { return bits_[s]; }

  double log_phi(const Eigen::VectorXd& lam) const {
    std::vector<double> z(size());
    double zmax = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < size(); ++s) {
      z[s] = exponent(lam, s);
      zmax = std::max(zmax, z[s]);
    }
    detail::CompensatedSum sum;
    for (double v : z) sum += std::exp(v - zmax);
    return zmax + std::log(sum.value());
  }

  // Probabilities of the kept blocks under lam.
  std::vector<double> probs(const Eigen::VectorXd& lam, double* log_phi_out = nullptr) const {
    double lp = log_phi(lam);
    if (log_phi_out) *log_phi_out = lp;
    std::vector<double> p(size());
    for (std::size_t s = 0; s < size(); ++s) p[s] = std::exp(exponent(lam, s) - lp);
    return p;
  }

  Eigen::VectorXd mean(const std::vector<double>& p) const {
    std::vector<detail::CompensatedSum> acc(dim_);
    for (std::size_t s = 0; s < size(); ++s)
      for (std::uint32_t m = bits_[s]; m; m &= m - 1) acc[static_cast<std::size_t>(__builtin_ctz(m))] += p[s];
    Eigen::VectorXd theta(static_cast<Eigen::Index>(dim_));
    for (std::size_t k = 0; k < dim_; ++k) theta(static_cast<Eigen::Index>(k)) = acc[k].value();
    return theta;
  }

  Eigen::MatrixXd covariance(const std::vector<double>& p, const Eigen::VectorXd& theta) const {
    const auto d = static_cast<Eigen::Index>(dim_);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd f(d);
    for (std::size_t s = 0; s < size(); ++s) {
      for (Eigen::Index k = 0; k < d; ++k) f(k) = ((bits_[s] >> k) & 1U) - theta(k);
      cov.selfadjointView<Eigen::Lower>().rankUpdate(f, p[s]);
    }
    return cov.selfadjointView<Eigen::Lower>();
  }

  double dual(const Eigen::VectorXd& lam, const Eigen::VectorXd& a) const { return lam.dot(a) - log_phi(lam); }

 private:
  double exponent(const Eigen::VectorXd& lam, std::size_t s) const {
    double z = log_q_[s];
    for (std::uint32_t m = bits_[s]; m; m &= m - 1) z += lam(__builtin_ctz(m));
    return z;
  }

  std::vector<double> log_q_;
  std::vector<std::uint32_t> bits_;
  std::size_t dim_;
};

struct DualSolution {
  Eigen::VectorXd lambda;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool used_scaling = false;
};

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Maximizes the concave dual by damped Newton, with a sweep of iterative
// scaling whenever the Newton step is unusable.
DualSolution solve_dual(const Family& fam, const Eigen::VectorXd& a, const ProjectionOptions& opt) {
  const auto d = static_cast<Eigen::Index>(fam.dim());
  DualSolution out;
  out.lambda = Eigen::VectorXd::Zero(d);
  if (d == 0) return out;

  Eigen::VectorXd lam = out.lambda;
  Eigen::VectorXd best = lam;
  double best_res = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  auto residual_at = [&](const Eigen::VectorXd& l) { return max_abs(a - fam.mean(fam.probs(l))); };

  auto scaling_sweep = [&] {
    out.used_scaling = true;
    for (Eigen::Index k = 0; k < d; ++k) {
      double th = fam.mean(fam.probs(lam))(k);
      if (th <= 0.0 || th >= 1.0) continue;
      lam(k) += std::log(a(k) * (1.0 - th) / ((1.0 - a(k)) * th));
    }
  };

  for (std::size_t it = 0; it < opt.max_iterations; ++it) {
    std::vector<double> p = fam.probs(lam);
    Eigen::VectorXd theta = fam.mean(p);
    Eigen::VectorXd grad = a - theta;
    double res = max_abs(grad);
    if (res < best_res) {
      best_res = res;
      best = lam;
      since_best = 0;
    } else if (++since_best > 50 && best_res <= opt.max_residual) {
      break;
    }
    if (res <= opt.target_residual) break;
    out.iterations = it + 1;

    Eigen::MatrixXd H = fam.covariance(p, theta);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    bool usable = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                  ldlt.vectorD().minCoeff() > 1e-14 * std::max(1.0, ldlt.vectorD().maxCoeff());
    bool stepped = false;
    if (usable) {
      Eigen::VectorXd dir = ldlt.solve(grad);
      double g0 = fam.dual(lam, a);
      double slope = grad.dot(dir);
      for (double t = 1.0; t > 1e-12; t *= 0.5) {
        Eigen::VectorXd cand = lam + t * dir;
        double g1 = fam.dual(cand, a);
        if (!std::isfinite(g1)) continue;
        bool armijo = g1 >= g0 + 1e-4 * t * slope;
        // Near the optimum the dual is flat to rounding; judge by residual.
        bool flat = std::abs(g1 - g0) <= 1e-14 * (1.0 + std::abs(g0)) && residual_at(cand) < res;
        if (armijo || flat) {
          lam = cand;
          stepped = true;
          break;
        }
      }
    }
    if (!stepped) scaling_sweep();
  }

  double final_res = residual_at(lam);
  if (final_res < best_res) {
    best_res = final_res;
    best = lam;
  }
  out.lambda = best;
  out.residual = best_res;
  if (best_res > opt.max_residual) {
    std::vector<double> bl(best.data(), best.data() + best.size());
    throw ProjectionError("maximum entropy solver stalled at residual " + std::to_string(best_res), bl, best_res);
  }
  return out;
}

// Greedy choice of features linearly independent of the constant and of each
// other over the kept blocks. Dependent constraints are implied by the rest.
std::vector<std::size_t> independent_features(const std::vector<Subset>& kept, const std::vector<std::size_t>& cand) {
  const auto K = static_cast<Eigen::Index>(kept.size());
  std::vector<Eigen::VectorXd> basis;
  basis.push_back(Eigen::VectorXd::Ones(K) / std::sqrt(static_cast<double>(K)));
  std::vector<std::size_t> chosen;
  for (std::size_t i : cand) {
    Eigen::VectorXd v(K);
    for (Eigen::Index s = 0; s < K; ++s) v(s) = (kept[static_cast<std::size_t>(s)] >> i) & 1U;
    double norm0 = v.norm();
    if (norm0 == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) v -= b.dot(v) * b;
    double norm = v.norm();
    if (norm <= 1e-9 * norm0) continue;
    basis.push_back(v / norm);
    chosen.push_back(i);
  }
  return chosen;
}

}  // namespace

Projection project(const Belief& prior, const std::vector<GroundSentence>& sentences,
                   const std::vector<double>& targets, const ProjectionOptions& opt) {
  const std::size_t n = sentences.size();
  if (targets.size() != n) throw InputError("one target per sentence is required");
  for (double t : targets)
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("targets must lie in [0,1]");

  Partition part(sentences, prior.space());
  std::vector<double> xi = block_masses(prior, part);

  // Hard targets are snapped to 0 or 1 and realized by conditioning: the
  // support search below empties every block that contradicts them.
  std::vector<bool> hard(n);
  std::vector<double> rhs(n + 1, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double t = targets[i];
    hard[i] = t <= opt.hard_tol || t >= 1.0 - opt.hard_tol;
    rhs[i + 1] = hard[i] ? (t >= 0.5 ? 1.0 : 0.0) : t;
  }

  std::vector<Subset> support;
  for (Subset s : part.satisfiable())
    if (xi[s] > 0.0) support.push_back(s);
  std::vector<std::uint32_t> cols;
  cols.reserve(support.size());
  for (Subset s : support) cols.push_back(1U | (s << 1));
  auto pos = positive_support(ZeroOneLp(n + 1, cols, rhs));
  if (!pos) throw InfeasibleError("no belief within the prior's support meets the targets");

  std::vector<Subset> kept;
  Projection out{prior, std::vector<std::optional<double>>(n), {}, {}, 1.0, 0.0, 0.0, 0, false, {}, 0.0};
  for (std::size_t j = 0; j < support.size(); ++j) {
    if ((*pos)[j]) {
      kept.push_back(support[j]);
    } else {
      out.forced_empty.push_back(support[j]);
    }
  }

  std::vector<std::size_t> soft;
  for (std::size_t i = 0; i < n; ++i)
    if (!hard[i]) soft.push_back(i);
  std::vector<std::size_t> features = independent_features(kept, soft);

  std::vector<double> log_q(kept.size());
  std::vector<std::uint32_t> bits(kept.size(), 0);
  for (std::size_t s = 0; s < kept.size(); ++s) {
    log_q[s] = std::log(xi[kept[s]]);
    for (std::size_t k = 0; k < features.size(); ++k)
      if ((kept[s] >> features[k]) & 1U) bits[s] |= 1U << k;
  }
  Family fam(std::move(log_q), std::move(bits), features.size());
  Eigen::VectorXd a(static_cast<Eigen::Index>(features.size()));
  for (std::size_t k = 0; k < features.size(); ++k) a(static_cast<Eigen::Index>(k)) = targets[features[k]];

  DualSolution sol = solve_dual(fam, a, opt);
  out.iterations = sol.iterations;
  out.used_scaling = sol.used_scaling;
  for (std::size_t i : soft) out.lambda[i] = 0.0;
  for (std::size_t k = 0; k < features.size(); ++k) out.lambda[features[k]] = sol.lambda(static_cast<Eigen::Index>(k));

  double log_phi = 0.0;
  std::vector<double> p = fam.probs(sol.lambda, &log_phi);
  out.log_phi = log_phi;
  out.phi = std::exp(log_phi);

  // Block masses, then the prior's shape inside each block.
  std::vector<double> scale(std::size_t{1} << n, 0.0);
  for (std::size_t s = 0; s < kept.size(); ++s) {
    double qs = xi[kept[s]];
    out.blocks.push_back({kept[s], qs, p[s] / qs, p[s]});
    scale[kept[s]] = p[s] / qs;
  }
  std::vector<double> w(prior.weights().size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = prior.weights()[i] * scale[part.block_of(i)];
  out.belief = Belief(prior.space_ptr(), std::move(w));
  out.kl = kl(out.belief, prior);

  for (std::size_t i = 0; i < n; ++i) {
    double r = prob(out.belief, sentences[i]) - targets[i];
    out.residuals.push_back(r);
    out.max_residual = std::max(out.max_residual, std::abs(r));
  }
  if (out.max_residual > opt.max_residual) {
    std::vector<double> bl(sol.lambda.data(), sol.lambda.data() + sol.lambda.size());
    throw ProjectionError("projected belief misses a target by " + std::to_string(out.max_residual), bl,
                          out.max_residual);
  }
  return out;
}

Projection project(const Belief& prior, const ConstraintSet& c, const ProjectionOptions& options) {
  return project(prior, ground_all(c, prior.space().vocabulary()), c.targets(), options);
}

namespace {

// xi(psi_S) and the tilted block probabilities for an explicit lambda.
struct Tilt {
  double log_phi;
  std::vector<Subset> blocks;
  std::vector<double> probs;
};

Tilt tilt(const std::vector<double>& lambda, const Belief& prior, const std::vector<GroundSentence>& sentences) {
  if (lambda.size() != sentences.size()) throw InputError("one multiplier per sentence is required");
  for (double l : lambda)
    if (!std::isfinite(l)) throw InputError("dual evaluation needs finite multipliers");
  Partition part(sentences, prior.space());
  std::vector<double> xi = block_masses(prior, part);
  std::vector<Subset> blocks;
  std::vector<double> log_q;
  std::vector<std::uint32_t> bits;
  for (Subset s : part.satisfiable())
    if (xi[s] > 0.0) {
      blocks.push_back(s);
      log_q.push_back(std::log(xi[s]));
      bits.push_back(s);
    }
  Family fam(std::move(log_q), std::move(bits), sentences.size());
  Eigen::Map<const Eigen::VectorXd> lam(lambda.data(), static_cast<Eigen::Index>(lambda.size()));
  Tilt t;
  t.probs = fam.probs(lam, &t.log_phi);
  t.blocks = std::move(blocks);
  return t;
}

}  // namespace

double dual_value(const std::vector<double>& lambda, const Belief& prior, const std::vector<GroundSentence>& sentences,
                  const std::vector<double>& targets) {
  if (targets.size() != sentences.size()) throw InputError("one target per sentence is required");
  Tilt t = tilt(lambda, prior, sentences);
  detail::CompensatedSum sum;
  for (std::size_t i = 0; i < lambda.size(); ++i) sum += lambda[i] * targets[i];
  sum += -t.log_phi;
  return sum.value();
}

double dual_value(const std::vector<double>& lambda, const Belief& prior, const ConstraintSet& c) {
  return dual_value(lambda, prior, ground_all(c, prior.space().vocabulary()), c.targets());
}

std::vector<double> dual_gradient(const std::vector<double>& lambda, const Belief& prior,
                                  const std::vector<GroundSentence>& sentences, const std::vector<double>& targets) {
  if (targets.size() != sentences.size()) throw InputError("one target per sentence is required");
  Tilt t = tilt(lambda, prior, sentences);
  std::vector<detail::CompensatedSum> theta(sentences.size());
  for (std::size_t s = 0; s < t.blocks.size(); ++s)
    for (std::uint32_t m = t.blocks[s]; m; m &= m - 1) theta[static_cast<std::size_t>(__builtin_ctz(m))] += t.probs[s];
  std::vector<double> g(sentences.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = targets[i] - theta[i].value();
  return g;
}

std::vector<double> dual_gradient(const std::vector<double>& lambda, const Belief& prior, const ConstraintSet& c) {
  return dual_gradient(lambda, prior, ground_all(c, prior.space().vocabulary()), c.targets());
}

std::string format_report(const Projection& p, const std::vector<std::string>& labels) {
  std::string out;
  char buf[256];
  auto line = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out += buf;
  };
  out += "multipliers\n";
  for (std::size_t i = 0; i < p.lambda.size(); ++i) {
    const char* label = i < labels.size() ? labels[i].c_str() : "?";
    if (p.lambda[i]) {
      line("  %-24s lambda = % .12f\n", label, *p.lambda[i]);
    } else {
      line("  %-24s lambda = hard (conditioned)\n", label);
    }
  }
  out += "blocks\n";
  line("  %-16s %16s %16s %16s\n", "S", "prior", "w_S", "mass");
  constexpr std::size_t shown = 64;
  for (std::size_t k = 0; k < p.blocks.size() && k < shown; ++k) {
    const auto& b = p.blocks[k];
    line("  %-16s %16.12f %16.12g %16.12f\n", format_subset(b.subset).c_str(), b.prior_mass, b.weight, b.mass);
  }
  if (p.blocks.size() > shown) line("  ... %zu more blocks\n", p.blocks.size() - shown);
  if (!p.forced_empty.empty()) line("  %zu blocks forced empty by the targets\n", p.forced_empty.size());
  line("Phi = %.12g\nlog Phi = %.12g\nKL = %.12f\n", p.phi, p.log_phi, p.kl);
  line("iterations = %zu%s\n", p.iterations, p.used_scaling ? " (iterative scaling used)" : "");
  out += "residuals\n";
  for (std::size_t i = 0; i < p.residuals.size(); ++i)
    line("  %-24s %.3e\n", i < labels.size() ? labels[i].c_str() : "?", p.residuals[i]);
  return out;
}

}  // namespace plog
