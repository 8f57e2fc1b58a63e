#include "plog/extend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>

#include "compensated_sum.hpp"
#include "plog/error.hpp"
#include "plog/simplex.hpp"

namespace plog {

double Feasibility::alpha(Subset s) const {
  auto it = std::lower_bound(blocks.begin(), blocks.end(), s);
  if (it == blocks.end() || *it != s || witness.empty()) return 0.0;
  return witness[static_cast<std::size_t>(it - blocks.begin())];
}

namespace {

// Rows: normalization, then one per selected constraint.
LpResult solve_rows(const std::vector<Subset>& blocks, const std::vector<double>& targets,
                    const std::vector<std::size_t>& rows) {
  std::vector<std::uint32_t> cols;
  cols.reserve(blocks.size());
  for (Subset s : blocks) {
    std::uint32_t mask = 1;
    for (std::size_t k = 0; k < rows.size(); ++k)
      if ((s >> rows[k]) & 1U) mask |= 1U << (k + 1);
    cols.push_back(mask);
  }
  std::vector<double> rhs{1.0};
  for (std::size_t i : rows) rhs.push_back(targets[i]);
  LpResult r = ZeroOneLp(rows.size() + 1, std::move(cols), std::move(rhs)).feasibility(feasibility_tol);
  if (r.status == LpResult::Status::IterationLimit) throw NumericalError("simplex hit its iteration limit");
  return r;
}

}  // namespace

Feasibility extend_feasible(const Partition& partition, const std::vector<double>& targets) {
  const std::size_t n = partition.sentence_count();
  if (targets.size() != n) throw InputError("one target per sentence is required");
  for (double t : targets)
    if (!(t >= 0.0 && t <= 1.0)) throw InputError("targets must lie in [0,1]");
  Feasibility f;
  f.sentence_count = n;
  f.blocks = partition.satisfiable();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  LpResult r = solve_rows(f.blocks, targets, all);
  f.infeasibility = r.infeasibility;
  if (r.status == LpResult::Status::Optimal) {
    for (double a : r.x)
      if (a < 0.0) throw NumericalError("simplex witness has a negative coefficient " + std::to_string(a));
    f.feasible = true;
    f.witness = std::move(r.x);
    detail::CompensatedSum total;
    std::vector<detail::CompensatedSum> rows(n);
    for (std::size_t k = 0; k < f.blocks.size(); ++k) {
      total += f.witness[k];
      for (std::size_t i = 0; i < n; ++i)
        if ((f.blocks[k] >> i) & 1U) rows[i] += f.witness[k];
    }
    bool ok = std::abs(total.value() - 1.0) <= feasibility_tol;
    for (std::size_t i = 0; i < n; ++i) ok = ok && std::abs(rows[i].value() - targets[i]) <= feasibility_tol;
    if (!ok) throw NumericalError("simplex witness misses the constraints by more than the tolerance");
    return f;
  }
  // Deletion filter: drop each constraint whose removal keeps the rest infeasible.
  std::vector<std::size_t> keep = all;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> trial;
    for (std::size_t k : keep)
      if (k != i) trial.push_back(k);
    if (trial.size() == keep.size()) continue;
    if (solve_rows(f.blocks, targets, trial).status == LpResult::Status::Infeasible) keep = std::move(trial);
  }
  f.conflict = std::move(keep);
  return f;
}

Feasibility extend_feasible(const std::vector<GroundSentence>& sentences, const std::vector<double>& targets,
                            const WorldSpace& space) {
  return extend_feasible(Partition(sentences, space), targets);
}

Feasibility extend_feasible(const ConstraintSet& c, const WorldSpace& space) {
  std::vector<GroundSentence> g;
  for (const auto& item : c) g.push_back(ground(item.sentence, space.vocabulary()));
  return extend_feasible(g, c.targets(), space);
}

Belief expand_witness(const Feasibility& f, const Partition& partition, const Belief& prior) {
  if (!f.feasible) throw InputError("no witness to expand");
  std::vector<double> xi = block_masses(prior, partition);
  std::vector<double> scale(xi.size(), 0.0);
  for (std::size_t k = 0; k < f.blocks.size(); ++k) {
    Subset s = f.blocks[k];
    if (f.witness[k] == 0.0) continue;
    if (xi[s] <= 0.0) throw InputError("prior gives block " + format_subset(s) + " no mass");
    scale[s] = f.witness[k] / xi[s];
  }
  std::vector<double> w(prior.weights().size());
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < w.size(); ++i) total += (w[i] = prior.weights()[i] * scale[partition.block_of(i)]);
  // The witness sums to 1 only within the LP tolerance.
  for (auto& x : w) x /= total.value();
  return Belief(prior.space_ptr(), std::move(w));
}

const char* tag(Rule rule) {
  switch (rule) {
    case Rule::Subadditive:
      return "SUBADD";
    case Rule::Eligible:
      return "ELIG";
    case Rule::LpInfeasible:
      return "LP-INFEASIBLE";
    case Rule::Hierarchy:
      return "HIER";
  }
  return "?";
}

Relations relations(const std::vector<GroundSentence>& sentences, const SatOracle& oracle) {
  const std::size_t n = sentences.size();
  Relations r;
  r.satisfiable.resize(n);
  r.implies.assign(n, std::vector<bool>(n, false));
  r.disjoint.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    r.satisfiable[i] = oracle.satisfiable(sentences[i]);
    r.implies[i][i] = true;
    r.disjoint[i][i] = !r.satisfiable[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      r.implies[i][j] = !r.satisfiable[i] || oracle.implies(sentences[i], sentences[j]);
      if (j > i) r.disjoint[i][j] = r.disjoint[j][i] = !r.satisfiable[i] || !r.satisfiable[j] ||
                                                       oracle.disjoint(sentences[i], sentences[j]);
    }
  return r;
}

SubadditivityReport check_subadditive(const std::vector<GroundSentence>& sentences, const std::vector<double>& targets,
                                      const SatOracle& oracle, const SubadditivityOptions& opt) {
  const std::size_t n = sentences.size();
  if (targets.size() != n) throw InputError("one target per sentence is required");
  Relations rel = relations(sentences, oracle);
  SubadditivityReport report;
  report.exhaustive = n <= opt.exhaustive_limit;
  std::set<std::pair<std::size_t, std::vector<std::size_t>>> seen;

  // Returns true if the family breaks the inequality.
  auto examine = [&](std::size_t i, const std::vector<std::size_t>& family) {
    detail::CompensatedSum sum;
    for (std::size_t j : family) sum += targets[j];
    double s = sum.value();
    if (s > targets[i] + opt.tol) {
      std::vector<std::size_t> key = family;
      std::sort(key.begin(), key.end());
      if (seen.insert({i, key}).second) report.violations.push_back({Rule::Subadditive, i, key, s, targets[i], false});
      return true;
    }
    if (targets[i] - s > opt.tol) {
      std::vector<GroundSentence> parts;
      for (std::size_t j : family) parts.push_back(sentences[j]);
      if (oracle.implies(sentences[i], GroundSentence::disjunction(parts))) {
        std::vector<std::size_t> key = family;
        std::sort(key.begin(), key.end());
        if (seen.insert({i, key}).second) report.violations.push_back({Rule::Subadditive, i, key, s, targets[i], true});
      }
    }
    return false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> cand;
    for (std::size_t j = 0; j < n; ++j)
      if (rel.implies[j][i]) cand.push_back(j);

    if (report.exhaustive) {
      std::vector<std::size_t> family;
      std::function<void(std::size_t)> grow = [&](std::size_t from) {
        for (std::size_t k = from; k < cand.size(); ++k) {
          std::size_t j = cand[k];
          bool ok = std::all_of(family.begin(), family.end(), [&](std::size_t f) { return rel.disjoint[f][j]; });
          if (!ok) continue;
          family.push_back(j);
          // Supersets of a breaking family break too; report the smallest.
          if (!examine(i, family)) grow(k + 1);
          family.pop_back();
        }
      };
      grow(0);
    }
  }

  if (!report.exhaustive && n > 0) {
    std::mt19937_64 rng(opt.seed);
    for (std::size_t draw = 0; draw < opt.samples; ++draw) {
      std::size_t i = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
      std::vector<std::size_t> cand;
      for (std::size_t j = 0; j < n; ++j)
        if (rel.implies[j][i]) cand.push_back(j);
      std::shuffle(cand.begin(), cand.end(), rng);
      std::vector<std::size_t> family;
      for (std::size_t j : cand) {
        if (!(rng() & 1U)) continue;
        if (std::all_of(family.begin(), family.end(), [&](std::size_t f) { return rel.disjoint[f][j]; }))
          family.push_back(j);
      }
      if (!family.empty()) examine(i, family);
    }
  }
  return report;
}

std::vector<Violation> check_eligible(const std::vector<GroundSentence>& sentences, const std::vector<double>& targets,
                                      const SatOracle& oracle) {
  if (targets.size() != sentences.size()) throw InputError("one target per sentence is required");
  std::vector<Violation> out;
  for (std::size_t i = 0; i < sentences.size(); ++i)
    if (targets[i] > 0.0 && !oracle.satisfiable(sentences[i]))
      out.push_back({Rule::Eligible, i, {}, 0.0, targets[i], false});
  return out;
}

const char* to_string(PairRelation r) {
  switch (r) {
    case PairRelation::Disjoint:
      return "disjoint";
    case PairRelation::Implies:
      return "implies";
    case PairRelation::ImpliedBy:
      return "implied-by";
    case PairRelation::None:
      return "none";
    case PairRelation::Multiple:
      return "multiple";
  }
  return "?";
}

Hierarchy is_hierarchical(const std::vector<GroundSentence>& sentences, const SatOracle& oracle) {
  const std::size_t n = sentences.size();
  Relations rel = relations(sentences, oracle);
  Hierarchy h;
  h.hierarchical = true;
  h.relation.assign(n, std::vector<PairRelation>(n, PairRelation::None));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      int count = rel.disjoint[i][j] + rel.implies[i][j] + rel.implies[j][i];
      PairRelation r = PairRelation::None;
      if (count > 1) {
        r = PairRelation::Multiple;
      } else if (rel.disjoint[i][j]) {
        r = PairRelation::Disjoint;
      } else if (rel.implies[i][j]) {
        r = PairRelation::Implies;
      } else if (rel.implies[j][i]) {
        r = PairRelation::ImpliedBy;
      }
      h.relation[i][j] = r;
      if (r == PairRelation::None || r == PairRelation::Multiple) h.hierarchical = false;
    }
  if (!h.hierarchical) return h;
  // Strict implication is a partial order here, so the recursion terminates.
  h.depth.assign(n, 0);
  std::function<std::size_t(std::size_t)> depth = [&](std::size_t i) -> std::size_t {
    if (h.depth[i]) return h.depth[i];
    std::size_t d = 1;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && rel.implies[i][j]) d = std::max(d, depth(j) + 1);
    return h.depth[i] = d;
  };
  for (std::size_t i = 0; i < n; ++i) h.max_depth = std::max(h.max_depth, depth(i));
  return h;
}

Extension extend_or_explain(const ConstraintSet& c, const Belief& prior, const ProjectionOptions& options) {
  if (!is_strongly_cournot(prior)) throw InputError("prior is not strongly Cournot: some world has zero weight");
  std::vector<GroundSentence> g;
  for (const auto& item : c) g.push_back(ground(item.sentence, prior.space().vocabulary()));
  std::vector<double> targets = c.targets();
  Partition part(g, prior.space());
  Extension out{std::nullopt, extend_feasible(part, targets), {}};
  if (out.feasibility.feasible) {
    out.projection = project(prior, g, targets, options);
    return out;
  }
  for (auto& v : check_eligible(g, targets)) out.diagnostics.violations.push_back(std::move(v));
  SubadditivityReport sub = check_subadditive(g, targets);
  out.diagnostics.exhaustive = sub.exhaustive;
  for (auto& v : sub.violations) out.diagnostics.violations.push_back(std::move(v));
  out.diagnostics.violations.push_back(
      {Rule::LpInfeasible, 0, out.feasibility.conflict, out.feasibility.infeasibility, 0.0, false});
  return out;
}

std::string describe(const Violation& v, const std::vector<std::string>& labels) {
  auto label = [&](std::size_t i) { return i < labels.size() ? labels[i] : "#" + std::to_string(i + 1); };
  auto family = [&] {
    std::string s = "{";
    for (std::size_t k = 0; k < v.subset.size(); ++k) s += (k ? ", " : "") + label(v.subset[k]);
    return s + "}";
  };
  char num[64];
  std::string out = tag(v.rule);
  switch (v.rule) {
    case Rule::Subadditive: {
      std::snprintf(num, sizeof num, "%.12g", v.sum);
      std::string sum = num;
      std::snprintf(num, sizeof num, "%.12g", v.target);
      if (v.equality) {
        out += " " + family() + " covers " + label(v.index) + ": targets sum to " + sum + " but " + label(v.index) +
               " has " + num;
      } else {
        out += " " + family() + " => " + label(v.index) + ": targets sum to " + sum + " > " + num;
      }
      break;
    }
    case Rule::Eligible:
      std::snprintf(num, sizeof num, "%.12g", v.target);
      out += " " + label(v.index) + " is unsatisfiable but has target " + num;
      break;
    case Rule::LpInfeasible:
      out += " no probability meets the targets of " + family() + " together";
      break;
    case Rule::Hierarchy:
      out += " " + label(v.index) + " / " + family() + " are neither nested nor disjoint";
      break;
  }
  return out;
}

}  // namespace plog
