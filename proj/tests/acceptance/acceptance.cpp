// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "gen.hpp"
#include "plog/belief.hpp"
#include "plog/error.hpp"
#include "plog/extend.hpp"
#include "plog/induct.hpp"
#include "plog/maxent.hpp"
#include "plog/program.hpp"
#include "plog/sat.hpp"
#include "plog/simplex.hpp"

using namespace plog;
using G = GroundSentence;

namespace {

// Collects failures; keeps the first message and the worst deviation seen.
struct Verdict {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first;
  double worst = 0.0;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  void close(double got, double want, double tol, const std::string& what) {
    double d = std::abs(got - want);
    worst = std::max(worst, d);
    char buf[128];
    std::snprintf(buf, sizeof buf, " (got %.17g, want %.17g)", got, want);
    expect(d <= tol, what + buf);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Verdict naive_ravens() {
  Verdict v;
  SequencePrior naive = SequencePrior::parse("iid:1@1/2");
  for (std::size_t n = 0; n <= 30; ++n) {
    v.close(predictive(naive, n), 0.5, 1e-12, "predictive n=" + std::to_string(n));
    for (std::size_t m = n; m <= n + 20; ++m)
      v.close(prefix_prob(naive, m) / prefix_prob(naive, n), std::ldexp(1.0, -static_cast<int>(m - n)), 1e-12,
              "conjunction bound m=" + std::to_string(m) + " n=" + std::to_string(n));
  }
  // The uniform tree over B(1..16) in the finite engine.
  const std::size_t k = 16;
  auto space = sequence_space(k);
  Belief xi = Belief::uniform(space);
  std::vector<G> atoms;
  for (std::size_t i = 0; i < k; ++i) atoms.push_back(G::atom(i));
  TreeCoefficients alpha = tree_coefficients(xi, atoms, k);
  for (std::size_t n = 1; n <= k; ++n)
    for (Subset s = 0; s < (Subset{1} << n); s += 1 + (n > 10 ? 97 : 0))
      v.close(*alpha.get(n, s), std::ldexp(1.0, -static_cast<int>(n)), 1e-12, "alpha_{n,S}");
  v.expect(check_tree_coefficients(alpha, atoms, *space).empty(), "uniform tree flagged");
  for (std::size_t n = 0; n + 1 < k; ++n) {
    G prefix = G::conjunction(std::vector<G>(atoms.begin(), atoms.begin() + static_cast<long>(n)));
    v.close(cond(xi, atoms[n], prefix), 0.5, 1e-12, "finite predictive n=" + std::to_string(n));
    for (std::size_t m = n; m <= k; ++m) {
      G longer = G::conjunction(std::vector<G>(atoms.begin(), atoms.begin() + static_cast<long>(m)));
      v.close(cond(xi, longer, prefix), std::ldexp(1.0, -static_cast<int>(m - n)), 1e-12, "finite bound");
    }
  }
  return v;
}

Verdict learning_in_the_limit() {
  Verdict v;
  SequencePrior p = SequencePrior::parse("alltrue:0.5,iid:0.5@0.5");
  for (std::size_t n : {1, 5, 10, 20, 40})
    v.close(posterior_universal(p, n), 0.5 / (0.5 + 0.5 * std::ldexp(1.0, -static_cast<int>(n))), 1e-12,
            "posterior n=" + std::to_string(n));
  v.expect(posterior_universal(p, 20) >= 1.0 - 1e-6, "posterior at n=20 below 1-1e-6");
  return v;
}

Verdict cuh_equivalence() {
  Verdict v;
  const std::size_t n_max = 40;
  struct Canned {
    const char* spec;
    bool holds;
  };
  for (Canned c : {Canned{"alltrue:0.5,iid:0.5@0.5", true}, Canned{"iid:1@0.5", false}, Canned{"alltrue:1", true}}) {
    SequencePrior p = SequencePrior::parse(c.spec);
    CuhReport r = cuh_equivalence_check(p, n_max);
    std::string tag = c.spec;
    v.expect(r.left_holds == r.right_holds, tag + ": sides disagree");
    v.expect(r.equivalent, tag + ": equivalence not reported");
    v.expect(r.left_holds == c.holds, tag + ": unexpected verdict");
    v.expect(r.gaps_bounded, tag + ": gaps exceed the component tail bound");
    for (std::size_t n = 0; n <= n_max; ++n) {
      double tail = std::ldexp(1.0, -static_cast<int>(n));
      v.expect(r.right_gap[n] <= tail, tag + ": right gap above 2^-n at n=" + std::to_string(n));
      if (c.holds) v.expect(r.left_gap[n] <= tail, tag + ": left gap above 2^-n at n=" + std::to_string(n));
    }
  }
  return v;
}

std::string slurp(const char* path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict monty_hall() {
  Verdict v;
  Program prog = parse_program(slurp("kb/monty-hall.plog"));
  auto space = std::make_shared<const WorldSpace>(prog.vocabulary);
  Projection fit = project(Belief::uniform(space), prog.constraints);
  const Belief& mu = fit.belief;
  double sw = prob(mu, prog.parse_formula("~phi9"));
  double st = prob(mu, prog.parse_formula("phi9"));
  v.close(sw, 2.0 / 3.0, 1e-12, "P(win by switching)");
  v.close(st, 1.0 / 3.0, 1e-12, "P(win by staying)");

  // Leaf table of the game: prize and first pick uniform and independent,
  // host uniform over the doors that are neither.
  const auto& voc = prog.vocabulary;
  std::vector<double> leaf(space->world_count(), 0.0);
  double leaf_switch = 0.0;
  for (std::size_t prize = 0; prize < 3; ++prize)
    for (std::size_t first = 0; first < 3; ++first) {
      std::vector<std::size_t> hosts;
      for (std::size_t h = 0; h < 3; ++h)
        if (h != prize && h != first) hosts.push_back(h);
      for (std::size_t h : hosts) {
        double pr = (1.0 / 9.0) / static_cast<double>(hosts.size());
        std::size_t w = 0;
        w |= std::size_t{1} << voc.atom_index(*voc.find_symbol("first"), {first});
        w |= std::size_t{1} << voc.atom_index(*voc.find_symbol("host"), {h});
        w |= std::size_t{1} << voc.atom_index(*voc.find_symbol("prize"), {prize});
        leaf[w] += pr;
        if (first != prize) leaf_switch += pr;
      }
    }
  v.close(sw, leaf_switch, 1e-12, "switching vs leaf table");
  for (std::size_t w = 0; w < leaf.size(); ++w) v.close(mu.weight(w), leaf[w], 1e-12, "world " + std::to_string(w));
  Belief table(space, leaf);
  Sentence given = prog.parse_formula("first(d1) & host(d3)");
  v.close(cond(mu, prog.parse_formula("prize(d2)"), given), cond(table, prog.parse_formula("prize(d2)"), given), 1e-12,
          "P(prize(d2) | first(d1), host(d3))");
  v.close(cond(mu, prog.parse_formula("prize(d2)"), given), 2.0 / 3.0, 1e-12, "P(prize(d2) | first(d1), host(d3))");
  return v;
}

// ---------------------------------------------------------------------------
// Property suite over random beliefs and sentences.

G equivalent_form(gen::Rng& rng, const G& g, std::size_t k) {
  G h = gen::ground_sentence(rng, k, 2);
  switch (gen::below(rng, 3)) {
    case 0:
      return G::negation(G::negation(g));
    case 1:
      return G::disjunction({G::conjunction({g, h}), G::conjunction({g, G::negation(h)})});
    default:
      return G::conjunction({G::implication(h, g), G::implication(G::negation(h), g)});
  }
}

// Items 1-7 on one belief; `tag` prefixes messages.
void pps_items(Verdict& v, gen::Rng& rng, const Belief& b, std::size_t k, const std::string& tag) {
  const double tol = 1e-12;
  G phi = gen::ground_sentence(rng, k, 4);
  G psi = gen::ground_sentence(rng, k, 4);
  double p = prob(b, phi);
  v.close(prob(b, G::negation(phi)), 1.0 - p, tol, tag + "item 1");
  v.expect(p <= 1.0 && p >= 0.0, tag + "item 2");
  G bottom = G::conjunction({phi, G::negation(G::disjunction({phi, psi}))});
  v.expect(!is_satisfiable(bottom), tag + "item 3 generator");
  v.expect(prob(b, bottom) == 0.0, tag + "item 3");
  if (!is_satisfiable(phi)) v.expect(p == 0.0, tag + "item 3 (random)");
  G weaker = G::disjunction({phi, psi});
  v.expect(implies(phi, weaker), tag + "item 4 generator");
  v.expect(p <= prob(b, weaker) + tol, tag + "item 4");
  if (implies(psi, phi)) v.expect(prob(b, psi) <= p + tol, tag + "item 4 (random)");
  G eq = equivalent_form(rng, phi, k);
  v.expect(is_valid(G::biconditional(eq, phi)), tag + "item 5 generator");
  v.close(prob(b, eq), p, tol, tag + "item 5");
  std::size_t m = 2 + gen::below(rng, 3);
  std::vector<G> thetas, chis;
  double sum = 0.0, sum_theta = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    thetas.push_back(gen::ground_sentence(rng, k, 3));
    std::vector<G> parts{thetas.back()};
    for (std::size_t i = 0; i < j; ++i) parts.push_back(G::negation(thetas[i]));
    chis.push_back(G::conjunction(parts));
    for (std::size_t i = 0; i < j; ++i) v.expect(disjoint(chis[i], chis[j]), tag + "item 6 generator");
    sum += prob(b, chis.back());
    sum_theta += prob(b, thetas.back());
  }
  v.close(prob(b, G::disjunction(chis)), sum, tol, tag + "item 6");
  v.expect(prob(b, G::disjunction(thetas)) <= sum_theta + tol, tag + "item 7");
}

Verdict pps_suite() {
  Verdict v;
  gen::Rng rng(2024);
  const int cases = 1000;
  auto random_belief = [&](std::size_t& k) {
    k = 1 + gen::below(rng, 12);
    return gen::belief(rng, gen::prop_space(k), gen::coin(rng) ? 0.3 : 0.0);
  };
  for (int c = 0; c < cases; ++c) {
    std::size_t k;
    Belief b = random_belief(k);
    pps_items(v, rng, b, k, "items 1-7: ");
  }
  for (int c = 0; c < cases; ++c) {
    std::size_t k = 1 + gen::below(rng, 12);
    Belief b = gen::belief(rng, gen::prop_space(k));
    v.expect(is_strongly_cournot(b), "item 8 generator");
    G phi = gen::ground_sentence(rng, k, 3);
    if (gen::coin(rng, 0.3)) phi = G::disjunction({phi, G::negation(phi)});
    bool certain = prob(b, phi) >= 1.0 - 1e-12;
    v.expect(certain == is_valid(phi), "item 8");
  }
  for (int c = 0; c < cases;) {
    std::size_t k;
    Belief b = random_belief(k);
    G given = gen::ground_sentence(rng, k, 2);
    if (prob(b, given) == 0.0) continue;
    ++c;
    pps_items(v, rng, condition(b, given), k, "item 9: ");
  }
  for (int c = 0; c < cases; ++c) {
    std::size_t k;
    Belief b = random_belief(k);
    G phi = gen::ground_sentence(rng, k, 4);
    G psi = gen::ground_sentence(rng, k, 4);
    v.close(prob(b, G::disjunction({phi, psi})) + prob(b, G::conjunction({phi, psi})), prob(b, phi) + prob(b, psi),
            1e-12, "item 10");
  }
  return v;
}

// ---------------------------------------------------------------------------

Verdict ext_prob_oracle() {
  Verdict v;
  gen::Rng rng(606);
  int feasible = 0;
  for (int c = 0; c < 200; ++c) {
    std::size_t k = 1 + gen::below(rng, 8);
    auto space = gen::prop_space(k);
    std::size_t n = 1 + gen::below(rng, 4);
    bool read_off = gen::coin(rng);
    Belief src = gen::belief(rng, space, 0.3);
    std::vector<G> phis;
    std::vector<double> targets;
    for (std::size_t i = 0; i < n; ++i) {
      phis.push_back(gen::ground_sentence(rng, k, 3));
      double t = read_off ? prob(src, phis.back()) : gen::unit(rng);
      if (read_off && gen::coin(rng, 0.3)) t = std::clamp(t + 0.05 * (gen::unit(rng) - 0.5), 0.0, 1.0);
      targets.push_back(t);
    }
    Partition part(phis, *space);
    Feasibility f = extend_feasible(part, targets);
    std::vector<std::uint32_t> cols;
    for (Subset s : part.satisfiable()) cols.push_back(1U | (s << 1));
    std::vector<double> rhs{1.0};
    rhs.insert(rhs.end(), targets.begin(), targets.end());
    v.expect(f.feasible == gen::brute_feasible(n + 1, cols, rhs), "verdict differs from the oracle, case " + std::to_string(c));
    if (!f.feasible) continue;
    ++feasible;
    Belief mu = expand_witness(f, part, Belief::uniform(space));
    for (std::size_t i = 0; i < n; ++i) v.close(prob(mu, phis[i]), targets[i], 1e-9, "witness reconstruction");
  }
  v.expect(feasible >= 40 && feasible <= 160, "feasible/infeasible mix is lopsided: " + std::to_string(feasible));
  return v;
}

Verdict erc_sufficiency() {
  Verdict v;
  gen::Rng rng(707);
  for (int c = 0; c < 100; ++c) {
    gen::Hierarchical h = gen::hierarchical(rng);
    auto space = gen::prop_space(h.atoms);
    Hierarchy hh = is_hierarchical(h.sentences);
    v.expect(hh.hierarchical && hh.max_depth <= 4, "generator produced a non-hierarchical set");
    v.expect(check_subadditive(h.sentences, h.targets).violations.empty(), "targets not subadditive");
    v.expect(check_eligible(h.sentences, h.targets).empty(), "targets not eligible");
    ConstraintSet cs;
    for (std::size_t i = 0; i < h.sentences.size(); ++i)
      cs.add("s" + std::to_string(i + 1), to_sentence(h.sentences[i], space->vocabulary()), h.targets[i]);
    Extension e = extend_or_explain(cs, Belief::uniform(space));
    v.expect(e.feasibility.feasible, "hierarchical set infeasible");
    if (!e.projection) continue;
    for (std::size_t i = 0; i < h.sentences.size(); ++i)
      v.close(prob(e.projection->belief, h.sentences[i]), h.targets[i], 1e-9, "extension misses a target");
  }
  return v;
}

// Random belief meeting the targets: convex mix of LP vertices over blocks,
// spread inside blocks by a random positive shape.
Belief feasible_belief(gen::Rng& rng, const std::shared_ptr<const WorldSpace>& space, const std::vector<G>& phis,
                       const std::vector<double>& targets) {
  Partition part(phis, *space);
  std::vector<std::uint32_t> cols;
  for (Subset s : part.satisfiable()) cols.push_back(1U | (s << 1));
  std::vector<double> rhs{1.0};
  rhs.insert(rhs.end(), targets.begin(), targets.end());
  ZeroOneLp lp(phis.size() + 1, cols, rhs);
  std::vector<double> alpha(std::size_t{1} << phis.size(), 0.0);
  double total = 0.0;
  for (std::size_t m = 0, mixes = 1 + gen::below(rng, 4); m < mixes; ++m) {
    std::vector<double> cost(cols.size());
    for (auto& c : cost) c = gen::unit(rng);
    LpResult r = lp.minimize(cost);
    if (r.status != LpResult::Status::Optimal) throw NumericalError("vertex search failed");
    double w = gen::unit(rng) + 0.1;
    total += w;
    for (std::size_t j = 0; j < cols.size(); ++j) alpha[part.satisfiable()[j]] += w * r.x[j];
  }
  std::vector<double> shape(space->world_count()), block(alpha.size(), 0.0);
  for (std::size_t w = 0; w < shape.size(); ++w) block[part.block_of(w)] += (shape[w] = gen::unit(rng) + 1e-3);
  std::vector<double> weights(shape.size());
  long double sum = 0.0L;
  for (std::size_t w = 0; w < shape.size(); ++w) {
    Subset s = part.block_of(w);
    sum += (weights[w] = alpha[s] / total * shape[w] / block[s]);
  }
  for (auto& x : weights) x = static_cast<double>(x / sum);
  return Belief(space, std::move(weights));
}

Verdict maxent_optimality() {
  Verdict v;
  gen::Rng rng(808);
  for (int c = 0; c < 50; ++c) {
    std::size_t k = 1 + gen::below(rng, 6);
    auto space = gen::prop_space(k);
    Belief prior = gen::belief(rng, space);
    Belief src = gen::belief(rng, space, gen::coin(rng) ? 0.4 : 0.0);
    std::size_t n = 1 + gen::below(rng, 4);
    std::vector<G> phis;
    std::vector<double> targets;
    for (std::size_t i = 0; i < n; ++i) {
      phis.push_back(gen::ground_sentence(rng, k, 3));
      targets.push_back(prob(src, phis.back()));
    }
    Projection mp = project(prior, phis, targets);
    for (int t = 0; t < 100; ++t) {
      Belief nu = feasible_belief(rng, space, phis, targets);
      double knu = kl(nu, prior);
      v.expect(mp.kl <= knu + 1e-9, "a feasible belief beats the projection by " + fmt("%.3g", mp.kl - knu));
    }
    // Gradient at a random point.
    std::vector<double> lam(n);
    for (auto& l : lam) l = 4.0 * gen::unit(rng) - 2.0;
    auto grad = dual_gradient(lam, prior, phis, targets);
    for (std::size_t i = 0; i < n; ++i) {
      auto up = lam, down = lam;
      up[i] += 1e-6;
      down[i] -= 1e-6;
      double fd = (dual_value(up, prior, phis, targets) - dual_value(down, prior, phis, targets)) / 2e-6;
      v.close(grad[i], fd, 1e-6, "dual gradient vs central difference");
    }
    // Shape inside every block with mass.
    Partition part(phis, *space);
    for (const auto& b : mp.blocks) {
      if (b.mass <= 0.0) continue;
      ModelSet blk = part.block(b.subset);
      for (int s = 0; s < 5; ++s) {
        ModelSet phi = models(gen::ground_sentence(rng, k, 3), *space);
        v.close(cond(mp.belief, phi, blk), cond(prior, phi, blk), 1e-10, "block conditional");
      }
    }
  }
  auto two = gen::prop_space(2);
  Projection p7 = project(Belief::uniform(two), {G::atom(0)}, {0.7});
  v.close(p7.kl, 0.7 * std::log(1.4) + 0.3 * std::log(0.6), 1e-10, "KL of the 0.7 case");
  return v;
}

Verdict gaifman_exactness() {
  Verdict v;
  gen::Rng rng(909);
  for (int c = 0; c < 200; ++c) {
    Vocabulary voc = gen::fo_vocabulary(rng, 12, 4);
    auto space = std::make_shared<const WorldSpace>(voc);
    std::size_t d = gen::below(rng, voc.domains().size());
    gen::Scope scope{{"x0", d}};
    Sentence body = gen::fo_sentence(rng, voc, 3, scope);
    Sentence all = Sentence::forall("x0", d, body);
    ModelSet direct = gen::fo_models(all, voc);
    ModelSet grounded = models(ground(all, voc), *space);
    v.expect(direct == grounded, "Mod(forall) differs from Mod(grounding): " + to_string(all, voc));
    ModelSet inst(space->world_count(), true);
    for (const auto& cst : voc.domain(d).constants)
      inst &= models(Sentence::exists("x0", d,
                                      Sentence::conjunction({Sentence::equality(Term{true, "x0", d}, Term{false, cst, d}), body})),
                     *space);
    v.expect(inst == grounded, "instance conjunction differs");
    for (int b = 0; b < 3; ++b) {
      Belief mu = gen::belief(rng, space, 0.3 * b);
      v.expect(prob(mu, all) == prob(mu, ground(all, voc)), "probabilities differ");
    }
  }
  return v;
}

// ---------------------------------------------------------------------------

struct Table {
  TreeCoefficients alpha;
  std::vector<G> phis;
  std::shared_ptr<const WorldSpace> space;
  std::size_t depth;
};

Table random_table(gen::Rng& rng) {
  std::size_t k = 1 + gen::below(rng, 8);
  auto space = gen::prop_space(k);
  Belief b = gen::belief(rng, space, 0.3);
  std::size_t n = 1 + gen::below(rng, 8);
  std::vector<G> phis;
  for (std::size_t i = 0; i < n; ++i) {
    // Mix in sentences implied by earlier ones so unsatisfiable blocks occur.
    if (i > 0 && gen::coin(rng, 0.3)) {
      phis.push_back(G::disjunction({phis[gen::below(rng, i)], gen::ground_sentence(rng, k, 2)}));
    } else {
      phis.push_back(gen::ground_sentence(rng, k, 3));
    }
  }
  return {tree_coefficients(b, phis, n), phis, space, n};
}

TreeCoefficients copy_table(const Table& t) {
  TreeCoefficients out;
  for (std::size_t n = 1; n <= t.depth; ++n)
    for (Subset s = 0; s < (Subset{1} << n); ++s) out.set(n, s, *t.alpha.get(n, s));
  return out;
}

bool only(const std::vector<TreeViolation>& vs, TreeRule rule) {
  if (vs.empty()) return false;
  for (const auto& x : vs)
    if (x.rule != rule) return false;
  return true;
}

Verdict tree_coefficients_check() {
  Verdict v;
  gen::Rng rng(1010);
  for (int c = 0; c < 50; ++c) {
    Table t = random_table(rng);
    v.expect(check_tree_coefficients(t.alpha, t.phis, *t.space).empty(), "coefficients of a belief flagged");
  }
  int made[4] = {0, 0, 0, 0};
  const double delta = 1e-3;
  for (int attempt = 0; attempt < 5000 && (made[0] < 50 || made[1] < 50 || made[2] < 50 || made[3] < 50); ++attempt) {
    Table t = random_table(rng);
    const std::size_t N = t.depth;
    Partition part(t.phis, *t.space);
    const Subset top = Subset{1} << (N - 1);
    auto val = [&](Subset s) { return *t.alpha.get(N, s); };
    auto sat = [&](Subset s) { return part.is_satisfiable(s); };
    std::vector<Subset> lower;  // S without the last sentence
    for (Subset s = 0; s < top; ++s) lower.push_back(s);

    // (a) a sibling pair of satisfiable blocks: push one below zero.
    if (made[0] < 50) {
      for (Subset s : lower)
        if (sat(s) && sat(s | top)) {
          TreeCoefficients a = copy_table(t);
          double parent = val(s) + val(s | top);
          a.set(N, s, -delta);
          a.set(N, s | top, parent + delta);
          v.expect(only(check_tree_coefficients(a, t.phis, *t.space), TreeRule::NonNegative), "2(a) misflagged");
          ++made[0];
          break;
        }
    }
    // (b) mass moved from a satisfiable block into its unsatisfiable sibling.
    if (made[1] < 50) {
      for (Subset s : lower) {
        Subset from = sat(s) ? s : s | top, to = sat(s) ? s | top : s;
        if (sat(from) && !sat(to) && val(from) > 2 * delta) {
          TreeCoefficients a = copy_table(t);
          a.set(N, from, val(from) - delta);
          a.set(N, to, delta);
          v.expect(only(check_tree_coefficients(a, t.phis, *t.space), TreeRule::ZeroOnUnsatisfiable), "2(b) misflagged");
          ++made[1];
          break;
        }
      }
    }
    // (c) mass moved between satisfiable blocks with different parents.
    if (made[2] < 50 && N >= 2) {
      bool done = false;
      for (Subset s = 0; s < (Subset{1} << N) && !done; ++s)
        for (Subset u = 0; u < (Subset{1} << N) && !done; ++u)
          if ((s & (top - 1)) != (u & (top - 1)) && sat(s) && sat(u) && val(s) > 2 * delta) {
            TreeCoefficients a = copy_table(t);
            a.set(N, s, val(s) - delta);
            a.set(N, u, val(u) + delta);
            v.expect(only(check_tree_coefficients(a, t.phis, *t.space), TreeRule::Splitting), "2(c) misflagged");
            ++made[2];
            done = true;
          }
    }
    // (d) every level scaled by the same factor.
    if (made[3] < 50) {
      TreeCoefficients a;
      double f = gen::coin(rng) ? 1.01 : 0.99;
      for (std::size_t n = 1; n <= N; ++n)
        for (Subset s = 0; s < (Subset{1} << n); ++s) a.set(n, s, *t.alpha.get(n, s) * f);
      v.expect(only(check_tree_coefficients(a, t.phis, *t.space), TreeRule::LevelSum), "2(d) misflagged");
      ++made[3];
    }
  }
  for (int r = 0; r < 4; ++r) v.expect(made[r] == 50, "too few single-violation tables for rule " + std::to_string(r));
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const Criterion criteria[] = {
      {"naive black ravens exactness", naive_ravens},
      {"learning in the limit", learning_in_the_limit},
      {"confirmation equivalence on canned priors", cuh_equivalence},
      {"Monty Hall switch 2/3, stay 1/3", monty_hall},
      {"probability property suite, items 1-10", pps_suite},
      {"extension feasibility vs brute-force LP", ext_prob_oracle},
      {"hierarchical sets are extendable", erc_sufficiency},
      {"maximum entropy optimality", maxent_optimality},
      {"finite-domain Gaifman exactness", gaifman_exactness},
      {"tree coefficient conditions", tree_coefficients_check},
  };
  int failed = 0;
  auto start = std::chrono::steady_clock::now();
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = v.failures == 0;
    failed += !ok;
    std::printf("%s  %2d  %-44s  %7zu checks  max dev %.2e  %6.2fs", ok ? "PASS" : "FAIL", index, c.name, v.checks,
                v.worst, secs);
    if (!ok) std::printf("  [%zu failed; first: %s]", v.failures, v.first.c_str());
    std::printf("\n");
  }
  double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d of 10 criteria passed in %.2fs\n", 10 - failed, total);
  return failed == 0 && total < 60.0 ? 0 : 1;
}
