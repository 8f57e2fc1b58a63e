#include <doctest.h>

#include <algorithm>

#include "gen.hpp"
#include "plog/error.hpp"
#include "plog/extend.hpp"
#include "plog/program.hpp"

using namespace plog;
using G = GroundSentence;

namespace {

const G p = G::atom(0);
const G q = G::atom(1);
const G r = G::atom(2);

std::vector<std::uint32_t> lp_columns(const Partition& part) {
  std::vector<std::uint32_t> cols;
  for (Subset s : part.satisfiable()) cols.push_back(1U | (s << 1));
  return cols;
}

std::vector<double> lp_rhs(const std::vector<double>& targets) {
  std::vector<double> rhs{1.0};
  rhs.insert(rhs.end(), targets.begin(), targets.end());
  return rhs;
}

}  // namespace

TEST_CASE("feasibility examples") {
  auto space = gen::prop_space(2);
  Feasibility f = extend_feasible({p}, {0.3}, *space);
  REQUIRE(f.feasible);
  CHECK(f.alpha(0b1) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.alpha(0b0) == doctest::Approx(0.7).epsilon(1e-12));

  Feasibility v = extend_feasible({G::disjunction({p, G::negation(p)})}, {0.5}, *space);
  CHECK_FALSE(v.feasible);
  CHECK(v.conflict == std::vector<std::size_t>{0});

  Feasibility s = extend_feasible({p, G::conjunction({p, q})}, {0.3, 0.4}, *space);
  CHECK_FALSE(s.feasible);
  CHECK(s.conflict == std::vector<std::size_t>{0, 1});
  // Grid search over the satisfiable blocks {}, {1}, {1,2} of the simplex.
  bool any = false;
  const int steps = 400;
  const double h = 1.0 / steps;
  for (int a = 0; a <= steps; ++a)
    for (int b = 0; a + b <= steps; ++b) {
      double a1 = a * h, a12 = b * h;
      if (std::abs(a1 + a12 - 0.3) <= h && std::abs(a12 - 0.4) <= h) any = true;
    }
  CHECK_FALSE(any);
}

TEST_CASE("conflict set is irreducible") {
  auto space = gen::prop_space(3);
  // phi1 = p (0.2), phi2 = q (0.5), phi3 = p & q (0.3): the conflict is {1,3}.
  Feasibility f = extend_feasible({p, q, G::conjunction({p, q})}, {0.2, 0.5, 0.3}, *space);
  REQUIRE_FALSE(f.feasible);
  CHECK(f.conflict == std::vector<std::size_t>{0, 2});
}

TEST_CASE("target validation and caps") {
  auto space = gen::prop_space(2);
  CHECK_THROWS_AS(extend_feasible({p}, {1.2}, *space), InputError);
  CHECK_THROWS_AS(extend_feasible({p}, {0.2, 0.3}, *space), InputError);
  std::vector<G> many(21, p);
  CHECK_THROWS_AS(extend_feasible(many, std::vector<double>(21, 0.5), *space), ResourceError);
}

TEST_CASE("subadditivity examples") {
  auto rep = check_subadditive({p, G::conjunction({p, q})}, {0.3, 0.4});
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].index == 0);
  CHECK(rep.violations[0].subset == std::vector<std::size_t>{1});
  CHECK(describe(rep.violations[0], {"p", "p&q"}).rfind("SUBADD", 0) == 0);

  // Three disjoint pieces of (p | q) with too much mass.
  G a = G::conjunction({p, q}), b = G::conjunction({p, G::negation(q)}), c = G::conjunction({G::negation(p), q});
  auto three = check_subadditive({G::disjunction({p, q}), a, b, c}, {0.5, 0.2, 0.2, 0.2});
  REQUIRE_FALSE(three.violations.empty());
  bool whole = false;
  for (const auto& v : three.violations)
    whole = whole || (v.index == 0 && v.subset == std::vector<std::size_t>{1, 2, 3} && v.equality == false);
  CHECK(whole);

  // Covering family short of the target.
  auto eq = check_subadditive({G::disjunction({p, q}), a, b, c}, {0.9, 0.2, 0.2, 0.2});
  bool equality = false;
  for (const auto& v : eq.violations) equality = equality || (v.index == 0 && v.equality);
  CHECK(equality);

  CHECK(check_subadditive({p, q}, {0.9, 0.9}).violations.empty());
}

TEST_CASE("eligibility examples") {
  G bottom = G::conjunction({p, G::negation(p)});
  auto v = check_eligible({bottom}, {0.1});
  REQUIRE(v.size() == 1);
  CHECK(describe(v[0], {"c"}).rfind("ELIG", 0) == 0);
  CHECK(check_eligible({bottom}, {0.0}).empty());
  CHECK(check_eligible({p, q, G::disjunction({p, q})}, {0.2, 0.3, 0.4}).empty());
}

TEST_CASE("necessity: targets read off a belief pass both checks") {
  gen::Rng rng(61);
  for (int trial = 0; trial < 150; ++trial) {
    std::size_t k = 1 + gen::below(rng, 6);
    auto space = gen::prop_space(k);
    Belief b = gen::belief(rng, space, 0.3);
    std::size_t n = 1 + gen::below(rng, 6);
    std::vector<G> phis;
    std::vector<double> targets;
    for (std::size_t i = 0; i < n; ++i) {
      phis.push_back(gen::ground_sentence(rng, k, 3));
      targets.push_back(prob(b, phis.back()));
    }
    CHECK(check_subadditive(phis, targets).violations.empty());
    CHECK(check_eligible(phis, targets).empty());
    CHECK(extend_feasible(phis, targets, *space).feasible);
  }
}

TEST_CASE("sampled subadditivity beyond the exhaustive limit") {
  std::vector<G> phis;
  std::vector<double> targets;
  for (std::size_t i = 0; i < 13; ++i) {
    phis.push_back(G::atom(i));
    targets.push_back(0.5);
  }
  phis.push_back(G::conjunction({G::atom(0), G::atom(1)}));
  targets.push_back(0.7);
  auto rep = check_subadditive(phis, targets);
  CHECK_FALSE(rep.exhaustive);
  CHECK_FALSE(rep.violations.empty());
}

TEST_CASE("hierarchy examples") {
  Hierarchy h = is_hierarchical({p, G::conjunction({p, q}), G::negation(p)});
  REQUIRE(h.hierarchical);
  CHECK(h.depth == std::vector<std::size_t>{1, 2, 1});
  CHECK(h.max_depth == 2);
  CHECK(h.relation[1][0] == PairRelation::Implies);
  CHECK(h.relation[0][1] == PairRelation::ImpliedBy);
  CHECK(h.relation[0][2] == PairRelation::Disjoint);

  Hierarchy indep = is_hierarchical({p, q});
  CHECK_FALSE(indep.hierarchical);
  CHECK(indep.relation[0][1] == PairRelation::None);

  Hierarchy dup = is_hierarchical({p, p});
  CHECK_FALSE(dup.hierarchical);
  CHECK(dup.relation[0][1] == PairRelation::Multiple);

  Hierarchy nest = is_hierarchical({p, G::conjunction({p, q}), G::conjunction({p, q, r})});
  REQUIRE(nest.hierarchical);
  CHECK(nest.max_depth == 3);
}

TEST_CASE("sufficiency on hierarchies") {
  gen::Rng rng(62);
  for (int trial = 0; trial < 100; ++trial) {
    gen::Hierarchical h = gen::hierarchical(rng);
    auto space = gen::prop_space(h.atoms);
    Hierarchy hh = is_hierarchical(h.sentences);
    REQUIRE(hh.hierarchical);
    CHECK(hh.depth == h.depth);
    CHECK(check_subadditive(h.sentences, h.targets).violations.empty());
    CHECK(check_eligible(h.sentences, h.targets).empty());
    Feasibility f = extend_feasible(h.sentences, h.targets, *space);
    REQUIRE(f.feasible);
    Partition part(h.sentences, *space);
    Belief mu = expand_witness(f, part, Belief::uniform(space));
    for (std::size_t i = 0; i < h.sentences.size(); ++i) CHECK(std::abs(prob(mu, h.sentences[i]) - h.targets[i]) <= 1e-9);
  }
}

TEST_CASE("verdicts agree with the brute-force LP oracle") {
  gen::Rng rng(63);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t k = 1 + gen::below(rng, 8);
    auto space = gen::prop_space(k);
    std::size_t n = 1 + gen::below(rng, 4);
    std::vector<G> phis;
    std::vector<double> targets;
    // Half the sets take their targets from a belief, some of those nudged.
    bool read_off = gen::coin(rng);
    Belief b = gen::belief(rng, space, 0.3);
    for (std::size_t i = 0; i < n; ++i) {
      phis.push_back(gen::ground_sentence(rng, k, 3));
      double t = gen::coin(rng, 0.15) ? static_cast<double>(gen::below(rng, 2)) : gen::unit(rng);
      if (read_off) t = std::clamp(prob(b, phis.back()) + (gen::coin(rng, 0.3) ? 0.05 * (gen::unit(rng) - 0.5) : 0.0), 0.0, 1.0);
      targets.push_back(t);
    }
    Partition part(phis, *space);
    Feasibility f = extend_feasible(part, targets);
    bool expect = gen::brute_feasible(n + 1, lp_columns(part), lp_rhs(targets));
    REQUIRE(f.feasible == expect);
    if (!f.feasible) continue;
    ++feasible;
    Belief mu = expand_witness(f, part, Belief::uniform(space));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(prob(mu, phis[i]) - targets[i]) <= 1e-9);
    for (std::size_t k2 = 0; k2 < f.blocks.size(); ++k2) CHECK(f.witness[k2] >= 0.0);
  }
  CHECK(feasible > 20);
}

TEST_CASE("extend_or_explain") {
  Program prog = parse_program(
      "prop p\nprop q\nprop r\n"
      "believe p = 0.6\nbelieve p & q = 0.3\nbelieve p & q & r = 0.1\n");
  auto space = std::make_shared<const WorldSpace>(prog.vocabulary);
  Extension e = extend_or_explain(prog.constraints, Belief::uniform(space));
  REQUIRE(e.projection.has_value());
  CHECK(std::abs(prob(e.projection->belief, prog.constraints[0].sentence) - 0.6) <= 1e-9);
  CHECK(std::abs(prob(e.projection->belief, prog.constraints[1].sentence) - 0.3) <= 1e-9);
  CHECK(std::abs(prob(e.projection->belief, prog.constraints[2].sentence) - 0.1) <= 1e-9);

  Program bad = parse_program("prop p\nprop q\nbelieve p = 0.3\nbelieve p & q = 0.4\n");
  auto bspace = std::make_shared<const WorldSpace>(bad.vocabulary);
  Extension x = extend_or_explain(bad.constraints, Belief::uniform(bspace));
  CHECK_FALSE(x.projection.has_value());
  bool subadd = false, lp = false;
  for (const auto& v : x.diagnostics.violations) {
    subadd = subadd || (v.rule == Rule::Subadditive && v.index == 0 && v.subset == std::vector<std::size_t>{1});
    lp = lp || v.rule == Rule::LpInfeasible;
  }
  CHECK(subadd);
  CHECK(lp);

  // Certain knowledge is conditioning.
  Program cert = parse_program("prop p\nprop q\nbelieve p | q = 1\nbelieve ~q = 1\n");
  auto cspace = std::make_shared<const WorldSpace>(cert.vocabulary);
  gen::Rng rng(64);
  Belief prior = gen::belief(rng, cspace);
  Extension ce = extend_or_explain(cert.constraints, prior);
  REQUIRE(ce.projection.has_value());
  Belief expect = condition(prior, Sentence::conjunction(cert.constraints.sentences()));
  for (std::size_t w = 0; w < 4; ++w) CHECK(std::abs(ce.projection->belief.weight(w) - expect.weight(w)) <= 1e-12);
  CHECK(prob(ce.projection->belief, cert.parse_formula("p")) == doctest::Approx(1.0).epsilon(1e-12));

  Belief dogmatic = condition(Belief::uniform(cspace), cert.parse_formula("p"));
  CHECK_THROWS_AS(extend_or_explain(cert.constraints, dogmatic), InputError);
}
