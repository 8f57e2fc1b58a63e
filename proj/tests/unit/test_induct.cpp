#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plog/belief.hpp"
#include "plog/error.hpp"
#include "plog/induct.hpp"
#include "plog/program.hpp"

using namespace plog;

namespace {

SequencePrior mixture() { return SequencePrior::parse("alltrue:0.5,iid:0.5@0.5"); }
SequencePrior naive() { return SequencePrior::parse("iid:1.0@0.5"); }
SequencePrior certain() { return SequencePrior::parse("alltrue:1.0"); }

// Brute force: marginalize the component laws over all patterns of length
// n+2 whose first n entries are true.
double brute_prefix(const SequencePrior& p, std::size_t n) {
  const std::size_t len = n + 2;
  const std::uint64_t head = (std::uint64_t{1} << n) - 1;
  double total = 0.0;
  for (const auto& c : p.components()) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
      double pr = 1.0;
      for (std::size_t k = 0; k < len; ++k) {
        bool b = (bits >> k) & 1U;
        switch (c.kind) {
          case SequenceComponent::Kind::AllTrue:
            pr *= b ? 1.0 : 0.0;
            break;
          case SequenceComponent::Kind::AllFalse:
            pr *= b ? 0.0 : 1.0;
            break;
          case SequenceComponent::Kind::Iid:
            pr *= b ? c.theta : 1.0 - c.theta;
            break;
          case SequenceComponent::Kind::FiniteSet: {
            bool in = std::find(c.indices.begin(), c.indices.end(), k + 1) != c.indices.end();
            pr *= b == in ? 1.0 : 0.0;
            break;
          }
        }
      }
      if ((bits & head) == head) total += c.mass * pr;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("prefix probabilities") {
  CHECK(prefix_prob(mixture(), 0) == 1.0);
  for (std::size_t n = 0; n <= 30; ++n) CHECK(prefix_prob(naive(), n) == std::ldexp(1.0, -static_cast<int>(n)));
  CHECK(prefix_prob(mixture(), 3) == 0.5625);
  SequencePrior many = SequencePrior::parse("alltrue:0.2,allfalse:0.1,iid:0.3@0.7,finite:0.4@1|2|3|5");
  for (std::size_t n = 0; n <= 10; ++n) CHECK(std::abs(prefix_prob(many, n) - brute_prefix(many, n)) <= 1e-15);
}

TEST_CASE("universal probability") {
  CHECK(universal_prob(naive()) == 0.0);
  CHECK(universal_prob(mixture()) == 0.5);
  CHECK(universal_prob(SequencePrior::parse("iid:0.25@1,iid:0.75@0.9")) == 0.25);
  CHECK(std::abs(prefix_prob(mixture(), 60) - universal_prob(mixture())) <= std::ldexp(1.0, -59));
}

TEST_CASE("posterior of the universal hypothesis") {
  double expect = 0.5 / (0.5 + 0.5 * std::ldexp(1.0, -20));
  CHECK(std::abs(posterior_universal(mixture(), 20) - expect) <= 1e-12);
  CHECK(posterior_universal(mixture(), 20) >= 0.999999);
  for (std::size_t n : {0u, 3u, 17u}) CHECK(posterior_universal(naive(), n) == 0.0);
  CHECK(posterior_universal(mixture(), 0) == universal_prob(mixture()));
  CHECK_THROWS_AS(posterior_universal(SequencePrior::parse("allfalse:1"), 1), UndefinedConditional);
  CHECK(posterior_universal(SequencePrior::parse("allfalse:1"), 0) == 0.0);
}

TEST_CASE("predictive probability") {
  for (std::size_t n = 0; n <= 30; ++n) CHECK(predictive(naive(), n) == 0.5);
  double expect = (0.5 + 0.5 * std::ldexp(1.0, -11)) / (0.5 + 0.5 * std::ldexp(1.0, -10));
  CHECK(std::abs(predictive(mixture(), 10) - expect) <= 1e-15);
  double prev = 0.0;
  for (std::size_t n = 0; n <= 40; ++n) {
    double v = predictive(mixture(), n);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(std::abs(prev - 1.0) <= 1e-9);
  CHECK_THROWS_AS(predictive(SequencePrior::parse("finite:1@2"), 1), UndefinedConditional);
}

TEST_CASE("monotonicity properties") {
  for (const char* spec : {"alltrue:0.5,iid:0.5@0.5", "alltrue:0.1,iid:0.6@0.9,allfalse:0.3", "iid:1@0.3",
                           "finite:0.5@1|2|3,alltrue:0.5"}) {
    SequencePrior p = SequencePrior::parse(spec);
    double prev = 1.0;
    for (std::size_t n = 0; n <= 50; ++n) {
      double v = prefix_prob(p, n);
      CHECK(v <= prev);
      CHECK(v >= universal_prob(p));
      prev = v;
    }
  }
  // Strictly increasing posterior and the closed-form threshold.
  for (double m : {0.1, 0.5, 0.9})
    for (double theta : {0.3, 0.5, 0.8}) {
      SequencePrior p({{SequenceComponent::Kind::AllTrue, m, 0.0, {}}, {SequenceComponent::Kind::Iid, 1 - m, theta, {}}});
      double prev = -1.0;
      for (std::size_t n = 0; n <= 40; ++n) {
        double v = posterior_universal(p, n);
        if (std::pow(theta, n) * (1 - m) / m > 1e-15) CHECK(v > prev);
        prev = v;
        for (double eps : {1e-2, 1e-4}) {
          if (std::pow(theta, n) * (1 - m) / m < eps) CHECK(v > 1.0 - eps);
        }
      }
    }
}

TEST_CASE("confirmation equivalence on canned priors") {
  CuhReport a = cuh_equivalence_check(mixture(), 40);
  CHECK(a.left_holds);
  CHECK(a.right_holds);
  CHECK(a.equivalent);
  CHECK(a.gaps_bounded);
  for (std::size_t n = 0; n <= 40; ++n) {
    CHECK(a.right_gap[n] <= std::ldexp(1.0, -static_cast<int>(n)) + 1e-16);
    CHECK(a.left_gap[n] <= std::ldexp(1.0, -static_cast<int>(n)) + 1e-16);
  }

  CuhReport b = cuh_equivalence_check(naive(), 40);
  CHECK_FALSE(b.left_holds);
  CHECK_FALSE(b.right_holds);
  CHECK(b.equivalent);
  for (double g : b.left_gap) CHECK(g == 1.0);

  CuhReport c = cuh_equivalence_check(certain(), 40);
  CHECK(c.left_holds);
  CHECK(c.right_holds);
  CHECK(c.equivalent);
  for (double g : c.left_gap) CHECK(g == 0.0);
  for (double g : c.right_gap) CHECK(g == 0.0);
}

TEST_CASE("agreement with the finite engine") {
  for (const char* spec : {"alltrue:0.5,iid:0.5@0.5", "iid:1@0.5", "alltrue:0.2,allfalse:0.1,iid:0.3@0.7,finite:0.4@1|3"}) {
    SequencePrior p = SequencePrior::parse(spec);
    for (std::size_t n = 1; n <= 12; ++n) {
      auto space = sequence_space(n);
      Belief b = to_belief(p, space);
      Program prog;
      prog.vocabulary = space->vocabulary();
      for (std::size_t m = 0; m <= n; ++m) {
        std::string conj = "true";
        for (std::size_t k = 1; k <= m; ++k) conj += " & B(" + std::to_string(k) + ")";
        Sentence prefix = prog.parse_formula(conj);
        CHECK(std::abs(prob(b, prefix) - prefix_prob(p, m)) <= 1e-12);
        if (m < n && prefix_prob(p, m) > 0.0) {
          Sentence next = prog.parse_formula("B(" + std::to_string(m + 1) + ")");
          CHECK(std::abs(cond(b, next, prefix) - predictive(p, m)) <= 1e-12);
        }
      }
      Sentence all = prog.parse_formula("forall i:Index. B(i)");
      CHECK(prob(b, all) >= universal_prob(p) - 1e-12);
    }
  }
  CHECK_THROWS_AS(sequence_space(0), InputError);
}

TEST_CASE("mixture parsing") {
  SequencePrior p = SequencePrior::parse("alltrue:1/4, iid:3/4@1/3");
  REQUIRE(p.components().size() == 2);
  CHECK(p.components()[0].mass == 0.25);
  CHECK(p.components()[1].theta == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  SequencePrior f = SequencePrior::parse("finite:1@3|1");
  CHECK(f.components()[0].indices == std::vector<std::size_t>{1, 3});

  for (const char* bad : {"", "alltrue", "alltrue:0.5", "alltrue:0.5,iid:0.5", "iid:1@2", "bogus:1",
                          "alltrue:1@0.5", "finite:1@0", "finite:1@x", "alltrue:0,iid:1@0.5", "alltrue:-1,iid:2@0.5"})
    CHECK_THROWS_AS(SequencePrior::parse(bad), InputError);
}

TEST_CASE("CSV table") {
  std::ostringstream out;
  write_csv(out, mixture(), 3);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,prefix_prob,posterior_universal,predictive");
  std::getline(in, line);
  CHECK(line == "0,1,0.5,0.75");
  std::getline(in, line);
  CHECK(line.rfind("1,0.75,", 0) == 0);

  std::ostringstream undefined;
  write_csv(undefined, SequencePrior::parse("finite:1@1"), 2);
  CHECK(undefined.str().find("2,0,,") != std::string::npos);

  std::ostringstream flat;
  write_csv(flat, naive(), 20);
  std::istringstream fin(flat.str());
  std::getline(fin, line);
  while (std::getline(fin, line)) CHECK(line.substr(line.rfind(',') + 1) == "0.5");
}
