#include "plog/induct.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "compensated_sum.hpp"
#include "plog/error.hpp"
#include "plog/program.hpp"

namespace plog {

double SequenceComponent::prefix(std::size_t n) const {
  switch (kind) {
    case Kind::AllTrue:
      return 1.0;
    case Kind::AllFalse:
      return n == 0 ? 1.0 : 0.0;
    case Kind::FiniteSet:
      for (std::size_t k = 1; k <= n; ++k)
        if (!std::binary_search(indices.begin(), indices.end(), k)) return 0.0;
      return 1.0;
    case Kind::Iid:
      return std::pow(theta, static_cast<double>(n));
  }
  return 0.0;
}

double SequenceComponent::universal() const {
  return kind == Kind::AllTrue || (kind == Kind::Iid && theta == 1.0) ? 1.0 : 0.0;
}

SequencePrior::SequencePrior(std::vector<SequenceComponent> components) : components_(std::move(components)) {
  if (components_.empty()) throw InputError("a sequence prior needs at least one component");
  detail::CompensatedSum total;
  for (auto& c : components_) {
    if (!(c.mass > 0.0) || !std::isfinite(c.mass)) throw InputError("mixture masses must be positive");
    if (c.kind == SequenceComponent::Kind::Iid && !(c.theta >= 0.0 && c.theta <= 1.0))
      throw InputError("iid parameter must lie in [0,1]");
    if (c.kind == SequenceComponent::Kind::FiniteSet) {
      std::sort(c.indices.begin(), c.indices.end());
      c.indices.erase(std::unique(c.indices.begin(), c.indices.end()), c.indices.end());
      if (!c.indices.empty() && c.indices.front() == 0) throw InputError("sequence indices start at 1");
    }
    total += c.mass;
  }
  if (std::abs(total.value() - 1.0) > 1e-12)
    throw InputError("mixture masses sum to " + std::to_string(total.value()) + ", not 1");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

SequencePrior SequencePrior::parse(std::string_view spec) {
  std::vector<SequenceComponent> comps;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view item = trim(spec.substr(pos, comma - pos));
    pos = comma + 1;
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos) throw InputError("mixture item '" + std::string(item) + "' lacks ':mass'");
    std::string_view kind = trim(item.substr(0, colon));
    std::string_view rest = item.substr(colon + 1);
    std::string_view param;
    std::size_t at = rest.find('@');
    if (at != std::string_view::npos) {
      param = trim(rest.substr(at + 1));
      rest = rest.substr(0, at);
    }
    SequenceComponent c;
    c.mass = parse_probability(trim(rest));
    if (kind == "alltrue" || kind == "allfalse") {
      if (at != std::string_view::npos) throw InputError("'" + std::string(kind) + "' takes no parameter");
      c.kind = kind == "alltrue" ? SequenceComponent::Kind::AllTrue : SequenceComponent::Kind::AllFalse;
    } else if (kind == "iid") {
      if (param.empty()) throw InputError("'iid' needs a parameter: iid:mass@theta");
      c.kind = SequenceComponent::Kind::Iid;
      c.theta = parse_probability(param);
    } else if (kind == "finite") {
      c.kind = SequenceComponent::Kind::FiniteSet;
      std::size_t p = 0;
      while (!param.empty() && p <= param.size()) {
        std::size_t bar = param.find('|', p);
        if (bar == std::string_view::npos) bar = param.size();
        std::string_view tok = trim(param.substr(p, bar - p));
        std::size_t k = 0;
        auto r = std::from_chars(tok.data(), tok.data() + tok.size(), k);
        if (tok.empty() || r.ec != std::errc() || r.ptr != tok.data() + tok.size())
          throw InputError("bad index '" + std::string(tok) + "' in finite set");
        c.indices.push_back(k);
        p = bar + 1;
      }
    } else {
      throw InputError("unknown mixture component '" + std::string(kind) + "'");
    }
    comps.push_back(std::move(c));
    if (comma == spec.size()) break;
  }
  return SequencePrior(std::move(comps));
}

double prefix_prob(const SequencePrior& p, std::size_t n) {
  detail::CompensatedSum sum;
  for (const auto& c : p.components()) sum += c.mass * c.prefix(n);
  return std::clamp(sum.value(), 0.0, 1.0);
}

double universal_prob(const SequencePrior& p) {
  detail::CompensatedSum sum;
  for (const auto& c : p.components()) sum += c.mass * c.universal();
  return std::clamp(sum.value(), 0.0, 1.0);
}

double posterior_universal(const SequencePrior& p, std::size_t n) {
  double denom = prefix_prob(p, n);
  if (denom <= 0.0) throw UndefinedConditional("prefix B(1..n) has probability zero");
  return std::min(1.0, universal_prob(p) / denom);
}

double predictive(const SequencePrior& p, std::size_t n) {
  double denom = prefix_prob(p, n);
  if (denom <= 0.0) throw UndefinedConditional("prefix B(1..n) has probability zero");
  return std::min(1.0, prefix_prob(p, n + 1) / denom);
}

CuhReport cuh_equivalence_check(const SequencePrior& p, std::size_t n_max, double tol) {
  CuhReport r;
  r.universal = universal_prob(p);
  r.gaps_bounded = true;
  for (std::size_t n = 0; n <= n_max; ++n) {
    double pre = prefix_prob(p, n);
    r.left_gap.push_back(pre > 0.0 ? 1.0 - posterior_universal(p, n) : 1.0);
    r.right_gap.push_back(pre - r.universal);
    detail::CompensatedSum tail;
    for (const auto& c : p.components()) tail += c.mass * (c.prefix(n) - c.universal());
    double bound = tail.value() + 4e-16;  // rounding of the two sums
    r.tail_bound.push_back(bound);
    if (r.right_gap.back() > bound) r.gaps_bounded = false;
    if (r.universal > 0.0 && r.left_gap.back() > bound / r.universal) r.gaps_bounded = false;
  }
  r.left_holds = r.left_gap.back() <= tol;
  r.right_holds = r.universal > 0.0 && r.right_gap.back() <= tol * r.universal;
  r.equivalent = r.left_holds == r.right_holds;
  return r;
}

std::shared_ptr<const WorldSpace> sequence_space(std::size_t n) {
  if (n == 0) throw InputError("a sequence space needs at least one index");
  Vocabulary v;
  std::vector<std::string> idx;
  for (std::size_t k = 1; k <= n; ++k) idx.push_back(std::to_string(k));
  v.add_domain("Index", idx);
  v.add_predicate("B", {"Index"});
  return std::make_shared<const WorldSpace>(std::move(v));
}

Belief to_belief(const SequencePrior& p, std::shared_ptr<const WorldSpace> space) {
  const std::size_t n = space->atom_count();
  std::vector<detail::CompensatedSum> w(space->world_count());
  for (const auto& c : p.components()) {
    switch (c.kind) {
      case SequenceComponent::Kind::AllTrue:
        w[space->world_count() - 1] += c.mass;
        break;
      case SequenceComponent::Kind::AllFalse:
        w[0] += c.mass;
        break;
      case SequenceComponent::Kind::FiniteSet: {
        std::size_t world = 0;
        for (std::size_t k : c.indices)
          if (k <= n) world |= std::size_t{1} << (k - 1);
        w[world] += c.mass;
        break;
      }
      case SequenceComponent::Kind::Iid:
        for (std::size_t world = 0; world < w.size(); ++world) {
          auto ones = static_cast<double>(__builtin_popcountll(world));
          w[world] += c.mass * std::pow(c.theta, ones) * std::pow(1.0 - c.theta, static_cast<double>(n) - ones);
        }
        break;
    }
  }
  std::vector<double> weights(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) weights[i] = w[i].value();
  return Belief(std::move(space), std::move(weights));
}

void write_csv(std::ostream& out, const SequencePrior& p, std::size_t n_max) {
  char buf[64];
  auto num = [&](double x) {
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
  };
  out << "n,prefix_prob,posterior_universal,predictive\n";
  for (std::size_t n = 0; n <= n_max; ++n) {
    double pre = prefix_prob(p, n);
    out << n << ',' << num(pre) << ',';
    if (pre > 0.0) out << num(posterior_universal(p, n)) << ',' << num(predictive(p, n));
    else out << ',';
    out << '\n';
  }
}

}  // namespace plog
