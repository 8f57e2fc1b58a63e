#include "plog/belief.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "compensated_sum.hpp"
#include "plog/error.hpp"

namespace plog {

Belief::Belief(std::shared_ptr<const WorldSpace> space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw InputError("belief without a world space");
  if (weights_.size() != space_->world_count())
    throw InputError("belief has " + std::to_string(weights_.size()) + " weights for " +
                     std::to_string(space_->world_count()) + " worlds");
  detail::CompensatedSum total;
  for (double& w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("belief weights must be finite and non-negative");
    if (w == 0.0) w = 0.0;  // drops the sign of -0.0
    total += w;
  }
  if (std::abs(total.value() - 1.0) > normalization_tol)
    throw InputError("belief weights sum to " + std::to_string(total.value()) + ", not 1");
}

Belief Belief::uniform(std::shared_ptr<const WorldSpace> space) {
  if (!space) throw InputError("belief without a world space");
  std::size_t n = space->world_count();
  return Belief(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Belief Belief::point_mass(std::shared_ptr<const WorldSpace> space, std::size_t world) {
  if (!space) throw InputError("belief without a world space");
  if (world >= space->world_count()) throw InputError("world index out of range");
  std::vector<double> w(space->world_count(), 0.0);
  w[world] = 1.0;
  return Belief(std::move(space), std::move(w));
}

namespace {

double mass(const Belief& b, const ModelSet& m) {
  if (m.world_count() != b.weights().size()) throw VocabularyMismatch("model set over a different world space");
  detail::CompensatedSum sum;
  m.for_each([&](std::size_t w) { sum += b.weights()[w]; });
  return sum.value();
}

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

double prob(const Belief& b, const ModelSet& m) { return clamp01(mass(b, m)); }
double prob(const Belief& b, const GroundSentence& g) { return prob(b, models(g, b.space())); }
double prob(const Belief& b, const Sentence& s) { return prob(b, models(s, b.space())); }

double cond(const Belief& b, const ModelSet& phi, const ModelSet& psi) {
  double denom = mass(b, psi);
  if (denom <= 0.0) throw UndefinedConditional("conditioning on a sentence of probability zero");
  return clamp01(mass(b, phi & psi) / denom);
}

double cond(const Belief& b, const GroundSentence& phi, const GroundSentence& psi) {
  return cond(b, models(phi, b.space()), models(psi, b.space()));
}

double cond(const Belief& b, const Sentence& phi, const Sentence& psi) {
  return cond(b, models(phi, b.space()), models(psi, b.space()));
}

Belief condition(const Belief& b, const ModelSet& psi) {
  double denom = mass(b, psi);
  if (denom <= 0.0) throw UndefinedConditional("conditioning on a sentence of probability zero");
  std::vector<double> w(b.weights().size(), 0.0);
  psi.for_each([&](std::size_t i) { w[i] = b.weights()[i] / denom; });
  return Belief(b.space_ptr(), std::move(w));
}

Belief condition(const Belief& b, const GroundSentence& psi) { return condition(b, models(psi, b.space())); }
Belief condition(const Belief& b, const Sentence& psi) { return condition(b, models(psi, b.space())); }

double kl(const Belief& mu, const Belief& xi) {
  if (!(mu.space() == xi.space())) throw VocabularyMismatch("relative entropy between different world spaces");
  detail::CompensatedSum sum;
  for (std::size_t w = 0; w < mu.weights().size(); ++w) {
    double m = mu.weights()[w];
    if (m == 0.0) continue;
    double x = xi.weights()[w];
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    sum += m * std::log(m / x);
  }
  return std::max(0.0, sum.value());
}

bool is_strongly_cournot(const Belief& b) {
  for (double w : b.weights())
    if (!(w > 0.0)) return false;
  return true;
}

std::vector<double> block_masses(const Belief& b, const Partition& p) {
  if (p.world_count() != b.weights().size()) throw VocabularyMismatch("partition over a different world space");
  std::vector<detail::CompensatedSum> sums(std::size_t{1} << p.sentence_count());
  for (std::size_t w = 0; w < p.world_count(); ++w) sums[p.block_of(w)] += b.weights()[w];
  std::vector<double> out(sums.size());
  for (std::size_t s = 0; s < sums.size(); ++s) out[s] = sums[s].value();
  return out;
}

TreeCoefficients tree_coefficients(const Belief& b, const std::vector<GroundSentence>& sentences,
                                   std::size_t depth) {
  if (depth > sentences.size()) throw InputError("tree depth exceeds the number of sentences");
  std::vector<GroundSentence> prefix(sentences.begin(), sentences.begin() + static_cast<std::ptrdiff_t>(depth));
  Partition full(prefix, b.space());
  TreeCoefficients alpha;
  for (std::size_t n = 1; n <= depth; ++n) {
    std::vector<double> masses = block_masses(b, full.prefix(n));
    for (Subset s = 0; s < masses.size(); ++s) alpha.set(n, s, masses[s]);
  }
  return alpha;
}

void write_belief(std::ostream& out, const Belief& b) {
  out << "# belief over " << b.space().atom_count() << " atoms\natoms";
  for (const auto& name : b.space().atom_names()) out << ' ' << name;
  out << '\n';
  char buf[64];
  for (std::size_t w = 0; w < b.weights().size(); ++w) {
    double x = b.weights()[w];
    if (x == 0.0) continue;
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    out << w << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)) << '\n';
  }
}

Belief read_belief(std::istream& in, std::shared_ptr<const WorldSpace> space) {
  if (!space) throw InputError("belief without a world space");
  std::vector<double> weights(space->world_count(), 0.0);
  std::vector<bool> seen(space->world_count(), false);
  bool header = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "atoms") {
      if (header) throw InputError("belief file line " + std::to_string(lineno) + ": repeated atom header");
      std::vector<std::string> names;
      for (std::string n; fields >> n;) names.push_back(n);
      if (names != space->atom_names()) throw VocabularyMismatch("belief file atom order differs from the knowledge base");
      header = true;
      continue;
    }
    if (!header) throw InputError("belief file line " + std::to_string(lineno) + ": expected the atom header first");
    std::string second, extra;
    if (!(fields >> second) || (fields >> extra))
      throw InputError("belief file line " + std::to_string(lineno) + ": expected `world weight`");
    std::size_t world = 0;
    double value = 0.0;
    auto r1 = std::from_chars(first.data(), first.data() + first.size(), world);
    auto r2 = std::from_chars(second.data(), second.data() + second.size(), value);
    if (r1.ec != std::errc() || r1.ptr != first.data() + first.size() || r2.ec != std::errc() ||
        r2.ptr != second.data() + second.size())
      throw InputError("belief file line " + std::to_string(lineno) + ": malformed number");
    if (world >= weights.size()) throw InputError("belief file line " + std::to_string(lineno) + ": world out of range");
    if (seen[world]) throw InputError("belief file line " + std::to_string(lineno) + ": world listed twice");
    seen[world] = true;
    weights[world] = value;
  }
  if (!header) throw InputError("belief file has no atom header");
  return Belief(std::move(space), std::move(weights));
}

}  // namespace plog
