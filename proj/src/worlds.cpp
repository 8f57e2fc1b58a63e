#include "plog/worlds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "compensated_sum.hpp"
#include "plog/error.hpp"

namespace plog {

WorldSpace::WorldSpace(Vocabulary vocabulary, std::size_t cap) : vocabulary_(std::move(vocabulary)) {
  if (cap > hard_cap) throw ResourceError("world cap " + std::to_string(cap) + " exceeds the hard maximum of 24 atoms");
  if (vocabulary_.atom_count() > cap)
    throw ResourceError("vocabulary has " + std::to_string(vocabulary_.atom_count()) +
                        " ground atoms; the world cap is " + std::to_string(cap));
  atom_names_ = vocabulary_.atom_names();
}

ModelSet::ModelSet(std::size_t world_count, bool filled)
    : size_(world_count), words_((world_count + 63) / 64, filled ? ~std::uint64_t{0} : 0) {
  trim();
}

void ModelSet::trim() {
  if (size_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
}

ModelSet ModelSet::of_atom(std::size_t atom, std::size_t world_count) {
  ModelSet out(world_count);
  if (atom < 6) {
    std::uint64_t pattern = 0;
    for (unsigned b = 0; b < 64; ++b)
      if ((b >> atom) & 1U) pattern |= std::uint64_t{1} << b;
    std::fill(out.words_.begin(), out.words_.end(), pattern);
  } else {
    for (std::size_t i = 0; i < out.words_.size(); ++i)
      if ((i >> (atom - 6)) & 1U) out.words_[i] = ~std::uint64_t{0};
  }
  out.trim();
  return out;
}

std::size_t ModelSet::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool ModelSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::vector<std::size_t> ModelSet::members() const {
  std::vector<std::size_t> out;
  for_each([&](std::size_t w) { out.push_back(w); });
  return out;
}

ModelSet& ModelSet::operator&=(const ModelSet& o) {
  if (o.size_ != size_) throw VocabularyMismatch("model sets over different world spaces");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

ModelSet& ModelSet::operator|=(const ModelSet& o) {
  if (o.size_ != size_) throw VocabularyMismatch("model sets over different world spaces");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

ModelSet ModelSet::operator~() const {
  ModelSet out = *this;
  for (auto& w : out.words_) w = ~w;
  out.trim();
  return out;
}

namespace {

ModelSet models_rec(const GroundSentence& g, std::size_t worlds) {
  switch (g.op()) {
    case GroundOp::True:
      return ModelSet(worlds, true);
    case GroundOp::False:
      return ModelSet(worlds);
    case GroundOp::Atom:
      return ModelSet::of_atom(g.atom_index(), worlds);
    case GroundOp::Not:
      return ~models_rec(g.children()[0], worlds);
    case GroundOp::And: {
      ModelSet acc = models_rec(g.children()[0], worlds);
      for (std::size_t i = 1; i < g.children().size(); ++i) acc &= models_rec(g.children()[i], worlds);
      return acc;
    }
    case GroundOp::Or: {
      ModelSet acc = models_rec(g.children()[0], worlds);
      for (std::size_t i = 1; i < g.children().size(); ++i) acc |= models_rec(g.children()[i], worlds);
      return acc;
    }
    case GroundOp::Implies:
      return ~models_rec(g.children()[0], worlds) | models_rec(g.children()[1], worlds);
    case GroundOp::Iff: {
      ModelSet a = models_rec(g.children()[0], worlds);
      ModelSet b = models_rec(g.children()[1], worlds);
      return (a & b) | (~a & ~b);
    }
  }
  throw Error("unknown ground node");
}

}  // namespace

ModelSet models(const GroundSentence& g, const WorldSpace& space) {
  if (g.atom_bound() > space.atom_count()) throw VocabularyMismatch("sentence mentions atoms outside the world space");
  return models_rec(g, space.world_count());
}

ModelSet models(const Sentence& s, const WorldSpace& space) { return models(ground(s, space.vocabulary()), space); }

std::string format_subset(Subset s) {
  std::string out = "{";
  bool first = true;
  for (unsigned i = 0; i < 32; ++i)
    if ((s >> i) & 1U) {
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
  return out + "}";
}

GroundSentence block_sentence(const std::vector<GroundSentence>& sentences, Subset s) {
  std::vector<GroundSentence> parts;
  parts.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i)
    parts.push_back((s >> i) & 1U ? sentences[i] : GroundSentence::negation(sentences[i]));
  return GroundSentence::conjunction(std::move(parts));
}

Partition::Partition(const std::vector<GroundSentence>& sentences, const WorldSpace& space) : n_(sentences.size()) {
  if (n_ > max_sentences)
    throw ResourceError("partition over " + std::to_string(n_) + " sentences; the limit is " +
                        std::to_string(max_sentences));
  signature_.assign(space.world_count(), 0);
  for (std::size_t i = 0; i < n_; ++i) {
    ModelSet m = models(sentences[i], space);
    m.for_each([&](std::size_t w) { signature_[w] |= Subset{1} << i; });
  }
  satisfiable_ = signature_;
  std::sort(satisfiable_.begin(), satisfiable_.end());
  satisfiable_.erase(std::unique(satisfiable_.begin(), satisfiable_.end()), satisfiable_.end());
}

bool Partition::is_satisfiable(Subset s) const {
  return std::binary_search(satisfiable_.begin(), satisfiable_.end(), s);
}

ModelSet Partition::block(Subset s) const {
  ModelSet out(signature_.size());
  for (std::size_t w = 0; w < signature_.size(); ++w)
    if (signature_[w] == s) out.set(w);
  return out;
}

Partition Partition::prefix(std::size_t m) const {
  if (m > n_) throw InputError("prefix longer than the partition");
  Partition p;
  p.n_ = m;
  Subset mask = m == 32 ? ~Subset{0} : (Subset{1} << m) - 1;
  p.signature_.resize(signature_.size());
  for (std::size_t w = 0; w < signature_.size(); ++w) p.signature_[w] = signature_[w] & mask;
  p.satisfiable_ = p.signature_;
  std::sort(p.satisfiable_.begin(), p.satisfiable_.end());
  p.satisfiable_.erase(std::unique(p.satisfiable_.begin(), p.satisfiable_.end()), p.satisfiable_.end());
  return p;
}

void TreeCoefficients::set(std::size_t level, Subset s, double value) {
  if (level == 0 || level > Partition::max_sentences) throw InputError("tree level out of range");
  if (level < 32 && (s >> level) != 0) throw InputError("subset " + format_subset(s) + " exceeds its level");
  values_[{level, s}] = value;
  depth_ = std::max(depth_, level);
}

std::optional<double> TreeCoefficients::get(std::size_t level, Subset s) const {
  auto it = values_.find({level, s});
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

const char* tag(TreeRule rule) {
  switch (rule) {
    case TreeRule::NonNegative:
      return "NONNEG";
    case TreeRule::ZeroOnUnsatisfiable:
      return "UNSAT-ZERO";
    case TreeRule::Splitting:
      return "SPLIT";
    case TreeRule::LevelSum:
      return "SUM";
  }
  return "?";
}

std::vector<TreeViolation> check_tree_coefficients(const TreeCoefficients& alpha,
                                                   const std::vector<GroundSentence>& sentences,
                                                   const WorldSpace& space, double tol) {
  const std::size_t depth = alpha.depth();
  if (depth > sentences.size()) throw InputError("coefficients go deeper than the sentence list");
  auto value = [&](std::size_t n, Subset s) {
    auto v = alpha.get(n, s);
    if (!v) throw InputError("missing coefficient alpha_{" + std::to_string(n) + "," + format_subset(s) + "}");
    return *v;
  };
  std::vector<GroundSentence> prefix(sentences.begin(), sentences.begin() + static_cast<std::ptrdiff_t>(depth));
  Partition full(prefix, space);
  std::vector<TreeViolation> out;
  for (std::size_t n = 1; n <= depth; ++n) {
    Partition level = full.prefix(n);
    detail::CompensatedSum sum;
    for (Subset s = 0; s < (Subset{1} << n); ++s) {
      double a = value(n, s);
      if (a < -tol) out.push_back({TreeRule::NonNegative, n, s, a});
      if (!level.is_satisfiable(s) && std::abs(a) > tol) out.push_back({TreeRule::ZeroOnUnsatisfiable, n, s, a});
      sum += a;
      if (n < depth) {
        double split = value(n, s) - value(n + 1, s) - value(n + 1, s | (Subset{1} << n));
        if (std::abs(split) > tol) out.push_back({TreeRule::Splitting, n, s, split});
      }
    }
    if (std::abs(sum.value() - 1.0) > tol) out.push_back({TreeRule::LevelSum, n, 0, sum.value()});
  }
  return out;
}

}  // namespace plog
