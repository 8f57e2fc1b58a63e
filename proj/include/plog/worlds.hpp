#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plog/logic.hpp"

namespace plog {

// All 2^k truth assignments over the k ground atoms of a vocabulary. World
// index w assigns atom i the value of bit i of w.
class WorldSpace {
 public:
  static constexpr std::size_t default_cap = 20;
  static constexpr std::size_t hard_cap = 24;

  explicit WorldSpace(Vocabulary vocabulary, std::size_t cap = default_cap);

  const Vocabulary& vocabulary() const noexcept { return vocabulary_; }
  std::size_t atom_count() const noexcept { return vocabulary_.atom_count(); }
  std::size_t world_count() const noexcept { return std::size_t{1} << atom_count(); }
  const std::vector<std::string>& atom_names() const noexcept { return atom_names_; }

  bool operator==(const WorldSpace& other) const { return atom_names_ == other.atom_names_; }

 private:
  Vocabulary vocabulary_;
  std::vector<std::string> atom_names_;
};

// Bitset over world indices.
class ModelSet {
 public:
  ModelSet() = default;
  explicit ModelSet(std::size_t world_count, bool filled = false);
  // Worlds in which the given atom is true.
  static ModelSet of_atom(std::size_t atom, std::size_t world_count);

  std::size_t world_count() const noexcept { return size_; }
  bool test(std::size_t w) const { return (words_[w >> 6] >> (w & 63)) & 1U; }
  void set(std::size_t w) { words_[w >> 6] |= std::uint64_t{1} << (w & 63); }
  void reset(std::size_t w) { words_[w >> 6] &= ~(std::uint64_t{1} << (w & 63)); }
  std::size_t count() const;
  bool empty() const;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  // Calls f(w) for every member, in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t bits = words_[i];
      while (bits) {
        f(i * 64 + static_cast<std::size_t>(__builtin_ctzll(bits)));
        bits &= bits - 1;
      }
    }
  }
  std::vector<std::size_t> members() const;

  ModelSet& operator&=(const ModelSet& o);
  ModelSet& operator|=(const ModelSet& o);
  ModelSet operator~() const;
  friend ModelSet operator&(ModelSet a, const ModelSet& b) { return a &= b; }
  friend ModelSet operator|(ModelSet a, const ModelSet& b) { return a |= b; }
  bool operator==(const ModelSet&) const = default;

 private:
  void trim();

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

ModelSet models(const GroundSentence& g, const WorldSpace& space);
ModelSet models(const Sentence& s, const WorldSpace& space);

// Subsets S of {1..n} are bitmasks: bit i-1 set iff i is in S.
using Subset = std::uint32_t;
std::string format_subset(Subset s);

// psi_S = (and of phi_i, i in S) & (and of ~phi_j, j not in S).
GroundSentence block_sentence(const std::vector<GroundSentence>& sentences, Subset s);

// The psi_S blocks of sentences phi_1..phi_n over an explicit world space.
class Partition {
 public:
  static constexpr std::size_t max_sentences = 20;

  Partition(const std::vector<GroundSentence>& sentences, const WorldSpace& space);

  std::size_t sentence_count() const noexcept { return n_; }
  std::size_t world_count() const noexcept { return signature_.size(); }
  // The unique S whose block contains world w.
  Subset block_of(std::size_t w) const { return signature_[w]; }
  const std::vector<Subset>& signatures() const noexcept { return signature_; }
  // Non-empty blocks, ascending.
  const std::vector<Subset>& satisfiable() const noexcept { return satisfiable_; }
  bool is_satisfiable(Subset s) const;
  ModelSet block(Subset s) const;
  // Same partition restricted to phi_1..phi_m.
  Partition prefix(std::size_t m) const;

 private:
  Partition() = default;

  std::size_t n_ = 0;
  std::vector<Subset> signature_;
  std::vector<Subset> satisfiable_;
};

inline Partition partition(const std::vector<GroundSentence>& sentences, const WorldSpace& space) {
  return Partition(sentences, space);
}

// alpha_{n,S} for levels n = 1..N of a psi_S tree.
class TreeCoefficients {
 public:
  void set(std::size_t level, Subset s, double value);
  std::optional<double> get(std::size_t level, Subset s) const;
  std::size_t depth() const noexcept { return depth_; }

 private:
  std::map<std::pair<std::size_t, Subset>, double> values_;
  std::size_t depth_ = 0;
};

enum class TreeRule { NonNegative, ZeroOnUnsatisfiable, Splitting, LevelSum };
const char* tag(TreeRule rule);

struct TreeViolation {
  TreeRule rule;
  std::size_t level;
  Subset subset;  // unused for LevelSum
  double value;   // offending coefficient, residual or sum
};

// Checks non-negativity, zero on unsatisfiable blocks, the splitting identity
// alpha_{n,S} = alpha_{n+1,S} + alpha_{n+1,S+{n+1}}, and unit level sums, all
// at tolerance `tol`. Throws InputError on a missing coefficient.
std::vector<TreeViolation> check_tree_coefficients(const TreeCoefficients& alpha,
                                                   const std::vector<GroundSentence>& sentences,
                                                   const WorldSpace& space, double tol = 1e-12);

}  // namespace plog
