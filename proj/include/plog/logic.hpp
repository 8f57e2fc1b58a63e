#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace plog {

struct Domain {
  std::string name;
  std::vector<std::string> constants;

  std::optional<std::size_t> index_of(std::string_view constant) const;
};

// A predicate symbol; a proposition is a predicate with no arguments.
struct Symbol {
  std::string name;
  std::vector<std::size_t> arg_domains;

  bool is_proposition() const noexcept { return arg_domains.empty(); }
};

// Declared domains and symbols. Fixes the ground-atom order: symbols in
// declaration order, each symbol's argument tuples in lexicographic order of
// the domains' constant order (last argument varies fastest).
class Vocabulary {
 public:
  std::size_t add_domain(std::string name, std::vector<std::string> constants);
  std::size_t add_predicate(std::string name, const std::vector<std::string>& arg_domains);
  std::size_t add_proposition(std::string name);

  const std::vector<Domain>& domains() const noexcept { return domains_; }
  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
  const Domain& domain(std::size_t i) const { return domains_.at(i); }
  const Symbol& symbol(std::size_t i) const { return symbols_.at(i); }

  std::optional<std::size_t> find_domain(std::string_view name) const;
  std::optional<std::size_t> find_symbol(std::string_view name) const;

  std::size_t atom_count() const noexcept { return atom_count_; }
  // Index of symbol applied to the given constant indices (one per argument).
  std::size_t atom_index(std::size_t symbol, const std::vector<std::size_t>& args) const;
  // Inverse of atom_index: (symbol, constant indices).
  std::pair<std::size_t, std::vector<std::size_t>> atom_at(std::size_t atom) const;
  std::string atom_name(std::size_t atom) const;
  std::vector<std::string> atom_names() const;

  bool operator==(const Vocabulary& other) const;

 private:
  void check_fresh(const std::string& name) const;

  std::vector<Domain> domains_;
  std::vector<Symbol> symbols_;
  std::vector<std::size_t> offsets_;  // first atom index of each symbol
  std::size_t atom_count_ = 0;
};

struct Term {
  bool is_variable = false;
  std::string name;
  std::size_t domain = 0;

  bool operator==(const Term&) const = default;
};

enum class Op : std::uint8_t { True, False, Atom, Not, And, Or, Implies, Iff, Equals, Forall, Exists };

// Immutable formula tree over a Vocabulary. And/Or are n-ary; everything
// else has fixed arity. Copies share structure.
class Sentence {
 public:
  static Sentence truth();
  static Sentence falsity();
  static Sentence atom(std::size_t symbol, std::vector<Term> args = {});
  static Sentence negation(Sentence s);
  static Sentence conjunction(std::vector<Sentence> parts);
  static Sentence disjunction(std::vector<Sentence> parts);
  static Sentence implication(Sentence lhs, Sentence rhs);
  static Sentence biconditional(Sentence lhs, Sentence rhs);
  static Sentence equality(Term lhs, Term rhs);
  static Sentence forall(std::string var, std::size_t domain, Sentence body);
  static Sentence exists(std::string var, std::size_t domain, Sentence body);

  Op op() const noexcept { return node_->op; }
  std::size_t symbol() const noexcept { return node_->index; }
  std::size_t domain() const noexcept { return node_->index; }
  const std::string& variable() const noexcept { return node_->variable; }
  const std::vector<Term>& terms() const noexcept { return node_->terms; }
  const std::vector<Sentence>& children() const noexcept { return node_->children; }

  bool operator==(const Sentence& other) const;

 private:
  struct Node {
    Op op;
    std::size_t index = 0;  // symbol for Atom, domain for quantifiers
    std::string variable;
    std::vector<Term> terms;
    std::vector<Sentence> children;
  };
  explicit Sentence(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Sentence make(Node n);

  std::shared_ptr<const Node> node_;
};

// Throws InputError unless every variable is bound by an enclosing quantifier,
// every index refers into `v`, and equalities compare terms of one domain.
void check_closed(const Sentence& s, const Vocabulary& v);

// Fully parenthesized rendering in the knowledge-base formula syntax.
std::string to_string(const Sentence& s, const Vocabulary& v);

enum class GroundOp : std::uint8_t { True, False, Atom, Not, And, Or, Implies, Iff };

// Quantifier-free formula over ground-atom indices. The constructors fold
// True/False operands, so constants only ever appear as the whole formula.
class GroundSentence {
 public:
  static GroundSentence truth();
  static GroundSentence falsity();
  static GroundSentence atom(std::size_t index);
  static GroundSentence negation(GroundSentence g);
  static GroundSentence conjunction(std::vector<GroundSentence> parts);
  static GroundSentence disjunction(std::vector<GroundSentence> parts);
  static GroundSentence implication(GroundSentence lhs, GroundSentence rhs);
  static GroundSentence biconditional(GroundSentence lhs, GroundSentence rhs);

  GroundOp op() const noexcept { return node_->op; }
  std::size_t atom_index() const noexcept { return node_->atom; }
  const std::vector<GroundSentence>& children() const noexcept { return node_->children; }

  bool is_constant() const noexcept { return op() == GroundOp::True || op() == GroundOp::False; }
  // One past the largest atom index used (0 if none).
  std::size_t atom_bound() const;
  // Truth value in the world whose atom values are the bits of `world`.
  bool evaluate(std::uint64_t world) const;

  bool operator==(const GroundSentence& other) const;

 private:
  struct Node {
    GroundOp op;
    std::size_t atom = 0;
    std::vector<GroundSentence> children;
  };
  explicit GroundSentence(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static GroundSentence make(Node n);

  std::shared_ptr<const Node> node_;
};

// Quantifier elimination over the finite domains: forall becomes the
// conjunction over all domain constants, exists the disjunction, and
// equalities between constants fold to True/False.
GroundSentence ground(const Sentence& s, const Vocabulary& v);
inline GroundSentence ground(const GroundSentence& g) { return g; }

// Re-express a ground formula as a Sentence over `v` (inverse of ground on
// quantifier-free, equality-free input).
Sentence to_sentence(const GroundSentence& g, const Vocabulary& v);

std::string to_string(const GroundSentence& g, const Vocabulary& v);

}  // namespace plog
