#include "plog/logic.hpp"

#include <algorithm>
#include <utility>

#include "plog/error.hpp"

namespace plog {

std::optional<std::size_t> Domain::index_of(std::string_view constant) const {
  auto it = std::find(constants.begin(), constants.end(), constant);
  if (it == constants.end()) return std::nullopt;
  return static_cast<std::size_t>(it - constants.begin());
}

void Vocabulary::check_fresh(const std::string& name) const {
  if (find_domain(name) || find_symbol(name)) throw InputError("duplicate declaration of '" + name + "'");
}

std::size_t Vocabulary::add_domain(std::string name, std::vector<std::string> constants) {
  check_fresh(name);
  if (constants.empty()) throw InputError("domain '" + name + "' is empty");
  for (std::size_t i = 0; i < constants.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (constants[i] == constants[j])
        throw InputError("domain '" + name + "' repeats constant '" + constants[i] + "'");
  domains_.push_back({std::move(name), std::move(constants)});
  return domains_.size() - 1;
}

std::size_t Vocabulary::add_predicate(std::string name, const std::vector<std::string>& arg_domains) {
  check_fresh(name);
  Symbol sym{std::move(name), {}};
  std::size_t tuples = 1;
  for (const auto& d : arg_domains) {
    auto idx = find_domain(d);
    if (!idx) throw InputError("undeclared domain '" + d + "'");
    sym.arg_domains.push_back(*idx);
    tuples *= domains_[*idx].constants.size();
  }
  offsets_.push_back(atom_count_);
  atom_count_ += tuples;
  symbols_.push_back(std::move(sym));
  return symbols_.size() - 1;
}

std::size_t Vocabulary::add_proposition(std::string name) { return add_predicate(std::move(name), {}); }

std::optional<std::size_t> Vocabulary::find_domain(std::string_view name) const {
  for (std::size_t i = 0; i < domains_.size(); ++i)
    if (domains_[i].name == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> Vocabulary::find_symbol(std::string_view name) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Vocabulary::atom_index(std::size_t symbol, const std::vector<std::size_t>& args) const {
  const Symbol& sym = symbols_.at(symbol);
  if (args.size() != sym.arg_domains.size())
    throw InputError("'" + sym.name + "' expects " + std::to_string(sym.arg_domains.size()) + " arguments");
  std::size_t offset = 0;
  for (std::size_t k = 0; k < args.size(); ++k) {
    std::size_t radix = domains_[sym.arg_domains[k]].constants.size();
    if (args[k] >= radix) throw InputError("constant index out of range for '" + sym.name + "'");
    offset = offset * radix + args[k];
  }
  return offsets_[symbol] + offset;
}

std::pair<std::size_t, std::vector<std::size_t>> Vocabulary::atom_at(std::size_t atom) const {
  if (atom >= atom_count_) throw InputError("atom index out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), atom);
  std::size_t symbol = static_cast<std::size_t>(it - offsets_.begin()) - 1;
  const Symbol& sym = symbols_[symbol];
  std::size_t rest = atom - offsets_[symbol];
  std::vector<std::size_t> args(sym.arg_domains.size());
  for (std::size_t k = args.size(); k-- > 0;) {
    std::size_t radix = domains_[sym.arg_domains[k]].constants.size();
    args[k] = rest % radix;
    rest /= radix;
  }
  return {symbol, std::move(args)};
}

std::string Vocabulary::atom_name(std::size_t atom) const {
  auto [symbol, args] = atom_at(atom);
  const Symbol& sym = symbols_[symbol];
  std::string out = sym.name;
  if (!args.empty()) {
    out += '(';
    for (std::size_t k = 0; k < args.size(); ++k) {
      if (k) out += ',';
      out += domains_[sym.arg_domains[k]].constants[args[k]];
    }
    out += ')';
  }
  return out;
}

std::vector<std::string> Vocabulary::atom_names() const {
  std::vector<std::string> names;
  names.reserve(atom_count_);
  for (std::size_t i = 0; i < atom_count_; ++i) names.push_back(atom_name(i));
  return names;
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  if (domains_.size() != other.domains_.size() || symbols_.size() != other.symbols_.size()) return false;
  for (std::size_t i = 0; i < domains_.size(); ++i)
    if (domains_[i].name != other.domains_[i].name || domains_[i].constants != other.domains_[i].constants)
      return false;
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i].name != other.symbols_[i].name || symbols_[i].arg_domains != other.symbols_[i].arg_domains)
      return false;
  return true;
}

// ---------------------------------------------------------------------------

Sentence Sentence::make(Node n) { return Sentence(std::make_shared<const Node>(std::move(n))); }

Sentence Sentence::truth() {
  static const Sentence t = make({Op::True, 0, {}, {}, {}});
  return t;
}

Sentence Sentence::falsity() {
  static const Sentence f = make({Op::False, 0, {}, {}, {}});
  return f;
}

Sentence Sentence::atom(std::size_t symbol, std::vector<Term> args) {
  return make({Op::Atom, symbol, {}, std::move(args), {}});
}

Sentence Sentence::negation(Sentence s) { return make({Op::Not, 0, {}, {}, {std::move(s)}}); }

Sentence Sentence::conjunction(std::vector<Sentence> parts) {
  if (parts.empty()) return truth();
  if (parts.size() == 1) return parts.front();
  return make({Op::And, 0, {}, {}, std::move(parts)});
}

Sentence Sentence::disjunction(std::vector<Sentence> parts) {
  if (parts.empty()) return falsity();
  if (parts.size() == 1) return parts.front();
  return make({Op::Or, 0, {}, {}, std::move(parts)});
}

Sentence Sentence::implication(Sentence lhs, Sentence rhs) {
  return make({Op::Implies, 0, {}, {}, {std::move(lhs), std::move(rhs)}});
}

Sentence Sentence::biconditional(Sentence lhs, Sentence rhs) {
  return make({Op::Iff, 0, {}, {}, {std::move(lhs), std::move(rhs)}});
}

Sentence Sentence::equality(Term lhs, Term rhs) {
  return make({Op::Equals, 0, {}, {std::move(lhs), std::move(rhs)}, {}});
}

Sentence Sentence::forall(std::string var, std::size_t domain, Sentence body) {
  return make({Op::Forall, domain, std::move(var), {}, {std::move(body)}});
}

Sentence Sentence::exists(std::string var, std::size_t domain, Sentence body) {
  return make({Op::Exists, domain, std::move(var), {}, {std::move(body)}});
}

bool Sentence::operator==(const Sentence& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.op == b.op && a.index == b.index && a.variable == b.variable && a.terms == b.terms &&
         a.children == b.children;
}

namespace {

struct Scope {
  std::vector<std::pair<std::string, std::size_t>> bound;  // variable -> domain

  const std::size_t* find(const std::string& name) const {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }
};

void check_term(const Term& t, std::size_t expected_domain, const Scope& scope, const Vocabulary& v) {
  if (t.domain >= v.domains().size()) throw InputError("term '" + t.name + "' has an unknown domain");
  if (t.domain != expected_domain)
    throw InputError("term '" + t.name + "' is in domain '" + v.domain(t.domain).name + "', expected '" +
                     v.domain(expected_domain).name + "'");
  if (t.is_variable) {
    const std::size_t* d = scope.find(t.name);
    if (!d) throw InputError("free variable '" + t.name + "'");
    if (*d != t.domain) throw InputError("variable '" + t.name + "' used at the wrong domain");
  } else if (!v.domain(t.domain).index_of(t.name)) {
    throw InputError("'" + t.name + "' is not a constant of domain '" + v.domain(t.domain).name + "'");
  }
}

void check_closed(const Sentence& s, const Vocabulary& v, Scope& scope) {
  switch (s.op()) {
    case Op::True:
    case Op::False:
      return;
    case Op::Atom: {
      if (s.symbol() >= v.symbols().size()) throw InputError("unknown symbol index");
      const Symbol& sym = v.symbol(s.symbol());
      if (s.terms().size() != sym.arg_domains.size())
        throw InputError("'" + sym.name + "' expects " + std::to_string(sym.arg_domains.size()) + " arguments");
      for (std::size_t k = 0; k < s.terms().size(); ++k) check_term(s.terms()[k], sym.arg_domains[k], scope, v);
      return;
    }
    case Op::Equals:
      check_term(s.terms()[0], s.terms()[0].domain, scope, v);
      check_term(s.terms()[1], s.terms()[0].domain, scope, v);
      return;
    case Op::Forall:
    case Op::Exists:
      if (s.domain() >= v.domains().size()) throw InputError("quantifier over unknown domain");
      scope.bound.emplace_back(s.variable(), s.domain());
      check_closed(s.children()[0], v, scope);
      scope.bound.pop_back();
      return;
    default:
      for (const auto& c : s.children()) check_closed(c, v, scope);
  }
}

void render_term(const Term& t, std::string& out) { out += t.name; }

void render(const Sentence& s, const Vocabulary& v, std::string& out) {
  auto nary = [&](const char* sep) {
    out += '(';
    for (std::size_t i = 0; i < s.children().size(); ++i) {
      if (i) out += sep;
      render(s.children()[i], v, out);
    }
    out += ')';
  };
  switch (s.op()) {
    case Op::True:
      out += "true";
      return;
    case Op::False:
      out += "false";
      return;
    case Op::Atom:
      out += v.symbol(s.symbol()).name;
      if (!s.terms().empty()) {
        out += '(';
        for (std::size_t k = 0; k < s.terms().size(); ++k) {
          if (k) out += ", ";
          render_term(s.terms()[k], out);
        }
        out += ')';
      }
      return;
    case Op::Not:
      out += '~';
      render(s.children()[0], v, out);
      return;
    case Op::And:
      nary(" & ");
      return;
    case Op::Or:
      nary(" | ");
      return;
    case Op::Implies:
      nary(" -> ");
      return;
    case Op::Iff:
      nary(" <-> ");
      return;
    case Op::Equals:
      out += '(';
      render_term(s.terms()[0], out);
      out += " = ";
      render_term(s.terms()[1], out);
      out += ')';
      return;
    case Op::Forall:
    case Op::Exists:
      out += s.op() == Op::Forall ? "(forall " : "(exists ";
      out += s.variable();
      out += ':';
      out += v.domain(s.domain()).name;
      out += ". ";
      render(s.children()[0], v, out);
      out += ')';
      return;
  }
}

}  // namespace

void check_closed(const Sentence& s, const Vocabulary& v) {
  Scope scope;
  check_closed(s, v, scope);
}

std::string to_string(const Sentence& s, const Vocabulary& v) {
  std::string out;
  render(s, v, out);
  return out;
}

// ---------------------------------------------------------------------------

GroundSentence GroundSentence::make(Node n) { return GroundSentence(std::make_shared<const Node>(std::move(n))); }

GroundSentence GroundSentence::truth() {
  static const GroundSentence t = make({GroundOp::True, 0, {}});
  return t;
}

GroundSentence GroundSentence::falsity() {
  static const GroundSentence f = make({GroundOp::False, 0, {}});
  return f;
}

GroundSentence GroundSentence::atom(std::size_t index) { return make({GroundOp::Atom, index, {}}); }

GroundSentence GroundSentence::negation(GroundSentence g) {
  if (g.op() == GroundOp::True) return falsity();
  if (g.op() == GroundOp::False) return truth();
  return make({GroundOp::Not, 0, {std::move(g)}});
}

GroundSentence GroundSentence::conjunction(std::vector<GroundSentence> parts) {
  std::vector<GroundSentence> kept;
  kept.reserve(parts.size());
  for (auto& p : parts) {
    if (p.op() == GroundOp::False) return falsity();
    if (p.op() != GroundOp::True) kept.push_back(std::move(p));
  }
  if (kept.empty()) return truth();
  if (kept.size() == 1) return std::move(kept.front());
  return make({GroundOp::And, 0, std::move(kept)});
}

GroundSentence GroundSentence::disjunction(std::vector<GroundSentence> parts) {
  std::vector<GroundSentence> kept;
  kept.reserve(parts.size());
  for (auto& p : parts) {
    if (p.op() == GroundOp::True) return truth();
    if (p.op() != GroundOp::False) kept.push_back(std::move(p));
  }
  if (kept.empty()) return falsity();
  if (kept.size() == 1) return std::move(kept.front());
  return make({GroundOp::Or, 0, std::move(kept)});
}

GroundSentence GroundSentence::implication(GroundSentence lhs, GroundSentence rhs) {
  if (lhs.op() == GroundOp::False || rhs.op() == GroundOp::True) return truth();
  if (lhs.op() == GroundOp::True) return rhs;
  if (rhs.op() == GroundOp::False) return negation(std::move(lhs));
  return make({GroundOp::Implies, 0, {std::move(lhs), std::move(rhs)}});
}

GroundSentence GroundSentence::biconditional(GroundSentence lhs, GroundSentence rhs) {
  if (lhs.op() == GroundOp::True) return rhs;
  if (rhs.op() == GroundOp::True) return lhs;
  if (lhs.op() == GroundOp::False) return negation(std::move(rhs));
  if (rhs.op() == GroundOp::False) return negation(std::move(lhs));
  return make({GroundOp::Iff, 0, {std::move(lhs), std::move(rhs)}});
}

std::size_t GroundSentence::atom_bound() const {
  if (op() == GroundOp::Atom) return atom_index() + 1;
  std::size_t bound = 0;
  for (const auto& c : children()) bound = std::max(bound, c.atom_bound());
  return bound;
}

bool GroundSentence::evaluate(std::uint64_t world) const {
  switch (op()) {
    case GroundOp::True:
      return true;
    case GroundOp::False:
      return false;
    case GroundOp::Atom:
      return (world >> atom_index()) & 1U;
    case GroundOp::Not:
      return !children()[0].evaluate(world);
    case GroundOp::And:
      return std::all_of(children().begin(), children().end(), [&](const auto& c) { return c.evaluate(world); });
    case GroundOp::Or:
      return std::any_of(children().begin(), children().end(), [&](const auto& c) { return c.evaluate(world); });
    case GroundOp::Implies:
      return !children()[0].evaluate(world) || children()[1].evaluate(world);
    case GroundOp::Iff:
      return children()[0].evaluate(world) == children()[1].evaluate(world);
  }
  return false;
}

bool GroundSentence::operator==(const GroundSentence& other) const {
  if (node_ == other.node_) return true;
  return node_->op == other.node_->op && node_->atom == other.node_->atom && node_->children == other.node_->children;
}

namespace {

// Variable bindings during grounding: variable name -> constant index.
using Env = std::vector<std::pair<std::string, std::size_t>>;

std::size_t resolve(const Term& t, const Vocabulary& v, const Env& env) {
  if (t.is_variable) {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == t.name) return it->second;
    throw InputError("free variable '" + t.name + "'");
  }
  if (t.domain >= v.domains().size()) throw InputError("term '" + t.name + "' has an unknown domain");
  auto idx = v.domain(t.domain).index_of(t.name);
  if (!idx) throw InputError("'" + t.name + "' is not a constant of domain '" + v.domain(t.domain).name + "'");
  return *idx;
}

GroundSentence ground(const Sentence& s, const Vocabulary& v, Env& env) {
  auto ground_children = [&] {
    std::vector<GroundSentence> out;
    out.reserve(s.children().size());
    for (const auto& c : s.children()) out.push_back(ground(c, v, env));
    return out;
  };
  switch (s.op()) {
    case Op::True:
      return GroundSentence::truth();
    case Op::False:
      return GroundSentence::falsity();
    case Op::Atom: {
      if (s.symbol() >= v.symbols().size()) throw VocabularyMismatch("sentence uses a symbol outside the vocabulary");
      std::vector<std::size_t> args;
      args.reserve(s.terms().size());
      for (const auto& t : s.terms()) args.push_back(resolve(t, v, env));
      return GroundSentence::atom(v.atom_index(s.symbol(), args));
    }
    case Op::Not:
      return GroundSentence::negation(ground(s.children()[0], v, env));
    case Op::And:
      return GroundSentence::conjunction(ground_children());
    case Op::Or:
      return GroundSentence::disjunction(ground_children());
    case Op::Implies: {
      auto parts = ground_children();
      return GroundSentence::implication(std::move(parts[0]), std::move(parts[1]));
    }
    case Op::Iff: {
      auto parts = ground_children();
      return GroundSentence::biconditional(std::move(parts[0]), std::move(parts[1]));
    }
    case Op::Equals: {
      const Term& a = s.terms()[0];
      const Term& b = s.terms()[1];
      if (a.domain != b.domain) throw InputError("equality between terms of different domains");
      return resolve(a, v, env) == resolve(b, v, env) ? GroundSentence::truth() : GroundSentence::falsity();
    }
    case Op::Forall:
    case Op::Exists: {
      if (s.domain() >= v.domains().size()) throw VocabularyMismatch("quantifier over a domain outside the vocabulary");
      std::size_t size = v.domain(s.domain()).constants.size();
      std::vector<GroundSentence> instances;
      instances.reserve(size);
      for (std::size_t c = 0; c < size; ++c) {
        env.emplace_back(s.variable(), c);
        instances.push_back(ground(s.children()[0], v, env));
        env.pop_back();
      }
      return s.op() == Op::Forall ? GroundSentence::conjunction(std::move(instances))
                                  : GroundSentence::disjunction(std::move(instances));
    }
  }
  throw InputError("unknown sentence node");
}

}  // namespace

GroundSentence ground(const Sentence& s, const Vocabulary& v) {
  Env env;
  return ground(s, v, env);
}

Sentence to_sentence(const GroundSentence& g, const Vocabulary& v) {
  auto convert_children = [&] {
    std::vector<Sentence> out;
    out.reserve(g.children().size());
    for (const auto& c : g.children()) out.push_back(to_sentence(c, v));
    return out;
  };
  switch (g.op()) {
    case GroundOp::True:
      return Sentence::truth();
    case GroundOp::False:
      return Sentence::falsity();
    case GroundOp::Atom: {
      auto [symbol, args] = v.atom_at(g.atom_index());
      const Symbol& sym = v.symbol(symbol);
      std::vector<Term> terms;
      for (std::size_t k = 0; k < args.size(); ++k) {
        std::size_t d = sym.arg_domains[k];
        terms.push_back({false, v.domain(d).constants[args[k]], d});
      }
      return Sentence::atom(symbol, std::move(terms));
    }
    case GroundOp::Not:
      return Sentence::negation(to_sentence(g.children()[0], v));
    case GroundOp::And:
      return Sentence::conjunction(convert_children());
    case GroundOp::Or:
      return Sentence::disjunction(convert_children());
    case GroundOp::Implies: {
      auto parts = convert_children();
      return Sentence::implication(parts[0], parts[1]);
    }
    case GroundOp::Iff: {
      auto parts = convert_children();
      return Sentence::biconditional(parts[0], parts[1]);
    }
  }
  throw InputError("unknown ground node");
}

std::string to_string(const GroundSentence& g, const Vocabulary& v) { return to_string(to_sentence(g, v), v); }

}  // namespace plog
