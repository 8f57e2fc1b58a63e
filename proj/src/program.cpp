#include "plog/program.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <utility>

#include "plog/error.hpp"

namespace plog {

void ConstraintSet::add(std::string label, Sentence sentence, double target) {
  if (!(target >= 0.0 && target <= 1.0)) throw InputError("belief value for '" + label + "' is outside [0,1]");
  items_.push_back({std::move(label), std::move(sentence), target});
}

std::vector<Sentence> ConstraintSet::sentences() const {
  std::vector<Sentence> out;
  out.reserve(items_.size());
  for (const auto& c : items_) out.push_back(c.sentence);
  return out;
}

std::vector<double> ConstraintSet::targets() const {
  std::vector<double> out;
  out.reserve(items_.size());
  for (const auto& c : items_) out.push_back(c.target);
  return out;
}

const Sentence* Program::find_sentence(std::string_view name) const {
  for (const auto& s : sentences)
    if (s.name == name) return &s.sentence;
  return nullptr;
}

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Dot,
  Colon,
  Define,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Eq,
  End
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; }

std::vector<Token> tokenize(std::string_view s, std::size_t line, std::size_t base_column) {
  static const std::pair<std::string_view, Tok> symbols[] = {
      {"<->", Tok::Iff},  {"->", Tok::Implies}, {":=", Tok::Define}, {"(", Tok::LParen}, {")", Tok::RParen},
      {"{", Tok::LBrace}, {"}", Tok::RBrace},   {",", Tok::Comma},   {".", Tok::Dot},    {":", Tok::Colon},
      {"~", Tok::Not},    {"!", Tok::Not},      {"&", Tok::And},     {"|", Tok::Or},     {"=", Tok::Eq},
      // UTF-8 spellings
      {"\xC2\xAC", Tok::Not}, {"\xE2\x88\xA7", Tok::And}, {"\xE2\x88\xA8", Tok::Or}, {"\xE2\x86\x92", Tok::Implies},
      {"\xE2\x86\x94", Tok::Iff}};
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t col = base_column + i;
    if (is_ident_char(c)) {
      std::size_t j = i;
      while (j < s.size() && is_ident_char(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    // Quantifier symbols map to their keywords.
    if (s.substr(i, 3) == "\xE2\x88\x80" || s.substr(i, 3) == "\xE2\x88\x83") {
      out.push_back({Tok::Ident, s.substr(i, 3) == "\xE2\x88\x80" ? "forall" : "exists", col});
      i += 3;
      continue;
    }
    bool matched = false;
    for (const auto& [text, kind] : symbols) {
      if (s.substr(i, text.size()) == text) {
        out.push_back({kind, std::string(text), col});
        i += text.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError(std::string("unexpected character '") + s[i] + "'", line, col);
  }
  out.push_back({Tok::End, "", base_column + s.size()});
  return out;
}

class FormulaParser {
 public:
  FormulaParser(std::vector<Token> tokens, std::size_t line, const Vocabulary& vocab,
                const std::vector<NamedSentence>& named)
      : tokens_(std::move(tokens)), line_(line), vocab_(vocab), named_(named) {}

  Sentence parse_all() {
    Sentence s = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return s;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, peek().column); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(msg, line_, t.column); }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    return next();
  }

  static bool is_keyword(const Token& t, std::string_view kw) { return t.kind == Tok::Ident && t.text == kw; }
  bool at_quantifier() const { return is_keyword(peek(), "forall") || is_keyword(peek(), "exists"); }

  Sentence formula() {
    if (at_quantifier()) return quantified();
    return biconditional();
  }

  Sentence quantified() {
    bool universal = next().text == "forall";
    const Token& var = expect(Tok::Ident, "variable name");
    expect(Tok::Colon, "':' after quantified variable");
    const Token& dom = expect(Tok::Ident, "domain name");
    auto d = vocab_.find_domain(dom.text);
    if (!d) fail_at(dom, "undeclared domain '" + dom.text + "'");
    expect(Tok::Dot, "'.' after quantifier");
    scope_.emplace_back(var.text, *d);
    Sentence body = formula();
    scope_.pop_back();
    return universal ? Sentence::forall(var.text, *d, body) : Sentence::exists(var.text, *d, body);
  }

  Sentence biconditional() {
    Sentence lhs = implication();
    while (accept(Tok::Iff)) lhs = Sentence::biconditional(lhs, implication());
    return lhs;
  }

  Sentence implication() {
    Sentence lhs = disjunction();
    if (accept(Tok::Implies)) return Sentence::implication(lhs, implication());
    return lhs;
  }

  Sentence disjunction() {
    std::vector<Sentence> parts{conjunction()};
    while (accept(Tok::Or)) parts.push_back(conjunction());
    return Sentence::disjunction(std::move(parts));
  }

  Sentence conjunction() {
    std::vector<Sentence> parts{unary()};
    while (accept(Tok::And)) parts.push_back(unary());
    return Sentence::conjunction(std::move(parts));
  }

  Sentence unary() {
    if (accept(Tok::Not)) return Sentence::negation(unary());
    if (at_quantifier()) return quantified();
    return primary();
  }

  const std::size_t* bound_domain(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == name) return &it->second;
    return nullptr;
  }

  Term term_at(const Token& t, std::size_t domain) const {
    if (const std::size_t* d = bound_domain(t.text)) {
      if (*d != domain)
        fail_at(t, "variable '" + t.text + "' ranges over '" + vocab_.domain(*d).name + "', expected '" +
                       vocab_.domain(domain).name + "'");
      return {true, t.text, domain};
    }
    if (!vocab_.domain(domain).index_of(t.text))
      fail_at(t, "'" + t.text + "' is not a constant of domain '" + vocab_.domain(domain).name + "'");
    return {false, t.text, domain};
  }

  Sentence equality(const Token& lhs, const Token& rhs) const {
    std::vector<std::size_t> candidates;
    auto domains_of = [&](const Token& t) {
      std::vector<std::size_t> ds;
      if (const std::size_t* d = bound_domain(t.text)) {
        ds.push_back(*d);
      } else {
        for (std::size_t i = 0; i < vocab_.domains().size(); ++i)
          if (vocab_.domain(i).index_of(t.text)) ds.push_back(i);
        if (ds.empty()) fail_at(t, "undeclared constant or variable '" + t.text + "'");
      }
      return ds;
    };
    auto left = domains_of(lhs);
    auto right = domains_of(rhs);
    for (std::size_t d : left)
      if (std::find(right.begin(), right.end(), d) != right.end()) candidates.push_back(d);
    if (candidates.empty()) fail_at(lhs, "equality between terms of different domains");
    std::size_t d = candidates.front();
    return Sentence::equality(term_at(lhs, d), term_at(rhs, d));
  }

  Sentence primary() {
    if (accept(Tok::LParen)) {
      Sentence s = formula();
      expect(Tok::RParen, "')'");
      return s;
    }
    const Token& id = expect(Tok::Ident, "formula");
    if (id.text == "true" || id.text == "True") return Sentence::truth();
    if (id.text == "false" || id.text == "False") return Sentence::falsity();
    if (peek().kind == Tok::Eq) {
      next();
      const Token& rhs = expect(Tok::Ident, "term after '='");
      return equality(id, rhs);
    }
    if (peek().kind == Tok::LParen) {
      next();
      auto sym = vocab_.find_symbol(id.text);
      if (!sym) fail_at(id, "undeclared predicate '" + id.text + "'");
      const Symbol& symbol = vocab_.symbol(*sym);
      std::vector<Term> args;
      do {
        const Token& arg = expect(Tok::Ident, "argument");
        if (args.size() >= symbol.arg_domains.size()) fail_at(arg, "too many arguments to '" + id.text + "'");
        args.push_back(term_at(arg, symbol.arg_domains[args.size()]));
      } while (accept(Tok::Comma));
      expect(Tok::RParen, "')'");
      if (args.size() != symbol.arg_domains.size()) fail_at(id, "too few arguments to '" + id.text + "'");
      return Sentence::atom(*sym, std::move(args));
    }
    if (auto sym = vocab_.find_symbol(id.text)) {
      if (!vocab_.symbol(*sym).is_proposition()) fail_at(id, "predicate '" + id.text + "' needs arguments");
      return Sentence::atom(*sym);
    }
    for (const auto& n : named_)
      if (n.name == id.text) return n.sentence;
    fail_at(id, "undeclared name '" + id.text + "'");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  const Vocabulary& vocab_;
  const std::vector<NamedSentence>& named_;
  std::vector<std::pair<std::string, std::size_t>> scope_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_ident_char(static_cast<unsigned char>(c))) return false;
  return true;
}

class ProgramParser {
 public:
  Program run(std::string_view text) {
    std::size_t line_no = 0;
    while (!text.empty()) {
      ++line_no;
      auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      statement(line, line_no);
    }
    return std::move(program_);
  }

 private:
  void statement(std::string_view line, std::size_t line_no) {
    std::size_t start = 0;
    while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
    if (start == line.size()) return;
    std::size_t end = start;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    std::string_view keyword = line.substr(start, end - start);
    std::string_view rest = line.substr(end);
    std::size_t rest_col = end + 1;
    try {
      if (keyword == "domain") {
        domain(rest, line_no, rest_col);
      } else if (keyword == "pred") {
        predicate(rest, line_no, rest_col);
      } else if (keyword == "prop") {
        proposition(rest, line_no, rest_col);
      } else if (keyword == "sentence") {
        sentence(rest, line_no, rest_col);
      } else if (keyword == "believe") {
        believe(rest, line_no, rest_col);
      } else {
        throw ParseError("unknown statement '" + std::string(keyword) + "'", line_no, start + 1);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no, start + 1);
    }
  }

  void check_fresh_name(const Token& t, std::size_t line) const {
    if (program_.vocabulary.find_domain(t.text) || program_.vocabulary.find_symbol(t.text) ||
        program_.find_sentence(t.text))
      throw ParseError("duplicate declaration of '" + t.text + "'", line, t.column);
  }

  static const Token& want(const std::vector<Token>& toks, std::size_t& i, Tok k, const char* what, std::size_t line) {
    if (toks[i].kind != k) throw ParseError(std::string("expected ") + what, line, toks[i].column);
    return toks[i++];
  }

  void domain(std::string_view rest, std::size_t line, std::size_t col) {
    auto toks = tokenize(rest, line, col);
    std::size_t i = 0;
    const Token& name = want(toks, i, Tok::Ident, "domain name", line);
    check_fresh_name(name, line);
    want(toks, i, Tok::Eq, "'='", line);
    want(toks, i, Tok::LBrace, "'{'", line);
    std::vector<std::string> constants;
    do {
      const Token& c = want(toks, i, Tok::Ident, "constant", line);
      for (const auto& prev : constants)
        if (prev == c.text) throw ParseError("constant '" + c.text + "' repeated in domain", line, c.column);
      constants.push_back(c.text);
    } while (toks[i].kind == Tok::Comma && ++i);
    want(toks, i, Tok::RBrace, "'}'", line);
    want(toks, i, Tok::End, "end of line", line);
    program_.vocabulary.add_domain(name.text, std::move(constants));
  }

  void predicate(std::string_view rest, std::size_t line, std::size_t col) {
    auto toks = tokenize(rest, line, col);
    std::size_t i = 0;
    const Token& name = want(toks, i, Tok::Ident, "predicate name", line);
    check_fresh_name(name, line);
    want(toks, i, Tok::Colon, "':'", line);
    std::vector<std::string> doms;
    do {
      const Token& d = want(toks, i, Tok::Ident, "domain name", line);
      if (!program_.vocabulary.find_domain(d.text))
        throw ParseError("undeclared domain '" + d.text + "'", line, d.column);
      doms.push_back(d.text);
    } while (toks[i].kind == Tok::Comma && ++i);
    want(toks, i, Tok::End, "end of line", line);
    program_.vocabulary.add_predicate(name.text, doms);
  }

  void proposition(std::string_view rest, std::size_t line, std::size_t col) {
    auto toks = tokenize(rest, line, col);
    std::size_t i = 0;
    do {
      const Token& name = want(toks, i, Tok::Ident, "proposition name", line);
      check_fresh_name(name, line);
      program_.vocabulary.add_proposition(name.text);
    } while (toks[i].kind == Tok::Comma && ++i);
    want(toks, i, Tok::End, "end of line", line);
  }

  void sentence(std::string_view rest, std::size_t line, std::size_t col) {
    auto def = rest.find(":=");
    if (def == std::string_view::npos) throw ParseError("expected ':=' in sentence declaration", line, col);
    auto head = tokenize(rest.substr(0, def), line, col);
    std::size_t i = 0;
    const Token& name = want(head, i, Tok::Ident, "sentence name", line);
    want(head, i, Tok::End, "':='", line);
    check_fresh_name(name, line);
    auto body = tokenize(rest.substr(def + 2), line, col + def + 2);
    Sentence s = FormulaParser(std::move(body), line, program_.vocabulary, program_.sentences).parse_all();
    program_.sentences.push_back({name.text, std::move(s)});
  }

  void believe(std::string_view rest, std::size_t line, std::size_t col) {
    auto eq = rest.rfind('=');
    if (eq == std::string_view::npos || eq == 0 || rest[eq - 1] == '<' || rest[eq - 1] == ':')
      throw ParseError("expected '= <number>' after belief", line, col + rest.size());
    std::string_view subject = trim(rest.substr(0, eq));
    std::string_view value = trim(rest.substr(eq + 1));
    if (subject.empty()) throw ParseError("missing sentence in belief", line, col);
    double target = 0.0;
    try {
      target = parse_probability(value);
    } catch (const InputError& e) {
      throw ParseError(e.what(), line, col + eq + 1);
    }
    std::string label(subject);
    if (is_identifier(subject)) {
      if (const Sentence* named = program_.find_sentence(subject)) {
        program_.constraints.add(label, *named, target);
        return;
      }
    }
    auto toks = tokenize(rest.substr(0, eq), line, col);
    Sentence s = FormulaParser(std::move(toks), line, program_.vocabulary, program_.sentences).parse_all();
    program_.constraints.add(label, std::move(s), target);
  }

  Program program_;
};

}  // namespace

Program parse_program(std::string_view text) { return ProgramParser().run(text); }

Sentence Program::parse_formula(std::string_view text) const {
  auto toks = tokenize(text, 1, 1);
  return FormulaParser(std::move(toks), 1, vocabulary, sentences).parse_all();
}

double parse_probability(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InputError("missing number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = trim(text.substr(0, slash));
    std::string_view den = trim(text.substr(slash + 1));
    std::uint64_t p = 0;
    std::uint64_t q = 0;
    auto r1 = std::from_chars(num.data(), num.data() + num.size(), p);
    auto r2 = std::from_chars(den.data(), den.data() + den.size(), q);
    if (r1.ec != std::errc{} || r1.ptr != num.data() + num.size() || r2.ec != std::errc{} ||
        r2.ptr != den.data() + den.size())
      throw InputError("malformed fraction '" + std::string(text) + "'");
    if (q == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    if (p > q) throw InputError("belief value " + std::string(text) + " is outside [0,1]");
    return static_cast<double>(p) / static_cast<double>(q);
  }
  double value = 0.0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), value);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
    throw InputError("malformed number '" + std::string(text) + "'");
  if (!(value >= 0.0 && value <= 1.0)) throw InputError("belief value " + std::string(text) + " is outside [0,1]");
  return value;
}

}  // namespace plog
