#include "plog/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "embedded_kb.hpp"
#include "plog/belief.hpp"
#include "plog/error.hpp"
#include "plog/extend.hpp"
#include "plog/induct.hpp"
#include "plog/maxent.hpp"
#include "plog/program.hpp"
#include "plog/sat.hpp"
#include "plog/worlds.hpp"

namespace plog::cli {

std::string format_probability(double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", p);
  return buf;
}

namespace {

int code(ExitCode c) { return static_cast<int>(c); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string shortest(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Loaded {
  Program program;
  std::shared_ptr<const WorldSpace> space;
  std::vector<GroundSentence> ground;
  std::vector<double> targets;
  std::vector<std::string> labels;
};

Loaded load_text(const std::string& text, std::size_t cap) {
  Loaded l{parse_program(text), nullptr, {}, {}, {}};
  l.space = std::make_shared<const WorldSpace>(l.program.vocabulary, cap);
  for (const auto& c : l.program.constraints) {
    l.ground.push_back(ground(c.sentence, l.program.vocabulary));
    l.targets.push_back(c.target);
    l.labels.push_back(c.label);
  }
  return l;
}

Loaded load(const RunConfig& cfg) { return load_text(read_file(cfg.kb_path), cfg.world_cap); }

Belief prior_for(const RunConfig& cfg, const Loaded& l) {
  if (!cfg.prior_path) return Belief::uniform(l.space);
  std::ifstream in(*cfg.prior_path);
  if (!in) throw InputError("cannot read '" + *cfg.prior_path + "'");
  return read_belief(in, l.space);
}

Belief fitted(const Loaded& l, const Belief& prior, const RunConfig& cfg) {
  if (l.ground.empty()) return prior;
  ProjectionOptions opt;
  opt.max_residual = cfg.tol;
  return project(prior, l.ground, l.targets, opt).belief;
}

int cmd_check(const RunConfig& cfg, std::ostream* dimacs, std::ostream& out) {
  Loaded l = load(cfg);
  SatOracle oracle(SatLimits{}, dimacs);
  std::vector<std::pair<std::string, std::string>> rows;  // tag, message

  auto elig = check_eligible(l.ground, l.targets, oracle);
  SubadditivityOptions sopt;
  sopt.tol = std::max(cfg.tol, 1e-9);
  auto sub = check_subadditive(l.ground, l.targets, oracle, sopt);
  Hierarchy hier = is_hierarchical(l.ground, oracle);
  Feasibility feas = extend_feasible(l.ground, l.targets, *l.space);

  for (const auto& v : elig) rows.emplace_back("ELIG", describe(v, l.labels));
  for (const auto& v : sub.violations) rows.emplace_back("SUBADD", describe(v, l.labels));

  std::string hier_line;
  if (hier.hierarchical) {
    hier_line = "yes, depth " + std::to_string(hier.max_depth);
  } else {
    hier_line = "no";
    for (std::size_t i = 0; i < l.ground.size(); ++i)
      for (std::size_t j = i + 1; j < l.ground.size(); ++j) {
        PairRelation r = hier.relation[i][j];
        if (r == PairRelation::None || r == PairRelation::Multiple)
          rows.emplace_back("HIER", "HIER " + l.labels[i] + " / " + l.labels[j] + ": " + to_string(r));
      }
  }
  if (!feas.feasible) {
    Violation v{Rule::LpInfeasible, 0, feas.conflict, feas.infeasibility, 0.0, false};
    rows.emplace_back("LP-INFEASIBLE", describe(v, l.labels));
  }

  if (cfg.format == Format::Csv) {
    out << "item,value\n";
    out << "atoms," << l.space->atom_count() << "\nconstraints," << l.ground.size() << "\n";
    out << "hierarchical," << (hier.hierarchical ? "yes" : "no") << "\n";
    if (hier.hierarchical) out << "depth," << hier.max_depth << "\n";
    out << "subadditive_scan," << (sub.exhaustive ? "exhaustive" : "sampled") << "\n";
    out << "lp," << (feas.feasible ? "feasible" : "infeasible") << "\n";
    for (const auto& [tag, msg] : rows) out << tag << ',' << csv_field(msg) << "\n";
  } else {
    out << "atoms: " << l.space->atom_count() << ", worlds: " << l.space->world_count()
        << ", constraints: " << l.ground.size() << "\n";
    auto section = [&](const std::string& tag, const std::string& clean) {
      bool any = false;
      for (const auto& [t, msg] : rows)
        if (t == tag) {
          out << msg << "\n";
          any = true;
        }
      if (!any && !clean.empty()) out << tag << ": " << clean << "\n";
    };
    section("ELIG", "clean");
    section("SUBADD", sub.exhaustive ? "clean" : "clean on 10000 sampled families (not exhaustive)");
    if (!sub.exhaustive && !sub.violations.empty()) out << "SUBADD: families were sampled, not enumerated\n";
    out << "HIER: " << hier_line << "\n";
    section("HIER", "");
    out << "LP: " << (feas.feasible ? "feasible" : "infeasible") << "\n";
    section("LP-INFEASIBLE", "");
  }
  return code(feas.feasible ? ExitCode::Ok : ExitCode::Infeasible);
}

int cmd_query(const RunConfig& cfg, const std::string& formula, const std::optional<std::string>& given,
              std::ostream& out) {
  Loaded l = load(cfg);
  Sentence phi = l.program.parse_formula(formula);
  std::optional<Sentence> psi;
  if (given) psi = l.program.parse_formula(*given);
  Belief mu = fitted(l, prior_for(cfg, l), cfg);
  double value = psi ? cond(mu, phi, *psi) : prob(mu, phi);
  if (cfg.format == Format::Csv) {
    out << "probability\n" << shortest(value) << "\n";
  } else {
    out << format_probability(value) << "\n";
  }
  return code(ExitCode::Ok);
}

int cmd_extend(const RunConfig& cfg, bool report, const std::optional<std::string>& save, std::ostream& out) {
  Loaded l = load(cfg);
  Belief prior = prior_for(cfg, l);
  ProjectionOptions opt;
  opt.max_residual = cfg.tol;
  Extension ext = extend_or_explain(l.program.constraints, prior, opt);
  if (!ext.projection) {
    for (const auto& v : ext.diagnostics.violations) out << describe(v, l.labels) << "\n";
    if (!ext.diagnostics.exhaustive) out << "SUBADD: families were sampled, not enumerated\n";
    return code(ExitCode::Infeasible);
  }
  const Projection& p = *ext.projection;
  if (cfg.format == Format::Csv) {
    out << "sentence,target,probability\n";
    for (std::size_t i = 0; i < l.ground.size(); ++i)
      out << csv_field(l.labels[i]) << ',' << shortest(l.targets[i]) << ',' << shortest(prob(p.belief, l.ground[i]))
          << "\n";
    for (const auto& ns : l.program.sentences)
      out << csv_field(ns.name) << ",," << shortest(prob(p.belief, ns.sentence)) << "\n";
  } else {
    out << "constraints\n";
    for (std::size_t i = 0; i < l.ground.size(); ++i)
      out << "  " << l.labels[i] << " = " << format_probability(prob(p.belief, l.ground[i])) << "  (target "
          << format_probability(l.targets[i]) << ")\n";
    if (!l.program.sentences.empty()) {
      out << "sentences\n";
      for (const auto& ns : l.program.sentences)
        out << "  " << ns.name << " = " << format_probability(prob(p.belief, ns.sentence)) << "\n";
    }
    out << "KL to prior = " << format_probability(p.kl) << "\n";
    if (report) out << format_report(p, l.labels);
  }
  if (save) {
    std::ofstream f(*save);
    if (!f) throw InputError("cannot write '" + *save + "'");
    write_belief(f, p.belief);
  }
  return code(ExitCode::Ok);
}

int cmd_confirm(const RunConfig& cfg, const std::string& spec, std::size_t n_max, std::ostream& out) {
  SequencePrior p = SequencePrior::parse(spec);
  if (cfg.format == Format::Csv) {
    write_csv(out, p, n_max);
    return code(ExitCode::Ok);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%4s  %14s  %19s  %14s\n", "n", "prefix_prob", "posterior_universal", "predictive");
  out << buf;
  for (std::size_t n = 0; n <= n_max; ++n) {
    double pre = prefix_prob(p, n);
    std::string post = pre > 0.0 ? format_probability(posterior_universal(p, n)) : "undefined";
    std::string pred = pre > 0.0 ? format_probability(predictive(p, n)) : "undefined";
    std::snprintf(buf, sizeof buf, "%4zu  %14s  %19s  %14s\n", n, format_probability(pre).c_str(), post.c_str(),
                  pred.c_str());
    out << buf;
  }
  CuhReport r = cuh_equivalence_check(p, n_max);
  out << "universal_prob = " << format_probability(r.universal) << "\n";
  // Every component's prefix probability converges to its universal mass, so
  // both limits are settled by the sign of universal_prob.
  const char* limit = r.universal > 0.0 ? "yes" : "no";
  out << "posterior tends to 1: " << limit << "; prefix tends to a positive universal_prob: " << limit << "\n";
  std::snprintf(buf, sizeof buf, "at n = %zu: 1 - posterior = %.3e, prefix - universal = %.3e\n", n_max,
                r.left_gap.back(), r.right_gap.back());
  out << buf;
  return code(ExitCode::Ok);
}

int example_monty_hall(const RunConfig& cfg, std::ostream& out) {
  Loaded l = load_text(embedded::monty_hall, cfg.world_cap);
  Belief mu = fitted(l, Belief::uniform(l.space), cfg);
  double swap_d2 = cond(mu, l.program.parse_formula("prize(d2)"), l.program.parse_formula("first(d1) & host(d3)"));
  double stay_d1 = cond(mu, l.program.parse_formula("prize(d1)"), l.program.parse_formula("first(d1) & host(d3)"));
  double win_switch = prob(mu, l.program.parse_formula("~phi9"));
  double win_stay = prob(mu, l.program.parse_formula("phi9"));
  if (cfg.format == Format::Csv) {
    out << "quantity,probability\n"
        << "prize_d2_given_first_d1_host_d3," << shortest(swap_d2) << "\n"
        << "prize_d1_given_first_d1_host_d3," << shortest(stay_d1) << "\n"
        << "win_by_switching," << shortest(win_switch) << "\n"
        << "win_by_staying," << shortest(win_stay) << "\n";
    return code(ExitCode::Ok);
  }
  out << "Monty Hall. One of three doors hides a prize. The player picks a door; the host\n"
         "then opens a different door that hides nothing, and the player may switch.\n"
         "Known for certain: each of first, host, prize holds of exactly one door, and the\n"
         "host avoids the player's door and the prize. The first pick is right with\n"
         "probability 1/3. Prior: uniform over the 2^9 worlds, then the minimum relative\n"
         "entropy fit to these beliefs.\n\n";
  out << "P(prize(d2) | first(d1), host(d3)) = " << format_probability(swap_d2) << "\n";
  out << "P(prize(d1) | first(d1), host(d3)) = " << format_probability(stay_d1) << "\n";
  out << "P(win by switching) = " << format_probability(win_switch) << "\n";
  out << "P(win by staying)   = " << format_probability(win_stay) << "\n";
  out << "Switching wins twice as often as staying.\n";
  return code(ExitCode::Ok);
}

int example_ravens(const RunConfig& cfg, std::ostream& out) {
  SequencePrior p = SequencePrior::parse("alltrue:1/2,iid:1/2@1/2");
  const std::size_t ns[] = {0, 1, 2, 5, 10, 20, 40};
  if (cfg.format == Format::Csv) {
    write_csv(out, p, 40);
    return code(ExitCode::Ok);
  }
  out << "Black ravens. Prior: mass 1/2 on 'every raven is black', mass 1/2 on ravens\n"
         "being black independently with probability 1/2. After n black ravens:\n\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%4s  %26s  %24s\n", "n", "P(all black | n observed)", "P(next black | n observed)");
  out << buf;
  for (std::size_t n : ns) {
    std::snprintf(buf, sizeof buf, "%4zu  %26s  %24s\n", n, format_probability(posterior_universal(p, n)).c_str(),
                  format_probability(predictive(p, n)).c_str());
    out << buf;
  }
  out << "\nThe universal hypothesis is confirmed: its posterior approaches 1.\n";

  // The same question on five named ravens, all known to be black.
  Loaded l = load_text("domain Raven = { 1, 2, 3, 4, 5 }\npred B : Raven\n"
                       "believe B(1) = 1\nbelieve B(2) = 1\nbelieve B(3) = 1\nbelieve B(4) = 1\nbelieve B(5) = 1\n",
                       cfg.world_cap);
  Belief mu = fitted(l, Belief::uniform(l.space), cfg);
  out << "With B(1..5) known for certain, P(forall x:Raven. B(x)) = "
      << format_probability(prob(mu, l.program.parse_formula("forall x:Raven. B(x)"))) << "\n";
  return code(ExitCode::Ok);
}

int example_naive_ravens(const RunConfig& cfg, std::ostream& out) {
  SequencePrior p = SequencePrior::parse("iid:1@1/2");
  if (cfg.format == Format::Csv) {
    write_csv(out, p, 30);
    return code(ExitCode::Ok);
  }
  out << "Naive black ravens. Prior: every raven black independently with probability\n"
         "1/2, i.e. the uniform tree. After n black ravens:\n\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "%4s  %24s  %28s\n", "n", "P(next black | n observed)", "P(next 10 black | n observed)");
  out << buf;
  for (std::size_t n : {0, 1, 5, 10, 20, 30}) {
    double pre = prefix_prob(p, n);
    std::snprintf(buf, sizeof buf, "%4zu  %24s  %28s\n", n, format_probability(predictive(p, n)).c_str(),
                  format_probability(prefix_prob(p, n + 10) / pre).c_str());
    out << buf;
  }
  out << "universal_prob = " << format_probability(universal_prob(p)) << "\n";
  out << "\nObservations say nothing about the next raven, and the probability that m\n"
         "further ravens are black is (1/2)^m whatever was seen. The universal hypothesis\n"
         "has probability 0 and cannot be confirmed.\n";
  return code(ExitCode::Ok);
}

int cmd_example(const RunConfig& cfg, const std::string& name, std::ostream& out, std::ostream& err) {
  if (name == "monty-hall") return example_monty_hall(cfg, out);
  if (name == "ravens") return example_ravens(cfg, out);
  if (name == "naive-ravens") return example_naive_ravens(cfg, out);
  err << "error: unknown example '" << name << "' (choose monty-hall, ravens or naive-ravens)\n";
  return code(ExitCode::BadInput);
}

std::size_t env_world_cap() {
  const char* raw = std::getenv("PLOG_WORLD_CAP");
  if (!raw || !*raw) return WorldSpace::default_cap;
  std::string_view s(raw);
  std::size_t cap = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), cap);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || cap == 0)
    throw InputError("PLOG_WORLD_CAP must be a positive integer");
  return cap;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilities on logical sentences: check, extend, query, confirm.", "plog"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "text";
  std::optional<std::size_t> cap_flag;
  std::string dimacs_path;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv"}));
  app.add_option("--tol", cfg.tol, "Residual tolerance for fitted beliefs")->check(CLI::PositiveNumber);
  app.add_option("--world-cap", cap_flag, "Maximum ground atoms (overrides PLOG_WORLD_CAP)");
  app.add_option("--dimacs", dimacs_path, "Append the clause form of every SAT query to this file");

  auto* check = app.add_subcommand("check", "Eligibility, subadditivity, hierarchy and LP feasibility");
  check->add_option("kb", cfg.kb_path, "Knowledge base (.plog)")->required();

  std::string formula;
  std::optional<std::string> given;
  auto* query = app.add_subcommand("query", "Probability of a formula under the fitted belief");
  query->add_option("kb", cfg.kb_path, "Knowledge base (.plog)")->required();
  query->add_option("formula", formula, "Formula to evaluate")->required();
  query->add_option("--given", given, "Condition on this formula");
  query->add_option("--prior", cfg.prior_path, "Prior belief file (default: uniform)");

  bool report = false;
  std::optional<std::string> save;
  auto* extend = app.add_subcommand("extend", "Fit the minimum relative entropy belief");
  extend->add_option("kb", cfg.kb_path, "Knowledge base (.plog)")->required();
  extend->add_option("--prior", cfg.prior_path, "Prior belief file (default: uniform)");
  extend->add_flag("--report", report, "Print multipliers, block weights, Phi and residuals");
  extend->add_option("--save", save, "Write the fitted belief to this file");

  std::string mixture;
  std::size_t n_max = 0;
  auto* confirm = app.add_subcommand("confirm", "Convergence table for a sequence prior");
  confirm->add_option("--mixture", mixture, "e.g. alltrue:0.5,iid:0.5@0.5")->required();
  confirm->add_option("--n", n_max, "Largest n")->required();

  std::string example_name;
  auto* example = app.add_subcommand("example", "Canned scenarios");
  example->add_option("name", example_name, "monty-hall, ravens or naive-ravens")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? code(ExitCode::Ok) : code(ExitCode::BadInput);
  }

  try {
    cfg.format = format == "csv" ? Format::Csv : Format::Text;
    cfg.world_cap = cap_flag ? *cap_flag : env_world_cap();
    if (cfg.world_cap > WorldSpace::hard_cap)
      throw ResourceError("world cap " + std::to_string(cfg.world_cap) + " exceeds the hard maximum of 24 atoms");
    std::unique_ptr<std::ofstream> dimacs;
    if (!dimacs_path.empty()) {
      dimacs = std::make_unique<std::ofstream>(dimacs_path);
      if (!*dimacs) throw InputError("cannot write '" + dimacs_path + "'");
    }
    if (check->parsed()) {
      cfg.subcommand = "check";
      return cmd_check(cfg, dimacs.get(), out);
    }
    if (query->parsed()) {
      cfg.subcommand = "query";
      return cmd_query(cfg, formula, given, out);
    }
    if (extend->parsed()) {
      cfg.subcommand = "extend";
      return cmd_extend(cfg, report, save, out);
    }
    if (confirm->parsed()) {
      cfg.subcommand = "confirm";
      return cmd_confirm(cfg, mixture, n_max, out);
    }
    cfg.subcommand = "example";
    return cmd_example(cfg, example_name, out, err);
  } catch (const ParseError& e) {
    err << "error: " << (cfg.kb_path.empty() ? std::string("input") : cfg.kb_path) << ":" << e.what() << "\n";
    return code(ExitCode::BadInput);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::BadInput);
  } catch (const VocabularyMismatch& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::BadInput);
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::ResourceCap);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return code(ExitCode::Infeasible);
  } catch (const plog::UndefinedConditional& e) {
    err << "undefined: " << e.what() << "\n";
    return code(ExitCode::UndefinedConditional);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return code(ExitCode::NumericalFailure);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return code(ExitCode::BadInput);
  }
}

}  // namespace plog::cli
