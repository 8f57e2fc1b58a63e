#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "plog/belief.hpp"
#include "plog/cli.hpp"
#include "plog/error.hpp"
#include "plog/extend.hpp"
#include "plog/induct.hpp"
#include "plog/maxent.hpp"
#include "plog/program.hpp"

namespace py = pybind11;

namespace {

struct KnowledgeBase {
  std::shared_ptr<const plog::Program> program;
  std::shared_ptr<const plog::WorldSpace> space;

  KnowledgeBase(const std::string& text, std::size_t world_cap)
      : program(std::make_shared<const plog::Program>(plog::parse_program(text))),
        space(std::make_shared<const plog::WorldSpace>(program->vocabulary, world_cap)) {}

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& c : program->constraints) out.push_back(c.label);
    return out;
  }
};

// A belief paired with the knowledge base whose formulas it answers.
struct PyBelief {
  std::shared_ptr<const KnowledgeBase> kb;
  plog::Belief belief;

  double prob(const std::string& phi) const { return plog::prob(belief, kb->program->parse_formula(phi)); }

  double cond(const std::string& phi, const std::string& given) const {
    return plog::cond(belief, kb->program->parse_formula(phi), kb->program->parse_formula(given));
  }

  PyBelief condition(const std::string& given) const {
    return {kb, plog::condition(belief, kb->program->parse_formula(given))};
  }

  std::string to_text() const {
    std::ostringstream out;
    plog::write_belief(out, belief);
    return out.str();
  }
};

struct PyProjection {
  PyBelief belief;
  std::vector<std::optional<double>> lambda;
  std::vector<plog::Subset> forced_empty;
  double phi;
  double kl;
  std::size_t iterations;
  std::string report;
};

py::dict check(const std::shared_ptr<const KnowledgeBase>& kb) {
  const auto& cs = kb->program->constraints;
  std::vector<plog::GroundSentence> ground;
  for (const auto& c : cs) ground.push_back(plog::ground(c.sentence, kb->program->vocabulary));
  plog::Feasibility f = plog::extend_feasible(cs, *kb->space);
  plog::Hierarchy h = plog::is_hierarchical(ground);
  auto labels = kb->labels();
  std::vector<std::string> findings;
  for (const auto& v : plog::check_eligible(ground, cs.targets())) findings.push_back(plog::describe(v, labels));
  auto sub = plog::check_subadditive(ground, cs.targets());
  for (const auto& v : sub.violations) findings.push_back(plog::describe(v, labels));
  std::vector<std::string> conflict;
  for (std::size_t i : f.conflict) conflict.push_back(labels[i]);
  py::dict out;
  out["feasible"] = f.feasible;
  out["conflict"] = conflict;
  out["hierarchical"] = h.hierarchical;
  out["depth"] = h.max_depth;
  out["findings"] = findings;
  out["exhaustive"] = sub.exhaustive;
  return out;
}

PyProjection extend(const std::shared_ptr<const KnowledgeBase>& kb, const std::optional<PyBelief>& prior) {
  plog::Belief xi = prior ? prior->belief : plog::Belief::uniform(kb->space);
  if (!(xi.space() == *kb->space)) throw plog::VocabularyMismatch("prior is over a different set of atoms");
  plog::Extension e = plog::extend_or_explain(kb->program->constraints, xi);
  if (!e.projection) {
    std::string msg = "constraints admit no probability";
    for (const auto& v : e.diagnostics.violations) msg += "\n" + plog::describe(v, kb->labels());
    throw plog::InfeasibleError(msg);
  }
  const plog::Projection& p = *e.projection;
  return {PyBelief{kb, p.belief}, p.lambda, p.forced_empty, p.phi, p.kl, p.iterations,
          plog::format_report(p, kb->labels())};
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"plog"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = plog::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Probability logic over finite vocabularies";

  auto error = py::register_exception<plog::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<plog::ParseError>(m, "ParseError", error.ptr());
  py::register_exception<plog::InputError>(m, "InputError", error.ptr());
  py::register_exception<plog::ResourceError>(m, "ResourceError", error.ptr());
  py::register_exception<plog::VocabularyMismatch>(m, "VocabularyMismatch", error.ptr());
  py::register_exception<plog::UndefinedConditional>(m, "UndefinedConditional", error.ptr());
  py::register_exception<plog::InfeasibleError>(m, "InfeasibleError", error.ptr());

  py::class_<KnowledgeBase, std::shared_ptr<KnowledgeBase>>(m, "KnowledgeBase")
      .def(py::init<const std::string&, std::size_t>(), py::arg("text"),
           py::arg("world_cap") = plog::WorldSpace::default_cap)
      .def_property_readonly("atoms", [](const KnowledgeBase& kb) { return kb.space->atom_names(); })
      .def_property_readonly("labels", &KnowledgeBase::labels)
      .def_property_readonly("targets", [](const KnowledgeBase& kb) { return kb.program->constraints.targets(); })
      .def("uniform", [](const std::shared_ptr<KnowledgeBase>& kb) { return PyBelief{kb, plog::Belief::uniform(kb->space)}; })
      .def("belief",
           [](const std::shared_ptr<KnowledgeBase>& kb, std::vector<double> weights) {
             return PyBelief{kb, plog::Belief(kb->space, std::move(weights))};
           })
      .def("load_belief",
           [](const std::shared_ptr<KnowledgeBase>& kb, const std::string& text) {
             std::istringstream in(text);
             return PyBelief{kb, plog::read_belief(in, kb->space)};
           })
      .def("check", [](const std::shared_ptr<KnowledgeBase>& kb) { return check(kb); })
      .def(
          "extend",
          [](const std::shared_ptr<KnowledgeBase>& kb, const std::optional<PyBelief>& prior) { return extend(kb, prior); },
          py::arg("prior") = std::nullopt);

  py::class_<PyBelief>(m, "Belief")
      .def_property_readonly("weights", [](const PyBelief& b) { return b.belief.weights(); })
      .def("prob", &PyBelief::prob, py::arg("formula"))
      .def("cond", &PyBelief::cond, py::arg("formula"), py::arg("given"))
      .def("condition", &PyBelief::condition, py::arg("given"))
      .def("kl", [](const PyBelief& mu, const PyBelief& xi) { return plog::kl(mu.belief, xi.belief); })
      .def("is_strongly_cournot", [](const PyBelief& b) { return plog::is_strongly_cournot(b.belief); })
      .def("to_text", &PyBelief::to_text);

  py::class_<PyProjection>(m, "Projection")
      .def_readonly("belief", &PyProjection::belief)
      .def_readonly("lambda_", &PyProjection::lambda)
      .def_readonly("forced_empty", &PyProjection::forced_empty)
      .def_readonly("phi", &PyProjection::phi)
      .def_readonly("kl", &PyProjection::kl)
      .def_readonly("iterations", &PyProjection::iterations)
      .def_readonly("report", &PyProjection::report);

  auto prior = [](const std::string& spec) { return plog::SequencePrior::parse(spec); };
  m.def("prefix_prob", [=](const std::string& spec, std::size_t n) { return plog::prefix_prob(prior(spec), n); });
  m.def("universal_prob", [=](const std::string& spec) { return plog::universal_prob(prior(spec)); });
  m.def("posterior_universal",
        [=](const std::string& spec, std::size_t n) { return plog::posterior_universal(prior(spec), n); });
  m.def("predictive", [=](const std::string& spec, std::size_t n) { return plog::predictive(prior(spec), n); });
  m.def(
      "confirmation_check",
      [=](const std::string& spec, std::size_t n_max, double tol) {
        plog::CuhReport r = plog::cuh_equivalence_check(prior(spec), n_max, tol);
        py::dict out;
        out["universal"] = r.universal;
        out["left_gap"] = r.left_gap;
        out["right_gap"] = r.right_gap;
        out["left_holds"] = r.left_holds;
        out["right_holds"] = r.right_holds;
        out["equivalent"] = r.equivalent;
        out["gaps_bounded"] = r.gaps_bounded;
        return out;
      },
      py::arg("spec"), py::arg("n_max"), py::arg("tol") = 1e-6);

  m.def("run_cli", &run_cli, py::arg("args"));
}
