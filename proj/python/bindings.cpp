#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcf/axioms.hpp"
#include "qcf/cli.hpp"
#include "qcf/error.hpp"
#include "qcf/model_finder.hpp"
#include "qcf/order_algebra.hpp"
#include "qcf/syntax.hpp"
#include "qcf/weak_structure.hpp"

namespace py = pybind11;
using namespace qcf;

namespace {

WeakStructure loadStructure(const Theory& theory, const std::string& json) {
  std::vector<QcfTemplate> templates;
  for (const auto& s : theory.sentences) {
    for (const auto& t : qcfTemplates(s)) templates.push_back(t);
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("structure: ") + e.what(), 1, 1);
  }
  WeakStructure m = structureFromJson(j, theory.signature, templates);
  m.validate(theory.signature);
  return m;
}

py::dict resultDict(const SearchResult& r) {
  static const char* const kinds[] = {"found", "exhausted", "budget"};
  py::dict d;
  d["token"] = r.token();
  d["kind"] = kinds[static_cast<int>(r.kind)];
  d["size"] = r.size;
  d["max_size"] = r.maxSize;
  d["nodes"] = r.nodes;
  d["model"] = r.model ? py::cast(toJson(*r.model).dump()) : py::none();
  return d;
}

SearchConfig config(std::size_t maxSize, std::uint64_t budget, bool symmetry) {
  SearchConfig cfg;
  cfg.maxSize = maxSize;
  cfg.nodeBudget = budget;
  cfg.symmetryBreaking = symmetry;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_qcf, m) {
  m.doc() = "First-order logic with the cofinality quantifier";

  auto base = py::register_exception<Error>(m, "QcfError");
  py::register_exception<ParseError>(m, "QcfParseError", base.ptr());

  m.def("format_theory", [](const std::string& text) { return formatTheory(parseTheory(text)); },
        py::arg("theory"), "Parse a theory and return its canonical text.");

  m.def(
      "translate",
      [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& s : parseTheory(text).sentences) out.push_back(print(translateToFO(s)));
        return out;
      },
      py::arg("theory"), "Translate every sentence to first-order form over L*.");

  m.def(
      "axioms",
      [](const std::string& fragText, bool sa, bool sk, bool adapter) {
        const FragmentFile frag = parseFragment(fragText);
        AxiomSet set;
        if (sa) set.append(genSA(frag.fragment));
        if (sk) set.append(genSK(frag.fragment, frag.signature.merged(set.extension)));
        if (adapter) {
          set.append(genDomainAdapter(frag.fragment, frag.signature.merged(set.extension)));
        }
        return formatAxiomFile(frag.signature, set);
      },
      py::arg("fragment"), py::arg("sa") = true, py::arg("sk") = false, py::arg("adapter") = false);

  m.def(
      "eval_weak",
      [](const std::string& text, const std::string& structure) {
        const Theory theory = parseTheory(text);
        const WeakStructure ms = loadStructure(theory, structure);
        std::vector<bool> out;
        for (const auto& s : theory.sentences) out.push_back(evalWeak(ms, s));
        return out;
      },
      py::arg("theory"), py::arg("structure_json"));

  m.def(
      "eval_cfinite",
      [](const std::string& text, const std::string& structure, const std::string& cof) {
        const Theory theory = parseTheory(text);
        const WeakStructure ms = loadStructure(theory, structure);
        const CofinalitySpec c = CofinalitySpec::parse(cof);
        std::vector<bool> out;
        for (const auto& s : theory.sentences) out.push_back(evalCFinite(ms, s, c));
        return out;
      },
      py::arg("theory"), py::arg("structure_json"), py::arg("cof"));

  m.def(
      "find_model",
      [](const std::string& text, const std::string& fragText, std::size_t maxSize,
         std::uint64_t budget, bool symmetry) {
        const Theory theory = parseTheory(text);
        const Fragment frag = parseFragment(fragText).fragment;
        SearchResult r;
        {
          py::gil_scoped_release release;
          r = findWeakModel(theory, frag, config(maxSize, budget, symmetry));
        }
        py::dict d = resultDict(r);
        d["verified"] = r.model ? verifyFoundModel(*r.model, theory, frag).ok() : false;
        return d;
      },
      py::arg("theory"), py::arg("fragment") = "begin\n", py::arg("max_size") = 5,
      py::arg("budget") = SearchConfig{}.nodeBudget, py::arg("symmetry_breaking") = true);

  m.def(
      "brute_force",
      [](const std::string& text, const std::string& fragText, std::size_t maxSize, bool symmetry) {
        return resultDict(bruteForceOracle(parseTheory(text), parseFragment(fragText).fragment,
                                           maxSize, symmetry));
      },
      py::arg("theory"), py::arg("fragment") = "begin\n", py::arg("max_size") = 3,
      py::arg("symmetry_breaking") = true);

  m.def(
      "compactness",
      [](const std::string& text, const std::string& fragText, std::size_t k, std::size_t maxSize) {
        const CompactnessReport report =
            compactnessHarness(parseTheory(text), parseFragment(fragText).fragment, k,
                               config(maxSize, SearchConfig{}.nodeBudget, true));
        std::vector<std::pair<std::vector<std::size_t>, std::string>> out;
        for (const auto& e : report.entries) out.emplace_back(e.subset, e.result.token());
        return out;
      },
      py::arg("theory"), py::arg("fragment") = "begin\n", py::arg("k") = 2, py::arg("max_size") = 5);

  m.def("cofinality", [](const std::string& x) { return OrderExpr::parse(x).cofinality().str(); },
        py::arg("order"));

  m.def(
      "connected",
      [](const std::string& x, const std::string& y) {
        return connectedDecision(OrderExpr::parse(x), OrderExpr::parse(y));
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "check_relation",
      [](const std::string& x, const std::string& y, const std::string& relation,
         std::size_t bound) {
        const LazyRelation g =
            cli::catalogueRelation(relation, OrderExpr::parse(x), OrderExpr::parse(y), bound);
        const PropertyVerdicts p = checkConnection(g, bound);
        const PropertyVerdicts q = checkConditions34(g, bound);
        return std::map<std::string, std::string>{{"property1", p.first.token()},
                                                  {"property2", p.second.token()},
                                                  {"condition3", q.first.token()},
                                                  {"condition4", q.second.token()}};
      },
      py::arg("x"), py::arg("y"), py::arg("relation"), py::arg("bound") = 200);

  m.attr("relations") = cli::relationCatalogue();
}
