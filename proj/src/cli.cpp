#include "qcf/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "qcf/axioms.hpp"
#include "qcf/error.hpp"
#include "qcf/model_finder.hpp"
#include "qcf/order_algebra.hpp"
#include "qcf/syntax.hpp"
#include "qcf/weak_structure.hpp"

namespace qcf::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& outFile, std::ostream& out) {
  if (outFile.empty()) {
    out << text;
    return;
  }
  std::ofstream file(outFile, std::ios::binary);
  if (!file) throw Error("cannot write '" + outFile + "'");
  file << text;
}

std::string templateComments(const std::vector<std::pair<std::string, std::size_t>>& templates) {
  std::string out;
  for (const auto& [key, arity] : templates) {
    out += "# L* symbol " + templateRelationName(key) + " arity " + std::to_string(arity) + "\n";
  }
  return out;
}

}  // namespace

const std::vector<std::string>& relationCatalogue() {
  static const std::vector<std::string> names = {
      "connection",   "sparse",       "self",          "full",           "empty",
      "inverse-neg",  "composite",    "anti-sparse",   "lower-sparse",   "normal-direct",
      "normal-factored"};
  return names;
}

LazyRelation catalogueRelation(const std::string& name, const OrderExpr& x, const OrderExpr& y,
                               std::size_t bound) {
  if (name == "connection") return buildConnection(x, y);
  if (name == "sparse") return buildConnectionSparse(x, y);
  if (name == "self") {
    if (!(x == y)) throw OrderError("relation 'self' needs --x and --y to be the same order");
    return selfConnection(x);
  }
  if (name == "full") return fullRelation(x, y);
  if (name == "empty") return emptyRelation(x, y);
  if (name == "inverse-neg") return inverseNeg(buildConnection(y, x));
  if (name == "composite") return compose(buildConnection(x, y), selfConnection(y), bound);
  if (name == "anti-sparse") return antitoneClosure(buildConnectionSparse(x, y), bound);
  if (name == "lower-sparse") return monotoneLower(buildConnectionSparse(x, y), bound);
  if (name == "normal-direct") return normalizeMonotone(buildConnectionSparse(x, y), bound).direct;
  if (name == "normal-factored") {
    return normalizeMonotone(buildConnectionSparse(x, y), bound).factored;
  }
  throw OrderError("unknown relation '" + name + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Toolkit for first-order logic with the cofinality quantifier", "qcf"};
  app.require_subcommand(1);

  std::string theoryFile, fragFile, structureFile, outFile, cofSpec, xExpr, yExpr, relation;
  bool sa = false, sk = false, adapter = false, weak = false, cfinite = false, sparse = false;
  std::size_t maxSize = 0, bound = 0, check = 0;
  std::uint64_t budget = SearchConfig{}.nodeBudget;

  auto* parse = app.add_subcommand("parse", "Parse a theory and print its canonical form");
  parse->add_option("--theory", theoryFile, "Theory file")->required();

  auto* translate = app.add_subcommand("translate", "Replace Qcf subformulas by template atoms");
  translate->add_option("--theory", theoryFile, "Theory file")->required();
  translate->add_option("--out", outFile, "Output file");

  auto* axioms = app.add_subcommand("axioms", "Emit axiom instances for a fragment");
  axioms->add_option("--frag", fragFile, "Fragment file")->required();
  axioms->add_flag("--sa", sa, "Order and no-connection axioms");
  axioms->add_flag("--sk", sk, "Explicit connecting symbols");
  axioms->add_flag("--adapter", adapter, "Domain adapter symbols");
  axioms->add_option("--out", outFile, "Output file");

  auto* eval = app.add_subcommand("eval", "Evaluate a theory on a finite structure");
  eval->add_option("--theory", theoryFile, "Theory file")->required();
  eval->add_option("--structure", structureFile, "Structure JSON file")->required();
  auto* weakFlag = eval->add_flag("--weak", weak, "Weak semantics");
  auto* cfiniteFlag = eval->add_flag("--cfinite", cfinite, "Cofinality semantics");
  auto* cofOpt = eval->add_option("--cof", cofSpec, "Cofinality class, e.g. omega,aleph1");
  weakFlag->excludes(cfiniteFlag);
  cofOpt->needs(cfiniteFlag);

  auto* find = app.add_subcommand("find-model", "Search for a finite weak model");
  find->add_option("--theory", theoryFile, "Theory file")->required();
  find->add_option("--frag", fragFile, "Fragment file")->required();
  find->add_option("--max-size", maxSize, "Largest domain size")->required()->check(
      CLI::PositiveNumber);
  find->add_option("--budget", budget, "Decision budget (0 = unlimited)");

  auto* orderCf = app.add_subcommand("order-cf", "Cofinality of an order expression");
  orderCf->add_option("--x", xExpr, "Order expression")->required();

  auto* orderConnect = app.add_subcommand("order-connect", "Decide and check a connection");
  orderConnect->add_option("--x", xExpr, "Order expression")->required();
  orderConnect->add_option("--y", yExpr, "Order expression")->required();
  orderConnect->add_flag("--sparse", sparse, "Use the sparse construction");
  auto* checkOpt = orderConnect->add_option("--check", check, "Bound for checking (1) and (2)");

  auto* orderCheck = app.add_subcommand("order-check", "Check a catalogue relation");
  orderCheck->add_option("--x", xExpr, "Order expression")->required();
  orderCheck->add_option("--y", yExpr, "Order expression")->required();
  orderCheck->add_option("--relation", relation, "Relation name")
      ->required()
      ->check(CLI::IsMember(relationCatalogue()));
  orderCheck->add_option("--bound", bound, "Search bound")->required();

  std::vector<std::string> argvStore{"qcf"};
  argvStore.insert(argvStore.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argvStore) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (axioms->parsed() && !sa && !sk && !adapter) {
      throw UsageError("axioms needs at least one of --sa, --sk, --adapter");
    }
    if (eval->parsed()) {
      if (!weak && !cfinite) throw UsageError("eval needs --weak or --cfinite");
      if (cfinite && cofSpec.empty()) throw UsageError("--cfinite needs --cof");
    }
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (parse->parsed()) {
      out << formatTheory(loadTheory(theoryFile));
    } else if (translate->parsed()) {
      const Theory theory = loadTheory(theoryFile);
      std::string text = formatSignatureHeader(theory.signature);
      std::string body;
      for (const auto& s : theory.sentences) body += print(translateToFO(s)) + "\n";
      const auto templates = requiredTemplates(theory, Fragment{});
      emit(text + templateComments(templates) + body, outFile, out);
    } else if (axioms->parsed()) {
      const FragmentFile frag = loadFragment(fragFile);
      AxiomSet set;
      if (sa) set.append(genSA(frag.fragment));
      if (sk) set.append(genSK(frag.fragment, frag.signature.merged(set.extension)));
      if (adapter) set.append(genDomainAdapter(frag.fragment, frag.signature.merged(set.extension)));
      emit(formatAxiomFile(frag.signature, set), outFile, out);
    } else if (eval->parsed()) {
      const Theory theory = loadTheory(theoryFile);
      std::vector<QcfTemplate> templates;
      for (const auto& s : theory.sentences) {
        for (const auto& t : qcfTemplates(s)) templates.push_back(t);
      }
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(readTextFile(structureFile));
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("structure file: ") + e.what(), 1, 1);
      }
      const WeakStructure m = structureFromJson(j, theory.signature, templates);
      m.validate(theory.signature);
      std::optional<CofinalitySpec> c;
      if (cfinite) {
        c = CofinalitySpec::parse(cofSpec);
        if (!c->nonEmpty() || !c->notAll()) {
          err << "warning: cofinality class " << c->str()
              << " should be nonempty and different from the class of all regular cardinals\n";
        }
      }
      for (std::size_t i = 0; i < theory.sentences.size(); ++i) {
        const auto& s = theory.sentences[i];
        const bool value = c ? evalCFinite(m, s, *c) : evalWeak(m, s);
        out << (value ? "true" : "false") << "  " << print(s) << "\n";
      }
    } else if (find->parsed()) {
      const Theory theory = loadTheory(theoryFile);
      const FragmentFile frag = loadFragment(fragFile);
      SearchConfig cfg;
      cfg.maxSize = maxSize;
      cfg.nodeBudget = budget;
      const SearchResult result = findWeakModel(theory, frag.fragment, cfg);
      out << result.token() << "\n";
      if (result.model) {
        const ModelReport report = verifyFoundModel(*result.model, theory, frag.fragment);
        out << toJson(*result.model).dump(2) << "\n";
        out << "verified: " << (report.ok() ? "yes" : "no") << "\n";
      }
    } else if (orderCf->parsed()) {
      out << OrderExpr::parse(xExpr).cofinality().str() << "\n";
    } else if (orderConnect->parsed()) {
      const OrderExpr x = OrderExpr::parse(xExpr);
      const OrderExpr y = OrderExpr::parse(yExpr);
      out << "cf(x): " << x.cofinality().str() << "\n";
      out << "cf(y): " << y.cofinality().str() << "\n";
      const bool connected = connectedDecision(x, y);
      out << "connected: " << (connected ? "true" : "false") << "\n";
      if (checkOpt->count() > 0 && connected) {
        const LazyRelation g = sparse ? buildConnectionSparse(x, y) : buildConnection(x, y);
        const PropertyVerdicts v = checkConnection(g, check);
        out << "property1: " << v.first.token() << "\n";
        out << "property2: " << v.second.token() << "\n";
      }
    } else if (orderCheck->parsed()) {
      const OrderExpr x = OrderExpr::parse(xExpr);
      const OrderExpr y = OrderExpr::parse(yExpr);
      const LazyRelation g = catalogueRelation(relation, x, y, bound);
      const PropertyVerdicts p = checkConnection(g, bound);
      const PropertyVerdicts q = checkConditions34(g, bound);
      out << "property1: " << p.first.token() << "\n";
      out << "property2: " << p.second.token() << "\n";
      out << "condition3: " << q.first.token() << "\n";
      out << "condition4: " << q.second.token() << "\n";
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qcf::cli
