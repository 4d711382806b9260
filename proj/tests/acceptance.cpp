// Acceptance runner: one PASS/FAIL line per criterion, time limits pinned below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "qcf/axioms.hpp"
#include "qcf/error.hpp"
#include "qcf/model_finder.hpp"
#include "qcf/order_algebra.hpp"
#include "qcf/syntax.hpp"
#include "qcf/weak_structure.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace qcf;
namespace fs = std::filesystem;

namespace {

const std::string kData = QCF_TEST_DATA;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int number;
  const char* name;
  double limitSeconds;
  std::function<Outcome()> body;
};


// 1. Parser round trip.
Outcome parserRoundTrip() {
  qcf::testing::FormulaGenerator gen(20261019);
  const Signature sig = qcf::testing::mixedSignature();
  int failures = 0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    const Formula f = gen.formula(6);
    const std::string text = print(f);
    bool ok = false;
    try {
      ok = alphaEquivalent(f, parseFormula(text, sig));
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      if (failures++ == 0) first = text;
    }
  }
  return {failures == 0, "1000 formulas, depth <= 6, failures=" + std::to_string(failures) +
                             (first.empty() ? "" : " first: " + first)};
}

// 2. Translation soundness.
Outcome translationSoundness() {
  const auto formulas = qcf::testing::enumerateBinaryFormulas(3);
  std::vector<std::vector<std::vector<std::uint8_t>>> tables = {
      {}, qcf::testing::allBinaryTables(1), qcf::testing::allBinaryTables(2)};
  const auto size3 = qcf::testing::allBinaryTables(3);
  std::mt19937_64 rng(42);
  std::vector<std::vector<std::uint8_t>> sampled;
  for (int i = 0; i < 500; ++i) sampled.push_back(size3[rng() % size3.size()]);

  std::size_t checks = 0, mismatches = 0;
  std::string first;
  auto check = [&](const WeakStructure& m, const Formula& f, const Formula& g) {
    const qcf::testing::OracleEvaluator oracle(m);
    const std::size_t n = m.size();
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        const Assignment env{{"x", a}, {"y", b}};
        const bool expected = evalWeak(m, f, env);
        ++checks;
        if (evalWeak(m, g, env) != expected || oracle(g, {env.begin(), env.end()}) != expected) {
          if (mismatches++ == 0) first = print(f);
        }
      }
    }
  };

  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const Formula& f = formulas[i];
    const Formula g = translateToFO(f);
    const auto templates = qcfTemplates(f);
    const std::size_t choices = std::size_t{1} << templates.size();
    for (std::size_t n = 1; n <= 2; ++n) {
      for (const auto& bits : tables[n]) {
        for (std::size_t q = 0; q < choices; ++q) {
          WeakStructure m(n);
          m.setRelationBits("R", 2, bits);
          for (std::size_t t = 0; t < templates.size(); ++t) {
            m.setQcfBits(templates[t].key, 0, {static_cast<std::uint8_t>((q >> t) & 1)});
          }
          check(m, f, g);
        }
      }
    }
    WeakStructure m(3);
    m.setRelationBits("R", 2, sampled[i % sampled.size()]);
    for (const auto& t : templates) {
      m.setQcfBits(t.key, 0, {static_cast<std::uint8_t>(rng() & 1)});
    }
    check(m, f, g);
  }
  return {mismatches == 0, std::to_string(formulas.size()) + " formulas, " +
                               std::to_string(checks) + " evaluations, mismatches=" +
                               std::to_string(mismatches) + (first.empty() ? "" : " first: " + first)};
}


// 3. Finite C-triviality and the all-false expansion.
Outcome finiteTriviality() {
  const auto bodies = qcf::testing::enumerateBinaryFormulas(1);
  const std::vector<CofinalitySpec> classes = {CofinalitySpec::only({"omega"}),
                                               CofinalitySpec::only({"aleph1"}),
                                               CofinalitySpec::allExcept({"omega"})};
  const FragmentFile frag = parseFragment("rel R 2\nrel G 2\nbegin\norder: R(x, y)\nconn: G(x, y)\n");
  const FragmentFile lt = parseFragment("rel R 2\nbegin\norder: R(x, y)\n");
  const std::vector<Formula> axioms = genSA(frag.fragment).sentences();
  const std::vector<Formula> ltAxioms = genSA(lt.fragment).sentences();
  std::size_t structures = 0, qcfChecks = 0, violations = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto tables = qcf::testing::allBinaryTables(n);
    for (std::size_t t = 0; t < tables.size(); ++t) {
      ++structures;
      WeakStructure m(n);
      m.setRelationBits("R", 2, tables[t]);
      for (const Formula& body : bodies) {
        for (const auto& [u, v] : {std::pair{"x", "y"}, std::pair{"y", "x"}}) {
          const Formula node = Formula::qcf(u, v, body);
          for (Element a = 0; a < n; ++a) {
            for (Element b = 0; b < n; ++b) {
              const Assignment env{{"x", a}, {"y", b}};
              for (const auto& c : classes) {
                ++qcfChecks;
                if (evalCFinite(m, node, c, env)) ++violations;
              }
            }
          }
        }
        // The defined relation itself is never an endless linear order.
        std::vector<std::uint8_t> rel(n * n);
        for (Element a = 0; a < n; ++a) {
          for (Element b = 0; b < n; ++b) {
            rel[a * n + b] = evalCFinite(m, body, classes[0], {{"x", a}, {"y", b}});
          }
        }
        if (qcf::testing::isEndlessLinearOrder(rel, n)) ++violations;
      }
      WeakStructure expanded = m;
      for (const auto& tmpl : frag.fragment.orders) expanded.setQcfTable(tmpl.key, tmpl.arity, {});
      for (const Formula& s : ltAxioms) violations += !evalWeak(expanded, s);
      for (std::size_t g = 0; g < tables.size(); g += n == 3 ? 97 : 1) {
        expanded.setRelationBits("G", 2, tables[g]);
        for (const Formula& s : axioms) violations += !evalWeak(expanded, s);
      }
    }
  }
  return {violations == 0, std::to_string(structures) + " structures, " +
                               std::to_string(qcfChecks) + " qcf evaluations, violations=" +
                               std::to_string(violations)};
}

const std::vector<std::string> kOrders = {"omega", "omega + omega", "fin(3) + omega",
                                          "omega + fin(2) + omega"};

bool lexLeq(const OrderElement& a, const OrderElement& b) {
  return a.block != b.block ? a.block < b.block : a.index <= b.index;
}

OrderElement sampleElement(const OrderExpr& o, std::mt19937_64& rng) {
  const std::size_t block = rng() % o.blocks().size();
  const OrderBlock& b = o.blocks()[block];
  return {block, static_cast<std::size_t>(rng() % (b.kind == OrderBlock::Kind::Fin ? b.length : 150))};
}

// 4. Connections between the catalogue orders.
Outcome connectionConstructions() {
  constexpr std::size_t kBound = 200;
  std::mt19937_64 rng(4);
  std::size_t refuted = 0, mismatches = 0, pairs = 0;
  std::string verdicts;
  for (const auto& xs : kOrders) {
    for (const auto& ys : kOrders) {
      const OrderExpr x = OrderExpr::parse(xs), y = OrderExpr::parse(ys);
      const std::size_t lastX = x.blocks().size() - 1, lastY = y.blocks().size() - 1;
      for (const bool sparse : {false, true}) {
        const LazyRelation g = sparse ? buildConnectionSparse(x, y) : buildConnection(x, y);
        const PropertyVerdicts v = checkConnection(g, kBound);
        for (const Verdict* p : {&v.first, &v.second}) {
          if (p->kind == Verdict::Kind::RefutedAt) ++refuted;
          if (p->kind != Verdict::Kind::ExactTrue) verdicts += " " + g.name + ":" + p->token();
        }
        for (int i = 0; i < 500; ++i) {
          const OrderElement a = sampleElement(x, rng), b = sampleElement(y, rng);
          bool expected = false;
          for (std::size_t n = 0; n <= kBound && !expected; ++n) {
            const OrderElement xn{lastX, n}, yn{lastY, n};
            expected = (sparse ? a == xn : lexLeq(a, xn)) && lexLeq(yn, b);
          }
          ++pairs;
          if (g(a, b) != (expected ? Truth::True : Truth::False)) ++mismatches;
        }
      }
    }
  }
  return {refuted == 0 && mismatches == 0,
          "32 relations at bound 200, refuted=" + std::to_string(refuted) + ", membership pairs=" +
              std::to_string(pairs) + ", mismatches=" + std::to_string(mismatches) +
              (verdicts.empty() ? ", all verdicts EXACT_TRUE" : ", non-exact:" + verdicts)};
}

// 5. Combinator identities.
Outcome combinatorIdentities() {
  std::mt19937_64 rng(5);
  const OrderExpr x = OrderExpr::parse("fin(3) + omega"), y = OrderExpr::parse("omega + omega");
  const std::vector<LazyRelation> relations = {
      buildConnection(x, y),        buildConnectionSparse(x, y),
      fullRelation(x, y),           emptyRelation(x, y),
      antitoneClosure(buildConnectionSparse(x, y), 200),
      monotoneLower(buildConnectionSparse(x, y), 200)};
  std::size_t involutionBad = 0, normalBad = 0, normalExact = 0, fixBad = 0, fixChecked = 0;
  for (const auto& g : relations) {
    const LazyRelation twice = inverseNeg(inverseNeg(g));
    for (int i = 0; i < 1000; ++i) {
      const OrderElement a = sampleElement(x, rng), b = sampleElement(y, rng);
      const Truth t = g(a, b), u = twice(a, b);
      if (definite(t) ? u != t : definite(u)) ++involutionBad;
    }
  }
  const NormalizedPair p = normalizeMonotone(buildConnectionSparse(x, y), 200);
  for (int i = 0; i < 1000; ++i) {
    const OrderElement a = sampleElement(x, rng), b = sampleElement(y, rng);
    const Truth d = p.direct(a, b), f = p.factored(a, b);
    if (definite(d) && definite(f)) {
      ++normalExact;
      if (d != f) ++normalBad;
    }
  }
  for (const auto& g : relations) {
    if (!g.monotoneY) continue;
    const LazyRelation low = monotoneLower(g, 200);
    for (int i = 0; i < 1000; ++i) {
      const OrderElement a = sampleElement(x, rng), b = sampleElement(y, rng);
      ++fixChecked;
      if (low(a, b) != g(a, b) || !definite(g(a, b))) ++fixBad;
    }
  }
  return {involutionBad == 0 && normalBad == 0 && fixBad == 0 && fixChecked > 0,
          "involution violations=" + std::to_string(involutionBad) + "/6000, normalize exact=" +
              std::to_string(normalExact) + "/1000 disagreements=" + std::to_string(normalBad) +
              ", fixpoint violations=" + std::to_string(fixBad) + "/" + std::to_string(fixChecked)};
}

// 6. Finder versus brute-force oracle on the committed fixtures.
Outcome finderOracle() {
  const std::string dir = kData + "/fixtures/finder";
  const FragmentFile frag = loadFragment(dir + "/frag.frag");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".thy") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::size_t agree = 0, found = 0;
  std::string bad;
  for (const auto& file : files) {
    const Theory t = loadTheory(file);
    SearchConfig cfg;
    cfg.maxSize = 3;
    const SearchResult a = findWeakModel(t, frag.fragment, cfg);
    const SearchResult b = bruteForceOracle(t, frag.fragment, 3);
    const bool same = a.kind == b.kind && a.size == b.size && a.model.has_value() == b.model.has_value() &&
                      (!a.model || *a.model == *b.model);
    if (same) ++agree; else bad += " " + file.filename().string();
    found += a.model.has_value();
  }
  return {files.size() == 20 && agree == files.size(),
          std::to_string(agree) + "/" + std::to_string(files.size()) + " theories agree (" +
              std::to_string(found) + " satisfiable)" + (bad.empty() ? "" : ", disagree:" + bad)};
}

// 7. Desk-scale reduction behaviour.
Outcome reductionBehaviour() {
  const Fragment frag = parseFragment("rel < 2\nbegin\norder: x < y\n").fragment;
  SearchConfig cfg;
  cfg.maxSize = 5;
  const SearchResult positive = findWeakModel(parseTheory("rel < 2\nbegin\nQcf x y. x < y\n"), frag, cfg);
  const Theory negTheory = parseTheory(
      "rel < 2\nbegin\n~Qcf x y. x < y\nforall x. ~(x < x)\n"
      "forall x. forall y. forall z. x < y & y < z -> x < z\n"
      "forall x. forall y. x < y | x = y | y < x\n");
  const SearchResult negative = findWeakModel(negTheory, frag, cfg);
  bool coherent = true;
  if (negative.model) {
    coherent = verifyFiniteCCoherence(*negative.model, frag).coherent() &&
               verifyFoundModel(*negative.model, negTheory, frag).ok();
  }
  const bool pass = positive.kind == SearchResult::Kind::Exhausted && positive.maxSize == 5 &&
                    negative.kind == SearchResult::Kind::Found && negative.size == 1 && coherent;
  return {pass, "positive: " + positive.token() + ", negative: " + negative.token() +
                    ", coherent=" + (coherent ? "yes" : "no")};
}

// 8. Golden axiom files.
Outcome goldenAxioms() {
  struct Case {
    std::string frag;
    std::string kind;
    std::size_t arity;  // of the first generated symbol, 0 when none
  };
  const std::vector<Case> cases = {{"lt", "sa", 0},      {"lt_gamma", "sa", 0}, {"lt_param", "sa", 0},
                                   {"lt", "sk", 2},      {"lt_param", "sk", 4}, {"lt", "adapter", 2},
                                   {"lt_param", "adapter", 3}};
  std::size_t ok = 0;
  std::string bad;
  for (const auto& c : cases) {
    const FragmentFile f = loadFragment(kData + "/golden/" + c.frag + ".frag");
    AxiomSet set;
    if (c.kind == "sa") set = genSA(f.fragment);
    if (c.kind == "sk") set = genSK(f.fragment, f.signature);
    if (c.kind == "adapter") set = genDomainAdapter(f.fragment, f.signature);
    const std::string expected =
        readTextFile(kData + "/golden/" + c.frag + "." + c.kind + ".axioms");
    bool good = formatAxiomFile(f.signature, set) == expected;
    if (c.arity != 0) {
      good = good && !set.extension.relations().empty() &&
             set.extension.relations()[0].arity == c.arity;
    }
    if (good) ++ok; else bad += " " + c.frag + "." + c.kind;
  }
  return {ok == cases.size(), std::to_string(ok) + "/" + std::to_string(cases.size()) +
                                  " files byte-identical" + (bad.empty() ? "" : ", differ:" + bad)};
}

// 9. Compactness harness on the "at least n elements" family.
Outcome compactness() {
  Theory t;
  for (std::size_t n = 1; n <= 5; ++n) {
    std::string text = "begin\n";
    for (std::size_t i = 1; i <= n; ++i) text += "exists v" + std::to_string(i) + ". ";
    std::string distinct = "v1 = v1";
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = i + 1; j <= n; ++j) {
        distinct += " & ~(v" + std::to_string(i) + " = v" + std::to_string(j) + ")";
      }
    }
    t.sentences.push_back(parseTheory(text + distinct + "\n").sentences[0]);
  }
  SearchConfig cfg;
  cfg.maxSize = 5;
  const CompactnessReport report = compactnessHarness(t, Fragment{}, 5, cfg);
  std::size_t ok = 0;
  for (const auto& e : report.entries) {
    // Sentence i asks for i + 1 elements, so the forced size is the largest index + 1.
    if (e.result.kind == SearchResult::Kind::Found && e.result.size == e.subset.back() + 1) ++ok;
  }
  return {report.entries.size() == 31 && ok == 31,
          std::to_string(ok) + "/" + std::to_string(report.entries.size()) +
              " subsets found at the forced size"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "parser round trip", 5.0, parserRoundTrip},
      {2, "translation soundness", 60.0, translationSoundness},
      {3, "finite C-triviality", 30.0, finiteTriviality},
      {4, "connection constructions", 60.0, connectionConstructions},
      {5, "combinator identities", 30.0, combinatorIdentities},
      {6, "finder/oracle equivalence", 60.0, finderOracle},
      {7, "reduction at desk scale", 60.0, reductionBehaviour},
      {8, "golden axiom files", 5.0, goldenAxioms},
      {9, "compactness harness", 60.0, compactness},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool inTime = seconds <= c.limitSeconds;
    const bool pass = o.pass && inTime;
    if (!pass) ++failed;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2f s / limit %.0f s", seconds, c.limitSeconds);
    std::cout << "criterion " << c.number << " [" << c.name << "]: " << (pass ? "PASS" : "FAIL")
              << " (" << timing << (inTime ? "" : ", over time limit") << ") " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
