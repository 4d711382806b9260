#include <gtest/gtest.h>

#include <random>

#include "qcf/axioms.hpp"
#include "qcf/error.hpp"
#include "qcf/syntax.hpp"
#include "qcf/weak_structure.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace qcf;
using qcf::testing::OracleEvaluator;

namespace {

Signature lessSignature() {
  Signature s;
  s.addRelation("<", 2);
  return s;
}

Formula parse(const std::string& text) { return parseFormula(text, lessSignature()); }

WeakStructure strictOrder(std::size_t n) {
  WeakStructure m(n);
  std::vector<Tuple> tuples;
  for (Element a = 0; a < n; ++a) {
    for (Element b = a + 1; b < n; ++b) tuples.push_back({a, b});
  }
  m.setRelation("<", 2, tuples);
  return m;
}

}  // namespace

TEST(EvalWeak, QcfReadsOnlyTheTable) {
  const Formula f = parse("Qcf x y. x < y");
  const std::string key = f.qcfTemplate().key;
  for (std::size_t n = 1; n <= 3; ++n) {
    WeakStructure m = strictOrder(n);
    m.setQcfTable(key, 0, {{}});
    EXPECT_TRUE(evalWeak(m, f));
    m.setRelation("<", 2, {});
    EXPECT_TRUE(evalWeak(m, f));
    m.setQcfTable(key, 0, {});
    EXPECT_FALSE(evalWeak(m, f));
  }
}

TEST(EvalWeak, MissingTableIsAnError) {
  const WeakStructure m = strictOrder(2);
  EXPECT_THROW(evalWeak(m, parse("Qcf x y. x < y")), EvalError);
  EXPECT_THROW(evalWeak(m, parse("x < y")), EvalError);
}

TEST(EvalWeak, ParametersIndexTheTable) {
  Signature s;
  s.addRelation("R", 3);
  const Formula f = parseFormula("forall z. Qcf x y. R(x, y, z)", s);
  const Formula g = parseFormula("exists z. Qcf x y. R(x, y, z)", s);
  WeakStructure m(2);
  m.setRelation("R", 3, {});
  m.setQcfTable(f.body().qcfTemplate().key, 1, {{1}});
  EXPECT_FALSE(evalWeak(m, f));
  EXPECT_TRUE(evalWeak(m, g));
}

TEST(EvalWeak, FirstOrderAgreesWithOracle) {
  const auto formulas = qcf::testing::enumerateBinaryFormulas(2);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto tables = qcf::testing::allBinaryTables(n);
    for (std::size_t t = 0; t < tables.size(); t += n == 3 ? 37 : 1) {
      WeakStructure m(n);
      m.setRelationBits("R", 2, tables[t]);
      const OracleEvaluator oracle(m);
      for (std::size_t i = 0; i < formulas.size(); i += 7) {
        const Formula& f = formulas[i];
        if (!qcfTemplates(f).empty()) continue;
        for (Element a = 0; a < n; ++a) {
          for (Element b = 0; b < n; ++b) {
            const Assignment env{{"x", a}, {"y", b}};
            ASSERT_EQ(evalWeak(m, f, env), oracle(f, {env.begin(), env.end()})) << print(f);
          }
        }
      }
    }
  }
}

TEST(Translate, Examples) {
  const Formula f = translateToFO(parse("~Qcf x y. x < y"));
  EXPECT_EQ(print(f), "~R{x < y}");
  const Formula fo = parse("forall x. exists y. x < y");
  EXPECT_EQ(translateToFO(fo), fo);
}

TEST(Translate, NestedGolden) {
  Signature s;
  s.addRelation("<", 2);
  s.addRelation("R", 3);
  const Formula f = parseFormula("Qcf x y. (x < y & Qcf u v. R(u, v, x))", s);
  const std::string golden = readTextFile(QCF_TEST_DATA "/golden/nested_translate.txt");
  EXPECT_EQ(print(translateToFO(f)) + "\n", golden);
}

TEST(Translate, PreservesWeakTruth) {
  qcf::testing::FormulaGenerator gen(5);
  std::mt19937_64 rng(99);
  const Signature sig = qcf::testing::mixedSignature();
  for (int i = 0; i < 300; ++i) {
    const Formula f = gen.formula(4);
    const std::size_t n = 1 + rng() % 3;
    WeakStructure m(n);
    auto bits = [&](std::size_t count) {
      std::vector<std::uint8_t> b(count);
      for (auto& v : b) v = rng() & 1;
      return b;
    };
    m.setRelationBits("P", 1, bits(n));
    m.setRelationBits("R", 2, bits(n * n));
    m.setRelationBits("S", 3, bits(n * n * n));
    std::vector<Element> f1(n), g2(n * n);
    for (auto& v : f1) v = rng() % n;
    for (auto& v : g2) v = rng() % n;
    m.setFunction("f", 1, f1);
    m.setFunction("g", 2, g2);
    m.setConstant("c", rng() % n);
    m.setConstant("d", rng() % n);
    for (const auto& t : qcfTemplates(f)) m.setQcfBits(t.key, t.arity, bits(power(n, t.arity)));
    Assignment env;
    for (const char* v : {"x", "y", "z", "u", "v"}) env[v] = rng() % n;
    const Formula g = translateToFO(f);
    EXPECT_TRUE(qcfTemplates(g).empty());
    const bool expected = evalWeak(m, f, env);
    EXPECT_EQ(evalWeak(m, g, env), expected) << print(f);
    EXPECT_EQ(OracleEvaluator(m)(g, {env.begin(), env.end()}), expected) << print(f);
  }
}

TEST(EvalCFinite, QcfIsFalseOnFiniteStructures) {
  const Formula f = parse("Qcf x y. x < y");
  for (std::size_t n = 1; n <= 3; ++n) {
    const WeakStructure m = strictOrder(n);
    EXPECT_FALSE(evalCFinite(m, f, CofinalitySpec::only({"omega"})));
    EXPECT_FALSE(evalCFinite(m, f, CofinalitySpec::allExcept({})));
    EXPECT_TRUE(evalCFinite(m, parse("~Qcf x y. x < y"), CofinalitySpec::only({"omega"})));
  }
}

TEST(EvalCFinite, FirstOrderRecursion) {
  const WeakStructure m = strictOrder(2);
  const Formula f = parse("forall x. exists y. ~(y < x) & ~(x = y) -> x < y");
  EXPECT_EQ(evalCFinite(m, f, CofinalitySpec::only({"omega"})), evalWeak(m, f));
}

TEST(EvalCFinite, MatchesAllFalseExpansion) {
  const auto formulas = qcf::testing::enumerateBinaryFormulas(2);
  const CofinalitySpec c = CofinalitySpec::only({"omega"});
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto tables = qcf::testing::allBinaryTables(n);
    for (std::size_t t = 0; t < tables.size(); t += n == 3 ? 17 : 1) {
      WeakStructure plain(n);
      plain.setRelationBits("R", 2, tables[t]);
      for (std::size_t i = 0; i < formulas.size(); i += 5) {
        const Formula& f = formulas[i];
        WeakStructure weak = plain;
        for (const auto& tmpl : qcfTemplates(f)) weak.setQcfTable(tmpl.key, tmpl.arity, {});
        const Assignment env{{"x", 0}, {"y", static_cast<Element>(n - 1)}};
        ASSERT_EQ(evalCFinite(plain, f, c, env), evalWeak(weak, f, env)) << print(f);
      }
    }
  }
}

TEST(ClassifyFiniteOrder, Shapes) {
  EXPECT_EQ(classifyFiniteOrder({}, 0), FiniteOrderShape::Empty);
  EXPECT_EQ(classifyFiniteOrder({0, 1, 0, 0}, 2), FiniteOrderShape::HasLast);
  EXPECT_EQ(classifyFiniteOrder({0, 1, 1, 0}, 2), FiniteOrderShape::NotLinear);
  EXPECT_EQ(classifyFiniteOrder({0, 0, 0, 0}, 2), FiniteOrderShape::NotLinear);
  EXPECT_EQ(classifyFiniteOrder({0}, 1), FiniteOrderShape::HasLast);
}

TEST(CofinalitySpec, ParseAndFlags) {
  const CofinalitySpec a = CofinalitySpec::parse("omega,aleph1");
  EXPECT_TRUE(a.contains("omega"));
  EXPECT_TRUE(a.contains("aleph1"));
  EXPECT_FALSE(a.contains("aleph2"));
  EXPECT_TRUE(a.nonEmpty());
  EXPECT_TRUE(a.notAll());

  const CofinalitySpec b = CofinalitySpec::parse("all-except:omega");
  EXPECT_TRUE(b.complemented());
  EXPECT_FALSE(b.contains("omega"));
  EXPECT_TRUE(b.contains("aleph7"));

  const CofinalitySpec all = CofinalitySpec::allExcept({});
  EXPECT_FALSE(all.notAll());
  EXPECT_FALSE(CofinalitySpec::only({}).nonEmpty());

  const std::vector<std::string> universe = {"omega", "aleph1"};
  EXPECT_FALSE(a.notAll(&universe));
  EXPECT_FALSE(CofinalitySpec::allExcept({"omega", "aleph1"}).nonEmpty(&universe));
}

TEST(Coherence, Examples) {
  Fragment frag;
  frag.addOrder(parse("x < y"));
  const std::string key = frag.orders[0].key;

  WeakStructure one(1);
  one.setRelation("<", 2, {});
  one.setQcfTable(key, 0, {});
  EXPECT_TRUE(verifyFiniteCCoherence(one, frag).coherent());

  WeakStructure bad = strictOrder(2);
  bad.setQcfTable(key, 0, {{}});
  const CoherenceReport r = verifyFiniteCCoherence(bad, frag);
  EXPECT_FALSE(r.coherent());
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].key, key);
  EXPECT_FALSE(r.saHolds);
}

TEST(Json, RoundTrip) {
  Signature s;
  s.addRelation("<", 2);
  s.addFunction("f", 1);
  s.addConstant("c");
  WeakStructure m = strictOrder(3);
  m.setFunction("f", 1, {1, 2, 2});
  m.setConstant("c", 2);
  m.setQcfTable("x < y", 0, {{}});
  const nlohmann::json j = toJson(m);
  EXPECT_EQ(j["size"], 3);
  EXPECT_EQ(structureFromJson(j, s), m);
}

TEST(Json, RejectsBadStructures) {
  const Signature s = lessSignature();
  EXPECT_THROW(structureFromJson(nlohmann::json::parse(R"({"size": 2, "relations": {"<": [[0, 2]]}})"), s),
               Error);
  Signature f;
  f.addFunction("f", 1);
  EXPECT_THROW(
      structureFromJson(nlohmann::json::parse(R"({"size": 2, "functions": {"f": [[0, 1]]}})"), f)
          .validate(f),
      Error);
}
