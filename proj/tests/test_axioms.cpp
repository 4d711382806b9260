#include <gtest/gtest.h>

#include <set>

#include "qcf/axioms.hpp"
#include "qcf/error.hpp"
#include "qcf/weak_structure.hpp"
#include "support/generators.hpp"

using namespace qcf;

namespace {

std::string golden(const std::string& name) {
  return readTextFile(std::string(QCF_TEST_DATA) + "/golden/" + name);
}

FragmentFile fragment(const std::string& name) {
  return loadFragment(std::string(QCF_TEST_DATA) + "/golden/" + name);
}

Signature lessG() {
  Signature s;
  s.addRelation("<", 2);
  s.addRelation("G", 2);
  return s;
}

std::vector<Formula> conjuncts(const Formula& f) {
  if (f.kind() != FormulaKind::And) return {f};
  auto out = conjuncts(f.lhs());
  out.push_back(f.rhs());
  return out;
}

std::set<std::string> tags(const AxiomSet& set) {
  std::set<std::string> out;
  for (const auto& a : set.axioms) out.insert(a.tag() + " " + print(a.sentence));
  return out;
}

}  // namespace

TEST(LinOrder, StrictOrderConjuncts) {
  const Signature s = lessG();
  const Formula f = linOrderNoLastSentence({parseFormula("x < y", s)});
  const auto parts = conjuncts(f);
  ASSERT_EQ(parts.size(), 4u);
  EXPECT_EQ(print(parts[0]), "forall x. ~(x < x)");
  EXPECT_EQ(print(parts[3]), "forall x. exists y. x < y");

  WeakStructure m(2);
  m.setRelation("<", 2, {{0, 1}});
  EXPECT_TRUE(evalWeak(m, parts[0]));
  EXPECT_TRUE(evalWeak(m, parts[1]));
  EXPECT_TRUE(evalWeak(m, parts[2]));
  EXPECT_FALSE(evalWeak(m, parts[3]));
}

TEST(LinOrder, EqualityIsNeverAnOrder) {
  const Formula f = linOrderNoLastSentence({parseFormula("x = y", lessG())});
  for (std::size_t n = 1; n <= 3; ++n) {
    WeakStructure m(n);
    m.setRelation("<", 2, {});
    EXPECT_FALSE(evalWeak(m, f));
  }
}

TEST(Connection, GoldenExpansion) {
  const Signature s = lessG();
  const BinaryTemplate lt{parseFormula("x < y", s)};
  const BinaryTemplate g{parseFormula("G(x, y)", s)};
  EXPECT_EQ(print(connectionSentence(g, lt, lt)) + "\n", golden("connection_lt_G.txt"));

  const BinaryTemplate leq = reflexiveClosure(lt);
  const Formula inner =
      expandCofinalMacro(CofinalKind::ForallCofinal, "y", parseFormula("G(x, y)", s), leq);
  EXPECT_EQ(print(expandCofinalMacro(CofinalKind::ExistsCofinal, "x", inner, leq)) + "\n",
            golden("double_macro.txt"));
}

TEST(Connection, SelfConnectionFailsOnFiniteOrders) {
  // With a last element, (1) holds for x <= y but (2) needs a y above it.
  const Signature s = lessG();
  const BinaryTemplate lt{parseFormula("x < y", s)};
  const BinaryTemplate le = reflexiveClosure(lt);
  const Formula f = connectionSentence(le, lt, lt);
  for (std::size_t n = 1; n <= 4; ++n) {
    WeakStructure m(n);
    std::vector<Tuple> tuples;
    for (Element a = 0; a < n; ++a) {
      for (Element b = a + 1; b < n; ++b) tuples.push_back({a, b});
    }
    m.setRelation("<", 2, tuples);
    m.setRelation("G", 2, {});
    EXPECT_FALSE(evalWeak(m, f)) << n;  // (2) fails: no y beyond the last element
  }
}

TEST(GenSA, GoldenFiles) {
  for (const std::string name : {"lt", "lt_gamma", "lt_param"}) {
    const FragmentFile frag = fragment(name + ".frag");
    EXPECT_EQ(formatAxiomFile(frag.signature, genSA(frag.fragment)), golden(name + ".sa.axioms"))
        << name;
  }
}

TEST(GenSA, Counts) {
  EXPECT_EQ(genSA(fragment("lt.frag").fragment).axioms.size(), 1u);
  const AxiomSet withGamma = genSA(fragment("lt_gamma.frag").fragment);
  ASSERT_EQ(withGamma.axioms.size(), 2u);
  EXPECT_EQ(withGamma.axioms[0].schema, Schema::SAOrder);
  EXPECT_EQ(withGamma.axioms[1].schema, Schema::SANoConnection);
  EXPECT_TRUE(genSA(Fragment{}).axioms.empty());
}

TEST(GenSA, Monotone) {
  const Signature s = lessG();
  Fragment small;
  small.addOrder(parseFormula("x < y", s));
  Fragment large = small;
  large.addOrder(parseFormula("y < x", s));
  large.addConnection(parseFormula("G(x, y)", s));
  const auto a = tags(genSA(small));
  const auto b = tags(genSA(large));
  for (const auto& t : a) EXPECT_TRUE(b.count(t)) << t;
  EXPECT_GT(b.size(), a.size());
}

TEST(GenSA, DuplicateTemplatesCollapse) {
  const Signature s = lessG();
  Fragment frag;
  frag.addOrder(parseFormula("x < y", s));
  frag.addOrder(parseFormula("x < y", s));
  EXPECT_EQ(frag.orders.size(), 1u);
}

TEST(GenSA, SoundOnPlainFiniteStructures) {
  const FragmentFile frag = fragment("lt_gamma.frag");
  const AxiomSet set = genSA(frag.fragment);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto tables = qcf::testing::allBinaryTables(n);
    for (std::size_t t = 0; t < tables.size(); ++t) {
      WeakStructure m(n);
      m.setRelationBits("<", 2, tables[t]);
      m.setRelationBits("G", 2, tables[(t * 7 + 3) % tables.size()]);
      for (const auto& tmpl : frag.fragment.orders) m.setQcfTable(tmpl.key, tmpl.arity, {});
      for (const auto& s : set.sentences()) ASSERT_TRUE(evalWeak(m, s)) << print(s);
    }
  }
}

TEST(GenSK, ArityAndGolden) {
  const FragmentFile lt = fragment("lt.frag");
  const AxiomSet a = genSK(lt.fragment, lt.signature);
  ASSERT_EQ(a.axioms.size(), 1u);
  ASSERT_EQ(a.extension.relations().size(), 1u);
  EXPECT_EQ(a.extension.relations()[0].arity, 2u);
  EXPECT_EQ(formatAxiomFile(lt.signature, a), golden("lt.sk.axioms"));

  const FragmentFile param = fragment("lt_param.frag");
  const AxiomSet b = genSK(param.fragment, param.signature);
  ASSERT_EQ(b.extension.relations().size(), 1u);
  EXPECT_EQ(b.extension.relations()[0].arity, 4u);
  EXPECT_EQ(formatAxiomFile(param.signature, b), golden("lt_param.sk.axioms"));
}

TEST(GenSK, NameClash) {
  FragmentFile lt = fragment("lt.frag");
  lt.signature.addRelation("V_1", 2);
  EXPECT_THROW(genSK(lt.fragment, lt.signature), SignatureError);
}

TEST(Adapter, GoldenAndShape) {
  const FragmentFile lt = fragment("lt.frag");
  const AxiomSet a = genDomainAdapter(lt.fragment, lt.signature);
  ASSERT_EQ(a.axioms.size(), 1u);
  ASSERT_EQ(a.extension.relations().size(), 2u);
  for (const auto& r : a.extension.relations()) EXPECT_EQ(r.arity, 2u);
  EXPECT_EQ(formatAxiomFile(lt.signature, a), golden("lt.adapter.axioms"));
  EXPECT_TRUE(genDomainAdapter(Fragment{}, lt.signature).extension.relations().empty());

  const FragmentFile param = fragment("lt_param.frag");
  EXPECT_EQ(formatAxiomFile(param.signature, genDomainAdapter(param.fragment, param.signature)),
            golden("lt_param.adapter.axioms"));
}

TEST(Adapter, RelativizedToDomain) {
  // Domain of phi is {0, 1} in the first structure and {0} in the second;
  // a non-transitive order fails, and a finite domain has a last element.
  const FragmentFile lt = fragment("lt.frag");
  const Formula phi = lt.fragment.orders[0].formula();
  const UnaryTemplate domain{Formula::exists("y", phi), "x"};
  const Formula rel = linOrderNoLastOnDomain({phi}, domain);
  WeakStructure m(3);
  m.setRelation("<", 2, {{0, 1}, {1, 0}});
  EXPECT_FALSE(evalWeak(m, rel));
  m.setRelation("<", 2, {{0, 1}});
  EXPECT_FALSE(evalWeak(m, rel));
}

TEST(Reduce, Counts) {
  EXPECT_TRUE(reduceToWeak(Theory{}, Fragment{}).sentences.empty());
  const Theory t = parseTheory("rel < 2\nbegin\nQcf x y. x < y\n");
  EXPECT_EQ(reduceToWeak(t, fragment("lt.frag").fragment).sentences.size(), 2u);
}

TEST(AxiomFile, Deterministic) {
  const FragmentFile f = fragment("lt_gamma.frag");
  AxiomSet a = genSA(f.fragment);
  a.append(genSK(f.fragment, f.signature));
  AxiomSet b = genSA(f.fragment);
  b.append(genSK(f.fragment, f.signature));
  EXPECT_EQ(formatAxiomFile(f.signature, a), formatAxiomFile(f.signature, b));
  const Theory again = parseTheory(formatAxiomFile(f.signature, a));
  EXPECT_EQ(again.sentences.size(), a.axioms.size());
}
