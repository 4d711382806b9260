#include <gtest/gtest.h>

#include <filesystem>

#include "qcf/error.hpp"
#include "qcf/model_finder.hpp"

using namespace qcf;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = std::string(QCF_TEST_DATA) + "/fixtures/finder";

Fragment lessFragment() {
  return parseFragment("rel < 2\nbegin\norder: x < y\n").fragment;
}

std::vector<fs::path> fixtureTheories() {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(kFixtures)) {
    if (entry.path().extension() == ".thy") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void expectSameResult(const SearchResult& a, const SearchResult& b, const std::string& what) {
  EXPECT_EQ(a.kind, b.kind) << what;
  EXPECT_EQ(a.size, b.size) << what;
  ASSERT_EQ(a.model.has_value(), b.model.has_value()) << what;
  if (a.model) EXPECT_EQ(toJson(*a.model), toJson(*b.model)) << what;
}

Theory atLeast(std::size_t n) {
  std::string text = "begin\n";
  std::string body = "exists v1.";
  for (std::size_t i = 2; i <= n; ++i) body += " exists v" + std::to_string(i) + ".";
  std::string distinct;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      if (!distinct.empty()) distinct += " & ";
      distinct += "~(v" + std::to_string(i) + " = v" + std::to_string(j) + ")";
    }
  }
  if (distinct.empty()) distinct = "v1 = v1";
  return parseTheory(text + body + " " + distinct + "\n");
}

}  // namespace

TEST(Finder, QcfWithOrderAxiomsIsExhausted) {
  const Theory t = parseTheory("rel < 2\nbegin\nQcf x y. x < y\n");
  SearchConfig cfg;
  cfg.maxSize = 5;
  const SearchResult r = findWeakModel(t, lessFragment(), cfg);
  EXPECT_EQ(r.kind, SearchResult::Kind::Exhausted);
  EXPECT_EQ(r.token(), "EXHAUSTED max=5");
}

TEST(Finder, WithoutAxiomsTheQcfBitIsFree) {
  const Theory t = parseTheory("rel < 2\nbegin\nQcf x y. x < y\n");
  const SearchResult r = findWeakModel(t, Fragment{});
  ASSERT_EQ(r.kind, SearchResult::Kind::Found);
  EXPECT_EQ(r.size, 1u);
}

TEST(Finder, NegatedQcfWithStrictOrderAtSizeOne) {
  const Theory t = parseTheory(
      "rel < 2\nbegin\n~Qcf x y. x < y\nforall x. ~(x < x)\n"
      "forall x. forall y. forall z. x < y & y < z -> x < z\n"
      "forall x. forall y. x < y | x = y | y < x\n");
  const SearchResult r = findWeakModel(t, lessFragment());
  ASSERT_EQ(r.kind, SearchResult::Kind::Found);
  EXPECT_EQ(r.token(), "FOUND size=1");
  EXPECT_TRUE(verifyFoundModel(*r.model, t, lessFragment()).ok());
  EXPECT_TRUE(r.model->relation("<")->tuples(1).empty());
}

TEST(Finder, Unsatisfiable) {
  const Theory t = parseTheory("begin\nexists x. ~(x = x)\n");
  SearchConfig cfg;
  cfg.maxSize = 4;
  EXPECT_EQ(findWeakModel(t, Fragment{}, cfg).kind, SearchResult::Kind::Exhausted);
}

TEST(Finder, EmptyTheory) {
  const SearchResult r = findWeakModel(Theory{}, Fragment{});
  EXPECT_EQ(r.kind, SearchResult::Kind::Found);
  EXPECT_EQ(r.size, 1u);
  EXPECT_EQ(bruteForceOracle(Theory{}, Fragment{}, 3).size, 1u);
}

TEST(Finder, BudgetIsDistinctFromExhausted) {
  const Theory t = parseTheory(readTextFile(kFixtures + "/18_no_sink.thy"));
  SearchConfig cfg;
  cfg.maxSize = 3;
  cfg.nodeBudget = 1;
  const SearchResult r = findWeakModel(t, Fragment{}, cfg);
  EXPECT_EQ(r.kind, SearchResult::Kind::Budget);
  EXPECT_EQ(r.token().rfind("BUDGET size=", 0), 0u);
}

TEST(Finder, FunctionsAndConstants) {
  const Theory t = parseTheory(
      "fun f 1\nconst c\nconst d\nbegin\n~(c = d)\nforall x. ~(f(x) = x)\nf(f(c)) = c\n");
  const SearchResult r = findWeakModel(t, Fragment{});
  ASSERT_EQ(r.kind, SearchResult::Kind::Found);
  EXPECT_EQ(r.size, 2u);
  expectSameResult(r, bruteForceOracle(t, Fragment{}, 3), "functions");
}

TEST(Oracle, AgreesOnFixtures) {
  const FragmentFile frag = loadFragment(kFixtures + "/frag.frag");
  const auto files = fixtureTheories();
  ASSERT_EQ(files.size(), 20u);
  for (const auto& file : files) {
    const Theory t = loadTheory(file);
    SearchConfig cfg;
    cfg.maxSize = 3;
    const SearchResult a = findWeakModel(t, frag.fragment, cfg);
    expectSameResult(a, bruteForceOracle(t, frag.fragment, 3), file.filename().string());
    if (a.model) {
      EXPECT_TRUE(verifyFoundModel(*a.model, t, frag.fragment).ok()) << file;
    }
  }
}

TEST(Oracle, AgreesWithoutSymmetryBreaking) {
  const FragmentFile frag = loadFragment(kFixtures + "/frag.frag");
  for (const char* name : {"/03_irreflexive_c.thy", "/11_symmetric_nonempty.thy", "/20_qcf_iff.thy"}) {
    const Theory t = loadTheory(kFixtures + name);
    SearchConfig cfg;
    cfg.maxSize = 3;
    cfg.symmetryBreaking = false;
    expectSameResult(findWeakModel(t, frag.fragment, cfg),
                     bruteForceOracle(t, frag.fragment, 3, false), name);
  }
}

TEST(Oracle, TwoConstants) {
  const Theory t = parseTheory(
      "rel R 2\nconst c\nconst d\nbegin\nR(c, d)\n~R(d, c)\nforall x. R(x, x) -> x = d\n");
  SearchConfig cfg;
  cfg.maxSize = 3;
  expectSameResult(findWeakModel(t, Fragment{}, cfg), bruteForceOracle(t, Fragment{}, 3),
                   "two constants");
}

TEST(Oracle, Ceiling) {
  const Theory t = parseTheory("rel S 3\nbegin\nexists x. ~(x = x)\n");
  EXPECT_THROW(bruteForceOracle(t, Fragment{}, 3), SearchError);
}

TEST(Counting, SizeOneBinaryRelation) {
  Signature s;
  s.addRelation("R", 2);
  EXPECT_EQ(countStructures(s, {}, 1), 2u);
  EXPECT_EQ(countStructures(s, {{"x < y", 0}}, 1), 4u);
  EXPECT_EQ(countStructures(s, {{"k", 1}}, 2), 16u * 4u);
}

TEST(LexLeader, SmallCases) {
  // 2 elements: bits R(0,0) R(0,1) R(1,0) R(1,1)
  EXPECT_TRUE(isLexLeader({0, 0, 1, 0}, 2, 2, false));
  EXPECT_FALSE(isLexLeader({0, 1, 0, 0}, 2, 2, false));
  EXPECT_TRUE(isLexLeader({0, 1, 0, 0}, 2, 2, true));
  EXPECT_FALSE(isLexLeader({1, 0, 0, 0}, 2, 2, false));
}

TEST(Verify, CorruptedModelNamesTheSentence) {
  const Theory t = loadTheory(kFixtures + "/04_strict_order.thy");
  const FragmentFile frag = loadFragment(kFixtures + "/frag.frag");
  const SearchResult r = findWeakModel(t, frag.fragment);
  ASSERT_TRUE(r.model);
  WeakStructure bad = *r.model;
  bad.setRelation("R", 2, {{0, 0}});
  const ModelReport report = verifyFoundModel(bad, t, frag.fragment);
  EXPECT_FALSE(report.ok());
  ASSERT_FALSE(report.failingSentences.empty());
  EXPECT_EQ(report.failingSentences[0], "forall x. ~R(x, x)");
}

TEST(Compactness, AtLeastFamily) {
  Theory t;
  for (std::size_t n = 1; n <= 4; ++n) t.sentences.push_back(atLeast(n).sentences[0]);
  const CompactnessReport report = compactnessHarness(t, Fragment{}, 4);
  EXPECT_EQ(report.entries.size(), 15u);
  for (const auto& e : report.entries) {
    ASSERT_EQ(e.result.kind, SearchResult::Kind::Found);
    EXPECT_EQ(e.result.size, e.subset.back() + 1);
  }
  EXPECT_FALSE(report.note.empty());
}

TEST(Compactness, ContradictionAndEmpty) {
  const Theory t = parseTheory("begin\nexists x. ~(x = x)\nforall x. x = x\n");
  SearchConfig cfg;
  cfg.maxSize = 3;
  const CompactnessReport report = compactnessHarness(t, Fragment{}, 1, cfg);
  ASSERT_EQ(report.entries.size(), 2u);
  EXPECT_EQ(report.entries[0].result.kind, SearchResult::Kind::Exhausted);
  EXPECT_EQ(report.entries[1].result.kind, SearchResult::Kind::Found);
  EXPECT_TRUE(compactnessHarness(Theory{}, Fragment{}, 3).entries.empty());
}

TEST(Finder, Deterministic) {
  const Theory t = loadTheory(kFixtures + "/17_tournament.thy");
  const SearchResult a = findWeakModel(t, Fragment{});
  const SearchResult b = findWeakModel(t, Fragment{});
  expectSameResult(a, b, "repeat");
  EXPECT_EQ(a.nodes, b.nodes);
}
