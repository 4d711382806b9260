#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcf/axioms.hpp"
#include "qcf/syntax.hpp"
#include "qcf/weak_structure.hpp"

namespace qcf {

struct SearchConfig {
  std::size_t maxSize = 5;
  /// Total decisions over all sizes; 0 means unlimited.
  std::uint64_t nodeBudget = 50'000'000;
  /// First constant fixed to element 0, first relation's table required to
  /// be lexicographically least among its permuted copies.
  bool symmetryBreaking = true;
};

struct SearchResult {
  enum class Kind { Found, Exhausted, Budget };
  Kind kind = Kind::Exhausted;
  std::optional<WeakStructure> model;
  /// Size of the model (Found) or the size being searched (Budget).
  std::size_t size = 0;
  std::size_t maxSize = 0;
  std::uint64_t nodes = 0;

  /// FOUND size=N, EXHAUSTED max=N, BUDGET size=N nodes=M
  std::string token() const;
};

/// Structures are ordered by: constant values (ascending, signature order),
/// then relation tables (tuples in lexicographic order, absent before
/// present), then function tables (rows in order, values ascending), then
/// qcf tables by template key. Both searches return the first model in
/// this order.
///
/// Searches sizes 1..maxSize for a finite weak model of
/// translateToFO(T u genSA(frag)) by grounding to clauses and running DPLL.
/// Found models are re-verified with evalWeak; Budget is distinct from
/// Exhausted.
SearchResult findWeakModel(const Theory& theory, const Fragment& frag, const SearchConfig& cfg = {});

/// Enumerates every weak structure in the same order and tests it with
/// evalWeak on the untranslated sentences. Throws SearchError when more
/// than kOracleCeiling structures would be enumerated.
SearchResult bruteForceOracle(const Theory& theory, const Fragment& frag, std::size_t maxSize,
                              bool symmetryBreaking = true);

inline constexpr std::uint64_t kOracleCeiling = std::uint64_t{1} << 24;

/// Number of weak structures of the given size over the signature and the
/// qcf templates (key, arity), before symmetry breaking.
std::uint64_t countStructures(const Signature& signature,
                              const std::vector<std::pair<std::string, std::size_t>>& templates,
                              std::size_t size);

/// Qcf templates (key, arity) that need tables for T u genSA(frag), sorted.
std::vector<std::pair<std::string, std::size_t>> requiredTemplates(const Theory& theory,
                                                                   const Fragment& frag);

/// True when no domain permutation (fixing 0 if `fixZero`) maps the table
/// to a lexicographically smaller one.
bool isLexLeader(const std::vector<std::uint8_t>& bits, std::size_t arity, std::size_t size,
                 bool fixZero);

struct CompactnessEntry {
  std::vector<std::size_t> subset;  // indices into T
  SearchResult result;
};

struct CompactnessReport {
  std::vector<CompactnessEntry> entries;
  std::string note;

  std::string str() const;
};

/// Runs the finder on every nonempty subset of T with at most k sentences,
/// together with genSA(frag). Illustrative: finite satisfiability of all
/// subsets does not decide satisfiability of T.
CompactnessReport compactnessHarness(const Theory& theory, const Fragment& frag, std::size_t k,
                                     const SearchConfig& cfg = {});

struct ModelReport {
  std::vector<std::string> failingSentences;
  CoherenceReport coherence;

  bool ok() const { return failingSentences.empty() && coherence.coherent(); }
};

/// Evaluates every sentence of T with evalWeak and checks finite
/// C-coherence of the fragment's tables.
ModelReport verifyFoundModel(const WeakStructure& m, const Theory& theory, const Fragment& frag);

}  // namespace qcf
