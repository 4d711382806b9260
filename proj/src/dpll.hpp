#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace qcf::detail {

/// Literal encoding: 2 * var for the positive literal, 2 * var + 1 for its
/// negation.
using Lit = int;

inline Lit posLit(int var) { return 2 * var; }
inline Lit negate(Lit l) { return l ^ 1; }
inline int varOf(Lit l) { return l >> 1; }

/// Complete DPLL search with two-watched-literal unit propagation and
/// chronological backtracking. Decisions follow variable index order and
/// each variable's preferred value, so the first model found is the least
/// one in that lexicographic order.
class Dpll {
 public:
  enum class Status { Sat, Unsat, Budget };

  Dpll();

  /// Variable 0 is fixed true; these literals name the constants.
  static constexpr Lit kTrue = 0;
  static constexpr Lit kFalse = 1;

  int newVar(bool preferTrue);
  int numVars() const { return static_cast<int>(prefer_.size()); }
  void addClause(std::vector<Lit> clause);

  /// Called after every successful propagation; returning false rejects
  /// the current partial assignment.
  void setHook(std::function<bool(const Dpll&)> hook) { hook_ = std::move(hook); }

  /// Decisions are capped by `budget` (0 = unlimited).
  Status solve(std::uint64_t budget);

  /// -1 unassigned, 0 false, 1 true.
  int value(int var) const { return assign_[var]; }
  bool isTrue(Lit l) const { return assign_[varOf(l)] == ((l & 1) ? 0 : 1); }
  std::uint64_t decisions() const { return decisions_; }

 private:
  int litValue(Lit l) const;
  void enqueue(Lit l);
  bool propagate();
  void undoTo(std::size_t trailSize);

  std::vector<bool> prefer_;
  std::vector<int> assign_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<Lit> units_;
  std::vector<Lit> trail_;
  std::size_t head_ = 0;
  bool emptyClause_ = false;
  std::uint64_t decisions_ = 0;
  std::function<bool(const Dpll&)> hook_;
};

}  // namespace qcf::detail
