#include "dpll.hpp"

#include <algorithm>

namespace qcf::detail {

Dpll::Dpll() {
  newVar(true);
  addClause({kTrue});
}

int Dpll::newVar(bool preferTrue) {
  prefer_.push_back(preferTrue);
  assign_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  return static_cast<int>(prefer_.size()) - 1;
}

void Dpll::addClause(std::vector<Lit> clause) {
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  for (std::size_t i = 0; i + 1 < clause.size(); ++i) {
    if (clause[i + 1] == negate(clause[i])) return;  // tautology
  }
  if (clause.empty()) {
    emptyClause_ = true;
    return;
  }
  if (clause.size() == 1) {
    units_.push_back(clause[0]);
    return;
  }
  const int index = static_cast<int>(clauses_.size());
  watches_[clause[0]].push_back(index);
  watches_[clause[1]].push_back(index);
  clauses_.push_back(std::move(clause));
}

int Dpll::litValue(Lit l) const {
  const int v = assign_[varOf(l)];
  if (v < 0) return -1;
  return (l & 1) ? 1 - v : v;
}

void Dpll::enqueue(Lit l) {
  assign_[varOf(l)] = (l & 1) ? 0 : 1;
  trail_.push_back(l);
}

bool Dpll::propagate() {
  while (head_ < trail_.size()) {
    const Lit falsified = negate(trail_[head_++]);
    auto& watchList = watches_[falsified];
    std::size_t keep = 0;
    bool conflict = false;
    for (std::size_t w = 0; w < watchList.size(); ++w) {
      const int ci = watchList[w];
      if (conflict) {
        watchList[keep++] = ci;
        continue;
      }
      auto& c = clauses_[ci];
      if (c[0] == falsified) std::swap(c[0], c[1]);
      if (litValue(c[0]) == 1) {
        watchList[keep++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (litValue(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      watchList[keep++] = ci;
      const int v0 = litValue(c[0]);
      if (v0 == 0) {
        conflict = true;
      } else if (v0 < 0) {
        enqueue(c[0]);
      }
    }
    watchList.resize(keep);
    if (conflict) return false;
  }
  return true;
}

void Dpll::undoTo(std::size_t trailSize) {
  while (trail_.size() > trailSize) {
    assign_[varOf(trail_.back())] = -1;
    trail_.pop_back();
  }
  head_ = std::min(head_, trailSize);
}

Dpll::Status Dpll::solve(std::uint64_t budget) {
  if (emptyClause_) return Status::Unsat;
  for (Lit u : units_) {
    const int v = litValue(u);
    if (v == 0) return Status::Unsat;
    if (v < 0) enqueue(u);
  }
  bool conflict = !propagate();
  if (conflict) return Status::Unsat;

  struct Decision {
    int var;
    std::size_t trailSize;
    bool flipped;
  };
  std::vector<Decision> stack;
  int next = 1;

  while (true) {
    if (!conflict && hook_ && !hook_(*this)) conflict = true;
    if (conflict) {
      bool resumed = false;
      while (!stack.empty()) {
        Decision& d = stack.back();
        undoTo(d.trailSize);
        if (!d.flipped) {
          d.flipped = true;
          enqueue(prefer_[d.var] ? negate(posLit(d.var)) : posLit(d.var));
          next = d.var + 1;
          resumed = true;
          break;
        }
        stack.pop_back();
      }
      if (!resumed) return Status::Unsat;
      conflict = !propagate();
      continue;
    }
    while (next < numVars() && assign_[next] >= 0) ++next;
    if (next >= numVars()) return Status::Sat;
    if (budget != 0 && decisions_ >= budget) return Status::Budget;
    ++decisions_;
    stack.push_back({next, trail_.size(), false});
    enqueue(prefer_[next] ? posLit(next) : negate(posLit(next)));
    conflict = !propagate();
  }
}

}  // namespace qcf::detail
