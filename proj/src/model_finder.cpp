#include "qcf/model_finder.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "dpll.hpp"
#include "qcf/error.hpp"

namespace qcf {

using detail::Dpll;
using detail::Lit;
using detail::negate;
using detail::posLit;

std::string SearchResult::token() const {
  switch (kind) {
    case Kind::Found:
      return "FOUND size=" + std::to_string(size);
    case Kind::Exhausted:
      return "EXHAUSTED max=" + std::to_string(maxSize);
    case Kind::Budget:
      return "BUDGET size=" + std::to_string(size) + " nodes=" + std::to_string(nodes);
  }
  return "";
}

namespace {

void collectTemplateAtoms(const Formula& f, std::map<std::string, std::size_t>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (auto key = templateKeyOf(f.relation())) out[std::string(*key)] = f.terms().size();
      return;
    case FormulaKind::Equal:
      return;
    case FormulaKind::Not:
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::Qcf:
      collectTemplateAtoms(f.body(), out);
      return;
    default:
      collectTemplateAtoms(f.lhs(), out);
      collectTemplateAtoms(f.rhs(), out);
  }
}

std::vector<Formula> allSentences(const Theory& theory, const Fragment& frag) {
  std::vector<Formula> out = theory.sentences;
  for (const auto& s : genSA(frag).sentences()) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Grounding

class Grounder {
 public:
  Grounder(Dpll& solver, std::size_t size) : s_(solver), n_(size) {}

  /// Primary variables, in decision order.
  void declareConstant(const std::string& name) {
    auto& vars = constants_[name];
    for (std::size_t v = 0; v < n_; ++v) vars.push_back(s_.newVar(true));
    exactlyOne(vars);
  }

  void declareRelation(const std::string& name, std::size_t arity) {
    auto& vars = relations_[name];
    const std::size_t rows = power(n_, arity);
    for (std::size_t i = 0; i < rows; ++i) vars.push_back(s_.newVar(false));
  }

  void declareFunction(const std::string& name, std::size_t arity) {
    auto& rows = functions_[name];
    rows.resize(power(n_, arity));
    for (auto& row : rows) {
      for (std::size_t v = 0; v < n_; ++v) row.push_back(s_.newVar(true));
      exactlyOne(row);
    }
  }

  const std::vector<int>& constantVars(const std::string& name) const { return constants_.at(name); }
  const std::vector<int>& relationVars(const std::string& name) const { return relations_.at(name); }
  const std::vector<std::vector<int>>& functionVars(const std::string& name) const {
    return functions_.at(name);
  }

  Lit ground(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Atom:
        return atom(f);
      case FormulaKind::Equal: {
        const auto left = term(f.terms()[0]);
        const auto right = term(f.terms()[1]);
        std::vector<Lit> options;
        for (const auto& [a, ga] : left) {
          for (const auto& [b, gb] : right) {
            if (a == b) options.push_back(mkAnd({ga, gb}));
          }
        }
        return mkOr(std::move(options));
      }
      case FormulaKind::Not:
        return negate(ground(f.lhs()));
      case FormulaKind::And: {
        const Lit a = ground(f.lhs());
        if (a == Dpll::kFalse) return a;
        return mkAnd({a, ground(f.rhs())});
      }
      case FormulaKind::Or: {
        const Lit a = ground(f.lhs());
        if (a == Dpll::kTrue) return a;
        return mkOr({a, ground(f.rhs())});
      }
      case FormulaKind::Implies: {
        const Lit a = ground(f.lhs());
        if (a == Dpll::kFalse) return Dpll::kTrue;
        return mkOr({negate(a), ground(f.rhs())});
      }
      case FormulaKind::Iff:
        return mkIff(ground(f.lhs()), ground(f.rhs()));
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        const bool universal = f.kind() == FormulaKind::Forall;
        const Lit stop = universal ? Dpll::kFalse : Dpll::kTrue;
        std::vector<Lit> parts;
        env_.emplace_back(&f.var(), 0);
        for (Element e = 0; e < n_; ++e) {
          env_.back().second = e;
          const Lit part = ground(f.body());
          if (part == stop) {
            env_.pop_back();
            return stop;
          }
          parts.push_back(part);
        }
        env_.pop_back();
        return universal ? mkAnd(std::move(parts)) : mkOr(std::move(parts));
      }
      case FormulaKind::Qcf:
        throw SearchError("qcf node reached the grounder; translate first");
    }
    return Dpll::kFalse;
  }

 private:
  using Alternatives = std::vector<std::pair<Element, Lit>>;

  void exactlyOne(const std::vector<int>& vars) {
    std::vector<Lit> atLeast;
    for (int v : vars) atLeast.push_back(posLit(v));
    s_.addClause(atLeast);
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (std::size_t j = i + 1; j < vars.size(); ++j) {
        s_.addClause({negate(posLit(vars[i])), negate(posLit(vars[j]))});
      }
    }
  }

  Element lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (*it->first == name) return it->second;
    }
    throw EvalError("unbound variable '" + name + "'");
  }

  /// All (args, guard) combinations of the argument alternatives.
  template <typename Visit>
  void product(const std::vector<Alternatives>& args, Visit&& visit) {
    std::vector<std::size_t> pick(args.size(), 0);
    for (const auto& a : args) {
      if (a.empty()) return;
    }
    while (true) {
      std::size_t index = 0;
      std::vector<Lit> guards;
      for (std::size_t i = 0; i < args.size(); ++i) {
        index = index * n_ + args[i][pick[i]].first;
        guards.push_back(args[i][pick[i]].second);
      }
      visit(index, std::move(guards));
      std::size_t i = args.size();
      while (i > 0) {
        --i;
        if (++pick[i] < args[i].size()) break;
        pick[i] = 0;
        if (i == 0) return;
      }
      if (args.empty()) return;
    }
  }

  Alternatives term(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Variable:
        return {{lookup(t.name), Dpll::kTrue}};
      case Term::Kind::Constant: {
        auto it = constants_.find(t.name);
        if (it == constants_.end()) throw SignatureError("undeclared constant '" + t.name + "'");
        Alternatives out;
        for (Element v = 0; v < n_; ++v) out.emplace_back(v, posLit(it->second[v]));
        return out;
      }
      case Term::Kind::Application: {
        auto it = functions_.find(t.name);
        if (it == functions_.end()) throw SignatureError("undeclared function '" + t.name + "'");
        std::vector<Alternatives> args;
        for (const auto& a : t.args) args.push_back(term(a));
        std::vector<std::vector<Lit>> byValue(n_);
        product(args, [&](std::size_t row, std::vector<Lit> guards) {
          for (Element v = 0; v < n_; ++v) {
            auto g = guards;
            g.push_back(posLit(it->second[row][v]));
            byValue[v].push_back(mkAnd(std::move(g)));
          }
        });
        Alternatives out;
        for (Element v = 0; v < n_; ++v) {
          const Lit l = mkOr(std::move(byValue[v]));
          if (l != Dpll::kFalse) out.emplace_back(v, l);
        }
        return out;
      }
    }
    return {};
  }

  Lit atom(const Formula& f) {
    auto it = relations_.find(f.relation());
    if (it == relations_.end()) throw SignatureError("undeclared relation '" + f.relation() + "'");
    std::vector<Alternatives> args;
    for (const auto& a : f.terms()) args.push_back(term(a));
    std::vector<Lit> options;
    product(args, [&](std::size_t index, std::vector<Lit> guards) {
      guards.push_back(posLit(it->second[index]));
      options.push_back(mkAnd(std::move(guards)));
    });
    return mkOr(std::move(options));
  }

  Lit mkAnd(std::vector<Lit> in) {
    std::vector<Lit> lits;
    for (Lit l : in) {
      if (l == Dpll::kTrue) continue;
      if (l == Dpll::kFalse) return Dpll::kFalse;
      lits.push_back(l);
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i) {
      if (lits[i + 1] == negate(lits[i])) return Dpll::kFalse;
    }
    if (lits.empty()) return Dpll::kTrue;
    if (lits.size() == 1) return lits[0];
    auto cached = andCache_.find(lits);
    if (cached != andCache_.end()) return cached->second;
    const Lit g = posLit(s_.newVar(false));
    std::vector<Lit> back{g};
    for (Lit l : lits) {
      s_.addClause({negate(g), l});
      back.push_back(negate(l));
    }
    s_.addClause(back);
    andCache_.emplace(lits, g);
    return g;
  }

  Lit mkOr(std::vector<Lit> in) {
    for (Lit& l : in) l = negate(l);
    return negate(mkAnd(std::move(in)));
  }

  Lit mkIff(Lit a, Lit b) {
    if (a == Dpll::kTrue) return b;
    if (b == Dpll::kTrue) return a;
    if (a == Dpll::kFalse) return negate(b);
    if (b == Dpll::kFalse) return negate(a);
    if (a == b) return Dpll::kTrue;
    if (a == negate(b)) return Dpll::kFalse;
    if (a > b) std::swap(a, b);
    auto cached = iffCache_.find({a, b});
    if (cached != iffCache_.end()) return cached->second;
    const Lit g = posLit(s_.newVar(false));
    s_.addClause({negate(g), negate(a), b});
    s_.addClause({negate(g), a, negate(b)});
    s_.addClause({g, a, b});
    s_.addClause({g, negate(a), negate(b)});
    iffCache_.emplace(std::make_pair(a, b), g);
    return g;
  }

  Dpll& s_;
  std::size_t n_;
  std::map<std::string, std::vector<int>, std::less<>> constants_;
  std::map<std::string, std::vector<int>, std::less<>> relations_;
  std::map<std::string, std::vector<std::vector<int>>, std::less<>> functions_;
  std::map<std::vector<Lit>, Lit> andCache_;
  std::map<std::pair<Lit, Lit>, Lit> iffCache_;
  std::vector<std::pair<const std::string*, Element>> env_;
};

using TemplateList = std::vector<std::pair<std::string, std::size_t>>;

void verifyOrThrow(const WeakStructure& m, const std::vector<Formula>& sentences) {
  for (const auto& s : sentences) {
    if (!evalWeak(m, s)) {
      throw SearchError("internal error: found structure fails sentence " + print(s));
    }
  }
}

enum class SizeOutcome { Found, Unsat, Budget };

SizeOutcome searchSize(const Signature& sig, const TemplateList& templates,
                       const std::vector<Formula>& translated, std::size_t n, bool symmetry,
                       std::uint64_t budget, std::uint64_t& nodes, std::optional<WeakStructure>& model) {
  Dpll solver;
  Grounder g(solver, n);
  for (const auto& c : sig.constants()) g.declareConstant(c);
  for (const auto& r : sig.relations()) g.declareRelation(r.name, r.arity);
  for (const auto& f : sig.functions()) g.declareFunction(f.name, f.arity);
  for (const auto& [key, arity] : templates) g.declareRelation(templateRelationName(key), arity);

  if (symmetry && !sig.constants().empty()) {
    solver.addClause({posLit(g.constantVars(sig.constants().front())[0])});
  }
  if (symmetry && !sig.relations().empty()) {
    const auto& first = sig.relations().front();
    const std::vector<int> vars = g.relationVars(first.name);
    const bool fixZero = !sig.constants().empty();
    const std::size_t arity = first.arity;
    // Remembers the last table that passed, so the permutation scan runs
    // once per distinct complete table.
    solver.setHook([vars, fixZero, arity, n, passed = std::vector<std::uint8_t>(),
                    bits = std::vector<std::uint8_t>(vars.size())](const Dpll& s) mutable {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        const int v = s.value(vars[i]);
        if (v < 0) return true;
        bits[i] = static_cast<std::uint8_t>(v);
      }
      if (bits == passed) return true;
      if (!isLexLeader(bits, arity, n, fixZero)) return false;
      passed = bits;
      return true;
    });
  }

  for (const auto& f : translated) solver.addClause({g.ground(f)});

  const auto status = solver.solve(budget);
  nodes += solver.decisions();
  if (status == Dpll::Status::Budget) return SizeOutcome::Budget;
  if (status == Dpll::Status::Unsat) return SizeOutcome::Unsat;

  WeakStructure m(n);
  auto decode = [&](const std::vector<int>& vars) {
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (solver.value(vars[v]) == 1) return static_cast<Element>(v);
    }
    throw SearchError("internal error: one-hot group without a value");
  };
  auto bitsOf = [&](const std::vector<int>& vars) {
    std::vector<std::uint8_t> bits;
    for (int v : vars) bits.push_back(solver.value(v) == 1 ? 1 : 0);
    return bits;
  };
  for (const auto& c : sig.constants()) m.setConstant(c, decode(g.constantVars(c)));
  for (const auto& r : sig.relations()) m.setRelationBits(r.name, r.arity, bitsOf(g.relationVars(r.name)));
  for (const auto& f : sig.functions()) {
    std::vector<Element> values;
    for (const auto& row : g.functionVars(f.name)) values.push_back(decode(row));
    m.setFunction(f.name, f.arity, std::move(values));
  }
  for (const auto& [key, arity] : templates) {
    m.setQcfBits(key, arity, bitsOf(g.relationVars(templateRelationName(key))));
  }
  model = std::move(m);
  return SizeOutcome::Found;
}

}  // namespace

std::vector<std::pair<std::string, std::size_t>> requiredTemplates(const Theory& theory,
                                                                   const Fragment& frag) {
  std::map<std::string, std::size_t> keys;
  for (const auto& s : allSentences(theory, frag)) collectTemplateAtoms(translateToFO(s), keys);
  return {keys.begin(), keys.end()};
}

bool isLexLeader(const std::vector<std::uint8_t>& bits, std::size_t arity, std::size_t size,
                 bool fixZero) {
  std::vector<Element> perm(size);
  std::iota(perm.begin(), perm.end(), 0);
  const std::size_t start = fixZero ? 1 : 0;
  std::vector<std::uint8_t> image(bits.size());
  while (std::next_permutation(perm.begin() + static_cast<std::ptrdiff_t>(std::min(start, size)),
                               perm.end())) {
    for (std::size_t i = 0; i < bits.size(); ++i) {
      Tuple t = tupleAt(i, arity, size);
      for (auto& e : t) e = perm[e];
      image[tupleIndex(t, size)] = bits[i];
    }
    if (std::lexicographical_compare(image.begin(), image.end(), bits.begin(), bits.end())) {
      return false;
    }
  }
  return true;
}

SearchResult findWeakModel(const Theory& theory, const Fragment& frag, const SearchConfig& cfg) {
  if (cfg.maxSize < 1) throw SearchError("maxSize must be at least 1");
  const auto sentences = allSentences(theory, frag);
  std::vector<Formula> translated;
  for (const auto& s : sentences) translated.push_back(translateToFO(s));
  const auto templates = requiredTemplates(theory, frag);

  SearchResult result;
  result.maxSize = cfg.maxSize;
  for (std::size_t n = 1; n <= cfg.maxSize; ++n) {
    std::uint64_t remaining = 0;
    if (cfg.nodeBudget != 0) {
      if (result.nodes >= cfg.nodeBudget) {
        result.kind = SearchResult::Kind::Budget;
        result.size = n;
        return result;
      }
      remaining = cfg.nodeBudget - result.nodes;
    }
    std::optional<WeakStructure> model;
    const auto outcome = searchSize(theory.signature, templates, translated, n,
                                    cfg.symmetryBreaking, remaining, result.nodes, model);
    if (outcome == SizeOutcome::Budget) {
      result.kind = SearchResult::Kind::Budget;
      result.size = n;
      return result;
    }
    if (outcome == SizeOutcome::Found) {
      verifyOrThrow(*model, sentences);
      result.kind = SearchResult::Kind::Found;
      result.size = n;
      result.model = std::move(model);
      return result;
    }
  }
  result.kind = SearchResult::Kind::Exhausted;
  return result;
}

// ---------------------------------------------------------------------------
// Oracle

std::uint64_t countStructures(const Signature& signature, const TemplateList& templates,
                              std::size_t size) {
  long double total = 1;
  for (std::size_t i = 0; i < signature.constants().size(); ++i) total *= size;
  for (const auto& r : signature.relations()) total *= std::pow(2.0L, power(size, r.arity));
  for (const auto& f : signature.functions()) total *= std::pow(size, power(size, f.arity));
  for (const auto& t : templates) total *= std::pow(2.0L, power(size, t.second));
  if (total > 1.8e19L) return UINT64_MAX;
  return static_cast<std::uint64_t>(total);
}

SearchResult bruteForceOracle(const Theory& theory, const Fragment& frag, std::size_t maxSize,
                              bool symmetryBreaking) {
  if (maxSize < 1) throw SearchError("maxSize must be at least 1");
  const auto sentences = allSentences(theory, frag);
  const auto templates = requiredTemplates(theory, frag);
  const auto& sig = theory.signature;

  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= maxSize; ++n) {
    const auto c = countStructures(sig, templates, n);
    total = (c == UINT64_MAX || total + c < total) ? UINT64_MAX : total + c;
  }
  if (total > kOracleCeiling) {
    throw SearchError("oracle refuses: " + std::to_string(total) + " structures exceed the ceiling");
  }

  SearchResult result;
  result.maxSize = maxSize;
  for (std::size_t n = 1; n <= maxSize; ++n) {
    // One odometer digit per primary unit, most significant first.
    struct Digit {
      enum class Kind { Constant, RelationBit, FunctionRow, QcfBit } kind;
      std::size_t symbol;
      std::size_t row;
      std::size_t radix;
    };
    std::vector<Digit> digits;
    for (std::size_t i = 0; i < sig.constants().size(); ++i) {
      const bool fixed = symmetryBreaking && i == 0;
      digits.push_back({Digit::Kind::Constant, i, 0, fixed ? 1 : n});
    }
    for (std::size_t i = 0; i < sig.relations().size(); ++i) {
      for (std::size_t row = 0; row < power(n, sig.relations()[i].arity); ++row) {
        digits.push_back({Digit::Kind::RelationBit, i, row, 2});
      }
    }
    for (std::size_t i = 0; i < sig.functions().size(); ++i) {
      for (std::size_t row = 0; row < power(n, sig.functions()[i].arity); ++row) {
        digits.push_back({Digit::Kind::FunctionRow, i, row, n});
      }
    }
    for (std::size_t i = 0; i < templates.size(); ++i) {
      for (std::size_t row = 0; row < power(n, templates[i].second); ++row) {
        digits.push_back({Digit::Kind::QcfBit, i, row, 2});
      }
    }

    std::vector<std::size_t> value(digits.size(), 0);
    while (true) {
      std::vector<Element> consts(sig.constants().size());
      std::vector<std::vector<std::uint8_t>> rels;
      std::vector<std::vector<Element>> funs;
      std::vector<std::vector<std::uint8_t>> qcfs;
      for (const auto& r : sig.relations()) rels.emplace_back(power(n, r.arity));
      for (const auto& f : sig.functions()) funs.emplace_back(power(n, f.arity));
      for (const auto& t : templates) qcfs.emplace_back(power(n, t.second));
      for (std::size_t d = 0; d < digits.size(); ++d) {
        const auto& dg = digits[d];
        switch (dg.kind) {
          case Digit::Kind::Constant:
            consts[dg.symbol] = static_cast<Element>(value[d]);
            break;
          case Digit::Kind::RelationBit:
            rels[dg.symbol][dg.row] = static_cast<std::uint8_t>(value[d]);
            break;
          case Digit::Kind::FunctionRow:
            funs[dg.symbol][dg.row] = static_cast<Element>(value[d]);
            break;
          case Digit::Kind::QcfBit:
            qcfs[dg.symbol][dg.row] = static_cast<std::uint8_t>(value[d]);
            break;
        }
      }

      const bool canonical =
          !symmetryBreaking || sig.relations().empty() ||
          isLexLeader(rels[0], sig.relations()[0].arity, n, !sig.constants().empty());
      if (canonical) {
        WeakStructure m(n);
        for (std::size_t i = 0; i < consts.size(); ++i) m.setConstant(sig.constants()[i], consts[i]);
        for (std::size_t i = 0; i < rels.size(); ++i) {
          m.setRelationBits(sig.relations()[i].name, sig.relations()[i].arity, rels[i]);
        }
        for (std::size_t i = 0; i < funs.size(); ++i) {
          m.setFunction(sig.functions()[i].name, sig.functions()[i].arity, funs[i]);
        }
        for (std::size_t i = 0; i < qcfs.size(); ++i) {
          m.setQcfBits(templates[i].first, templates[i].second, qcfs[i]);
        }
        ++result.nodes;
        const bool all = std::all_of(sentences.begin(), sentences.end(),
                                     [&](const Formula& s) { return evalWeak(m, s); });
        if (all) {
          result.kind = SearchResult::Kind::Found;
          result.size = n;
          result.model = std::move(m);
          return result;
        }
      }

      std::size_t d = digits.size();
      bool carried = true;
      while (d > 0 && carried) {
        --d;
        if (++value[d] < digits[d].radix) {
          carried = false;
        } else {
          value[d] = 0;
        }
      }
      if (carried) break;
    }
  }
  result.kind = SearchResult::Kind::Exhausted;
  return result;
}

// ---------------------------------------------------------------------------
// Compactness and verification

std::string CompactnessReport::str() const {
  std::ostringstream out;
  for (const auto& e : entries) {
    out << "{";
    for (std::size_t i = 0; i < e.subset.size(); ++i) out << (i ? "," : "") << e.subset[i];
    out << "} " << e.result.token() << "\n";
  }
  out << "note: " << note << "\n";
  return out.str();
}

CompactnessReport compactnessHarness(const Theory& theory, const Fragment& frag, std::size_t k,
                                     const SearchConfig& cfg) {
  CompactnessReport report;
  report.note =
      "finite weak satisfiability of every checked subset is illustrative only; it does not "
      "decide satisfiability of the whole theory";
  const std::size_t total = theory.sentences.size();
  for (std::size_t size = 1; size <= std::min(k, total); ++size) {
    std::vector<std::size_t> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      Theory sub{theory.name, theory.signature, {}};
      for (auto i : pick) sub.sentences.push_back(theory.sentences[i]);
      report.entries.push_back({pick, findWeakModel(sub, frag, cfg)});
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == total - size + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return report;
}

ModelReport verifyFoundModel(const WeakStructure& m, const Theory& theory, const Fragment& frag) {
  ModelReport report;
  for (const auto& s : theory.sentences) {
    bool holds = false;
    try {
      holds = evalWeak(m, s);
    } catch (const EvalError&) {
      holds = false;
    }
    if (!holds) report.failingSentences.push_back(print(s));
  }
  report.coherence = verifyFiniteCCoherence(m, frag);
  return report;
}

}  // namespace qcf
