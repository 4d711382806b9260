#include "qcf/weak_structure.hpp"

#include <algorithm>
#include <sstream>

#include "qcf/axioms.hpp"
#include "qcf/error.hpp"
#include "qcf/syntax.hpp"

namespace qcf {

std::size_t power(std::size_t base, std::size_t exponent) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) out *= base;
  return out;
}

std::size_t tupleIndex(const Tuple& t, std::size_t domainSize) {
  std::size_t index = 0;
  for (Element e : t) index = index * domainSize + e;
  return index;
}

Tuple tupleAt(std::size_t index, std::size_t arity, std::size_t domainSize) {
  Tuple t(arity);
  for (std::size_t i = arity; i-- > 0;) {
    t[i] = static_cast<Element>(index % domainSize);
    index /= domainSize;
  }
  return t;
}

bool RelationTable::contains(const Tuple& t, std::size_t domainSize) const {
  return bits[tupleIndex(t, domainSize)] != 0;
}

std::vector<Tuple> RelationTable::tuples(std::size_t domainSize) const {
  std::vector<Tuple> out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) out.push_back(tupleAt(i, arity, domainSize));
  }
  return out;
}

bool operator==(const RelationTable& a, const RelationTable& b) {
  return a.arity == b.arity && a.bits == b.bits;
}

bool operator==(const FunctionTable& a, const FunctionTable& b) {
  return a.arity == b.arity && a.values == b.values;
}

// ---------------------------------------------------------------------------

WeakStructure::WeakStructure(std::size_t size) : size_(size) {
  if (size == 0) throw EvalError("structure domain must be nonempty");
}

void WeakStructure::checkElement(Element e) const {
  if (e >= size_) {
    throw EvalError("element " + std::to_string(e) + " outside domain of size " +
                    std::to_string(size_));
  }
}

namespace {

RelationTable tableFromTuples(std::size_t arity, const std::vector<Tuple>& tuples,
                              std::size_t n) {
  RelationTable table{arity, std::vector<std::uint8_t>(power(n, arity), 0)};
  for (const auto& t : tuples) {
    if (t.size() != arity) {
      throw EvalError("tuple of length " + std::to_string(t.size()) + " for arity " +
                      std::to_string(arity));
    }
    for (Element e : t) {
      if (e >= n) throw EvalError("tuple element " + std::to_string(e) + " outside domain");
    }
    table.bits[tupleIndex(t, n)] = 1;
  }
  return table;
}

}  // namespace

void WeakStructure::setRelation(const std::string& name, std::size_t arity,
                                const std::vector<Tuple>& tuples) {
  relations_[name] = tableFromTuples(arity, tuples, size_);
}

void WeakStructure::setRelationBits(const std::string& name, std::size_t arity,
                                    std::vector<std::uint8_t> bits) {
  if (bits.size() != power(size_, arity)) throw EvalError("relation table has wrong size");
  relations_[name] = RelationTable{arity, std::move(bits)};
}

void WeakStructure::setFunction(const std::string& name, std::size_t arity,
                                std::vector<Element> values) {
  if (values.size() != power(size_, arity)) {
    throw EvalError("function '" + name + "' table is not total");
  }
  for (Element v : values) checkElement(v);
  functions_[name] = FunctionTable{arity, std::move(values)};
}

void WeakStructure::setConstant(const std::string& name, Element value) {
  checkElement(value);
  constants_[name] = value;
}

void WeakStructure::setQcfTable(const std::string& key, std::size_t arity,
                                const std::vector<Tuple>& tuples) {
  qcf_[key] = tableFromTuples(arity, tuples, size_);
}

void WeakStructure::setQcfBits(const std::string& key, std::size_t arity,
                               std::vector<std::uint8_t> bits) {
  if (bits.size() != power(size_, arity)) throw EvalError("qcf table has wrong size");
  qcf_[key] = RelationTable{arity, std::move(bits)};
}

const RelationTable* WeakStructure::relation(std::string_view name) const {
  auto it = relations_.find(name);
  return it == relations_.end() ? nullptr : &it->second;
}

const FunctionTable* WeakStructure::function(std::string_view name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

std::optional<Element> WeakStructure::constant(std::string_view name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) return std::nullopt;
  return it->second;
}

const RelationTable* WeakStructure::qcfTable(std::string_view key) const {
  auto it = qcf_.find(key);
  return it == qcf_.end() ? nullptr : &it->second;
}

void WeakStructure::validate(const Signature& signature) const {
  for (const auto& r : signature.relations()) {
    const auto* t = relation(r.name);
    if (!t) throw EvalError("no table for relation '" + r.name + "'");
    if (t->arity != r.arity) throw EvalError("relation '" + r.name + "' has wrong arity");
  }
  for (const auto& f : signature.functions()) {
    const auto* t = function(f.name);
    if (!t) throw EvalError("no table for function '" + f.name + "'");
    if (t->arity != f.arity) throw EvalError("function '" + f.name + "' has wrong arity");
  }
  for (const auto& c : signature.constants()) {
    if (!constant(c)) throw EvalError("no value for constant '" + c + "'");
  }
}

bool WeakStructure::operator==(const WeakStructure& other) const {
  return size_ == other.size_ && relations_ == other.relations_ &&
         functions_ == other.functions_ && constants_ == other.constants_ && qcf_ == other.qcf_;
}

// ---------------------------------------------------------------------------
// Evaluation

std::string templateRelationName(const std::string& key) { return "R{" + key + "}"; }

std::optional<std::string_view> templateKeyOf(std::string_view relation) {
  if (relation.size() >= 3 && relation.substr(0, 2) == "R{" && relation.back() == '}') {
    return relation.substr(2, relation.size() - 3);
  }
  return std::nullopt;
}

namespace {

enum class Semantics { Weak, CFinite };

class Evaluator {
 public:
  Evaluator(const WeakStructure& m, Semantics semantics) : m_(m), semantics_(semantics) {}

  void bind(const std::string& name, Element value) { env_.emplace_back(&name, value); }

  bool eval(const Formula& f) {
    switch (f.kind()) {
      case FormulaKind::Atom:
        return atom(f);
      case FormulaKind::Equal:
        return term(f.terms()[0]) == term(f.terms()[1]);
      case FormulaKind::Not:
        return !eval(f.lhs());
      case FormulaKind::And:
        return eval(f.lhs()) && eval(f.rhs());
      case FormulaKind::Or:
        return eval(f.lhs()) || eval(f.rhs());
      case FormulaKind::Implies:
        return !eval(f.lhs()) || eval(f.rhs());
      case FormulaKind::Iff:
        return eval(f.lhs()) == eval(f.rhs());
      case FormulaKind::Exists:
      case FormulaKind::Forall: {
        const bool universal = f.kind() == FormulaKind::Forall;
        env_.emplace_back(&f.var(), 0);
        bool result = universal;
        for (Element e = 0; e < m_.size(); ++e) {
          env_.back().second = e;
          if (eval(f.body()) != universal) {
            result = !universal;
            break;
          }
        }
        env_.pop_back();
        return result;
      }
      case FormulaKind::Qcf:
        return semantics_ == Semantics::Weak ? qcfWeak(f) : qcfFinite(f);
    }
    return false;
  }

 private:
  Element lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (*it->first == name) return it->second;
    }
    throw EvalError("unbound variable '" + name + "'");
  }

  Element term(const Term& t) const {
    switch (t.kind) {
      case Term::Kind::Variable:
        return lookup(t.name);
      case Term::Kind::Constant: {
        auto v = m_.constant(t.name);
        if (!v) throw EvalError("no value for constant '" + t.name + "'");
        return *v;
      }
      case Term::Kind::Application: {
        const auto* table = m_.function(t.name);
        if (!table || table->arity != t.args.size()) {
          throw EvalError("no table for function '" + t.name + "'");
        }
        std::size_t index = 0;
        for (const auto& a : t.args) index = index * m_.size() + term(a);
        return table->values[index];
      }
    }
    return 0;
  }

  std::size_t argsIndex(const std::vector<Term>& args) const {
    std::size_t index = 0;
    for (const auto& a : args) index = index * m_.size() + term(a);
    return index;
  }

  bool atom(const Formula& f) {
    if (auto key = templateKeyOf(f.relation())) {
      if (semantics_ != Semantics::Weak) {
        throw EvalError("template atom '" + f.relation() + "' has no C-semantics reading");
      }
      const auto* table = m_.qcfTable(*key);
      if (!table) throw EvalError("missing qcf table for template [" + std::string(*key) + "]");
      if (table->arity != f.terms().size()) {
        throw EvalError("qcf table arity mismatch for [" + std::string(*key) + "]");
      }
      return table->bits[argsIndex(f.terms())] != 0;
    }
    const auto* table = m_.relation(f.relation());
    if (!table) throw EvalError("no table for relation '" + f.relation() + "'");
    if (table->arity != f.terms().size()) {
      throw EvalError("relation '" + f.relation() + "' arity mismatch");
    }
    return table->bits[argsIndex(f.terms())] != 0;
  }

  bool qcfWeak(const Formula& f) {
    const auto& tmpl = f.qcfTemplate();
    const auto* table = m_.qcfTable(tmpl.key);
    if (!table) throw EvalError("missing qcf table for template [" + tmpl.key + "]");
    if (table->arity != tmpl.arity) {
      throw EvalError("qcf table arity mismatch for [" + tmpl.key + "]");
    }
    std::size_t index = 0;
    for (const auto& p : f.qcfParameters()) index = index * m_.size() + lookup(p);
    return table->bits[index] != 0;
  }

  bool qcfFinite(const Formula& f) {
    const std::size_t n = m_.size();
    std::vector<std::uint8_t> matrix(n * n, 0);
    env_.emplace_back(&f.var(), 0);
    env_.emplace_back(&f.var2(), 0);
    const std::size_t xi = env_.size() - 2;
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        env_[xi].second = a;
        env_[xi + 1].second = b;
        matrix[a * n + b] = eval(f.body()) ? 1 : 0;
      }
    }
    env_.pop_back();
    env_.pop_back();
    // A finite linear order is empty or has a last element; neither has a
    // cofinality, so "cf R in C" fails whatever C is.
    switch (classifyFiniteOrder(matrix, n)) {
      case FiniteOrderShape::NotLinear:
      case FiniteOrderShape::Empty:
      case FiniteOrderShape::HasLast:
        return false;
    }
    return false;
  }

  const WeakStructure& m_;
  Semantics semantics_;
  std::vector<std::pair<const std::string*, Element>> env_;
};

}  // namespace

bool evalWeak(const WeakStructure& m, const Formula& f, const Assignment& a) {
  Evaluator ev(m, Semantics::Weak);
  for (const auto& [name, value] : a) {
    if (value >= m.size()) throw EvalError("assignment outside domain");
    ev.bind(name, value);
  }
  return ev.eval(f);
}

bool evalCFinite(const WeakStructure& m, const Formula& f, const CofinalitySpec& c,
                 const Assignment& a) {
  // No finite order has a cofinality, so C never matters here.
  (void)c;
  Evaluator ev(m, Semantics::CFinite);
  for (const auto& [name, value] : a) {
    if (value >= m.size()) throw EvalError("assignment outside domain");
    ev.bind(name, value);
  }
  return ev.eval(f);
}

FiniteOrderShape classifyFiniteOrder(const std::vector<std::uint8_t>& matrix, std::size_t n) {
  auto lt = [&](std::size_t a, std::size_t b) { return matrix[a * n + b] != 0; };
  for (std::size_t a = 0; a < n; ++a) {
    if (lt(a, a)) return FiniteOrderShape::NotLinear;
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && !lt(a, b) && !lt(b, a)) return FiniteOrderShape::NotLinear;
      for (std::size_t c = 0; c < n; ++c) {
        if (lt(a, b) && lt(b, c) && !lt(a, c)) return FiniteOrderShape::NotLinear;
      }
    }
  }
  return n == 0 ? FiniteOrderShape::Empty : FiniteOrderShape::HasLast;
}

Formula translateToFO(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return f;
    case FormulaKind::Not:
      return Formula::negation(translateToFO(f.lhs()));
    case FormulaKind::And:
      return Formula::conjunction(translateToFO(f.lhs()), translateToFO(f.rhs()));
    case FormulaKind::Or:
      return Formula::disjunction(translateToFO(f.lhs()), translateToFO(f.rhs()));
    case FormulaKind::Implies:
      return Formula::implication(translateToFO(f.lhs()), translateToFO(f.rhs()));
    case FormulaKind::Iff:
      return Formula::biconditional(translateToFO(f.lhs()), translateToFO(f.rhs()));
    case FormulaKind::Exists:
      return Formula::exists(f.var(), translateToFO(f.body()));
    case FormulaKind::Forall:
      return Formula::forall(f.var(), translateToFO(f.body()));
    case FormulaKind::Qcf: {
      std::vector<Term> args;
      for (const auto& p : f.qcfParameters()) args.push_back(Term::variable(p));
      return Formula::atom(templateRelationName(f.qcfTemplate().key), std::move(args));
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Cofinality classes

CofinalitySpec CofinalitySpec::only(std::set<std::string> names) {
  CofinalitySpec c;
  c.names_ = std::move(names);
  return c;
}

CofinalitySpec CofinalitySpec::allExcept(std::set<std::string> names) {
  CofinalitySpec c;
  c.complemented_ = true;
  c.names_ = std::move(names);
  return c;
}

CofinalitySpec CofinalitySpec::parse(std::string_view text) {
  std::string s(text);
  bool complemented = false;
  const std::string prefix = "all-except:";
  if (s.rfind(prefix, 0) == 0) {
    complemented = true;
    s = s.substr(prefix.size());
  }
  std::set<std::string> names;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto first = item.find_first_not_of(" \t");
    auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw ParseError("empty cofinality name", 1, 1);
    item = item.substr(first, last - first + 1);
    if (!isIdentifier(item)) throw ParseError("invalid cofinality name '" + item + "'", 1, 1);
    names.insert(item);
  }
  if (!complemented && names.empty()) throw ParseError("empty cofinality class", 1, 1);
  return complemented ? allExcept(std::move(names)) : only(std::move(names));
}

bool CofinalitySpec::contains(const std::string& regular) const {
  return (names_.count(regular) != 0) != complemented_;
}

bool CofinalitySpec::nonEmpty(const std::vector<std::string>* universe) const {
  if (!universe) return complemented_ || !names_.empty();
  return std::any_of(universe->begin(), universe->end(),
                     [&](const std::string& r) { return contains(r); });
}

bool CofinalitySpec::notAll(const std::vector<std::string>* universe) const {
  if (!universe) return !complemented_ || !names_.empty();
  return std::any_of(universe->begin(), universe->end(),
                     [&](const std::string& r) { return !contains(r); });
}

std::string CofinalitySpec::str() const {
  std::string out = complemented_ ? "all-except:" : "";
  bool first = true;
  for (const auto& n : names_) {
    if (!first) out += ",";
    out += n;
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coherence

CoherenceReport verifyFiniteCCoherence(const WeakStructure& m, const Fragment& frag,
                                       const CofinalitySpec& c) {
  CoherenceReport report;
  for (const auto& axiom : genSA(frag).axioms) {
    bool holds = false;
    try {
      holds = evalWeak(m, axiom.sentence);
    } catch (const EvalError&) {
      holds = false;
    }
    if (!holds) {
      report.saHolds = false;
      report.failingAxioms.push_back(axiom.tag());
    }
  }

  const std::size_t n = m.size();
  for (const auto& tmpl : frag.orders) {
    const auto* table = m.qcfTable(tmpl.key);
    const std::size_t rows = power(n, tmpl.arity);
    for (std::size_t row = 0; row < rows; ++row) {
      const Tuple params = tupleAt(row, tmpl.arity, n);
      Assignment a;
      for (std::size_t i = 0; i < params.size(); ++i) a["z" + std::to_string(i + 1)] = params[i];
      // Right side: the defined relation is an endless linear order with
      // cofinality in C. Evaluated under C-semantics of the body.
      const Formula qcfNode = Formula::qcf("x", "y", tmpl.formula());
      const bool defined = evalCFinite(m, qcfNode, c, a);
      const bool entry = table != nullptr && table->bits[row] != 0;
      if (entry != defined) report.violations.push_back({tmpl.key, params});
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json tuplesJson(const RelationTable& table, std::size_t n) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : table.tuples(n)) out.push_back(t);
  return out;
}

std::vector<Tuple> readTuples(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected a list of tuples", 1, 1);
  std::vector<Tuple> out;
  for (const auto& t : j) {
    if (!t.is_array()) throw ParseError(what + ": expected a tuple", 1, 1);
    out.push_back(t.get<Tuple>());
  }
  return out;
}

}  // namespace

nlohmann::json toJson(const WeakStructure& m) {
  const std::size_t n = m.size();
  nlohmann::json j;
  j["size"] = n;
  j["relations"] = nlohmann::json::object();
  for (const auto& [name, table] : m.relations()) j["relations"][name] = tuplesJson(table, n);
  j["functions"] = nlohmann::json::object();
  for (const auto& [name, table] : m.functions()) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < table.values.size(); ++i) {
      Tuple row = tupleAt(i, table.arity, n);
      row.push_back(table.values[i]);
      rows.push_back(row);
    }
    j["functions"][name] = rows;
  }
  j["constants"] = nlohmann::json::object();
  for (const auto& [name, value] : m.constants()) j["constants"][name] = value;
  j["qcf"] = nlohmann::json::object();
  for (const auto& [key, table] : m.qcfTables()) j["qcf"][key] = tuplesJson(table, n);
  return j;
}

WeakStructure structureFromJson(const nlohmann::json& j, const Signature& signature,
                                const std::vector<QcfTemplate>& templates) {
  try {
    const std::size_t n = j.at("size").get<std::size_t>();
    WeakStructure m(n);
    const auto relations = j.value("relations", nlohmann::json::object());
    for (const auto& r : signature.relations()) {
      std::vector<Tuple> tuples;
      if (relations.contains(r.name)) tuples = readTuples(relations.at(r.name), r.name);
      m.setRelation(r.name, r.arity, tuples);
    }
    for (const auto& [name, _] : relations.items()) {
      if (!signature.relationArity(name)) throw ParseError("unknown relation '" + name + "'", 1, 1);
    }
    const auto functions = j.value("functions", nlohmann::json::object());
    for (const auto& f : signature.functions()) {
      if (!functions.contains(f.name)) throw EvalError("function '" + f.name + "' has no table");
      std::vector<Element> values(power(n, f.arity), 0);
      std::vector<std::uint8_t> seen(values.size(), 0);
      for (const auto& row : readTuples(functions.at(f.name), f.name)) {
        if (row.size() != f.arity + 1) throw EvalError("function row of wrong length");
        Tuple args(row.begin(), row.end() - 1);
        for (Element e : row) {
          if (e >= n) throw EvalError("function row outside domain");
        }
        const std::size_t index = tupleIndex(args, n);
        values[index] = row.back();
        seen[index] = 1;
      }
      if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
        throw EvalError("function '" + f.name + "' table is not total");
      }
      m.setFunction(f.name, f.arity, std::move(values));
    }
    const auto constants = j.value("constants", nlohmann::json::object());
    for (const auto& c : signature.constants()) {
      if (!constants.contains(c)) throw EvalError("constant '" + c + "' has no value");
      m.setConstant(c, constants.at(c).get<Element>());
    }
    const auto qcf = j.value("qcf", nlohmann::json::object());
    for (const auto& [key, value] : qcf.items()) {
      auto tuples = readTuples(value, key);
      std::size_t arity = tuples.empty() ? 0 : tuples.front().size();
      for (const auto& t : templates) {
        if (t.key == key) arity = t.arity;
      }
      m.setQcfTable(key, arity, tuples);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("structure file: ") + e.what(), 1, 1);
  }
}

}  // namespace qcf
