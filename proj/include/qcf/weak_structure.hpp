#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcf/formula.hpp"
#include "qcf/signature.hpp"

namespace qcf {

using Element = std::uint32_t;
using Tuple = std::vector<Element>;

/// Dense truth table of a relation over {0..n-1}^arity, tuples in
/// lexicographic order (first component most significant).
struct RelationTable {
  std::size_t arity = 0;
  std::vector<std::uint8_t> bits;

  bool contains(const Tuple& t, std::size_t domainSize) const;
  std::vector<Tuple> tuples(std::size_t domainSize) const;
};

struct FunctionTable {
  std::size_t arity = 0;
  std::vector<Element> values;
};

std::size_t tupleIndex(const Tuple& t, std::size_t domainSize);
Tuple tupleAt(std::size_t index, std::size_t arity, std::size_t domainSize);
std::size_t power(std::size_t base, std::size_t exponent);

/// Finite L*-structure: an L-structure plus a table R_phi for every Qcf
/// template phi, giving the truth value of Q^cf x y phi(x, y, params).
class WeakStructure {
 public:
  explicit WeakStructure(std::size_t size);

  std::size_t size() const { return size_; }

  void setRelation(const std::string& name, std::size_t arity, const std::vector<Tuple>& tuples);
  void setRelationBits(const std::string& name, std::size_t arity, std::vector<std::uint8_t> bits);
  /// `values` lists outputs in tuple order; the table must be total.
  void setFunction(const std::string& name, std::size_t arity, std::vector<Element> values);
  void setConstant(const std::string& name, Element value);
  void setQcfTable(const std::string& key, std::size_t arity, const std::vector<Tuple>& tuples);
  void setQcfBits(const std::string& key, std::size_t arity, std::vector<std::uint8_t> bits);

  const RelationTable* relation(std::string_view name) const;
  const FunctionTable* function(std::string_view name) const;
  std::optional<Element> constant(std::string_view name) const;
  const RelationTable* qcfTable(std::string_view key) const;

  const std::map<std::string, RelationTable, std::less<>>& relations() const { return relations_; }
  const std::map<std::string, FunctionTable, std::less<>>& functions() const { return functions_; }
  const std::map<std::string, Element, std::less<>>& constants() const { return constants_; }
  const std::map<std::string, RelationTable, std::less<>>& qcfTables() const { return qcf_; }

  /// Throws EvalError unless all tables cover the signature and tuples are in range.
  void validate(const Signature& signature) const;

  bool operator==(const WeakStructure& other) const;

 private:
  void checkElement(Element e) const;

  std::size_t size_;
  std::map<std::string, RelationTable, std::less<>> relations_;
  std::map<std::string, FunctionTable, std::less<>> functions_;
  std::map<std::string, Element, std::less<>> constants_;
  std::map<std::string, RelationTable, std::less<>> qcf_;
};

bool operator==(const RelationTable& a, const RelationTable& b);
bool operator==(const FunctionTable& a, const FunctionTable& b);

using Assignment = std::map<std::string, Element>;

/// Name of the L* relation symbol R_phi standing for a Qcf template.
std::string templateRelationName(const std::string& key);
/// The template key if `relation` names an R_phi symbol.
std::optional<std::string_view> templateKeyOf(std::string_view relation);

/// Weak semantics: Q^cf x y phi(x, y, c) holds iff c is in R_phi's table.
/// Throws EvalError on a missing qcf table or an unbound variable.
bool evalWeak(const WeakStructure& m, const Formula& f, const Assignment& a = {});

/// Replaces every Qcf node by the atom R_phi(params) of its template.
Formula translateToFO(const Formula& f);

/// The class C of regular cardinals, as a finite set of names ("omega",
/// "aleph1", ...) or the complement of one.
class CofinalitySpec {
 public:
  static CofinalitySpec only(std::set<std::string> names);
  static CofinalitySpec allExcept(std::set<std::string> names);
  /// "omega", "omega,aleph1", "all-except:omega".
  static CofinalitySpec parse(std::string_view text);

  bool contains(const std::string& regular) const;
  bool complemented() const { return complemented_; }
  const std::set<std::string>& names() const { return names_; }

  /// Relative to a declared finite universe of regulars when given,
  /// otherwise to the (infinite) class of all regular cardinals.
  bool nonEmpty(const std::vector<std::string>* universe = nullptr) const;
  bool notAll(const std::vector<std::string>* universe = nullptr) const;

  std::string str() const;

 private:
  bool complemented_ = false;
  std::set<std::string> names_;
};

/// Shape of a binary relation on a finite universe, read as an order.
enum class FiniteOrderShape { NotLinear, Empty, HasLast };

/// Strict linear order test (irreflexive, transitive, total on distinct
/// elements); a finite nonempty linear order always has a last element.
FiniteOrderShape classifyFiniteOrder(const std::vector<std::uint8_t>& matrix, std::size_t n);

/// C-semantics on a plain finite structure: a Qcf node is true iff the
/// defined relation linearly orders the universe without last element and
/// with cofinality in C, which never happens on a finite universe.
bool evalCFinite(const WeakStructure& m, const Formula& f, const CofinalitySpec& c,
                 const Assignment& a = {});

struct CoherenceViolation {
  std::string key;
  Tuple parameters;
};

struct CoherenceReport {
  bool saHolds = true;
  std::vector<std::string> failingAxioms;
  std::vector<CoherenceViolation> violations;
  bool coherent() const { return saHolds && violations.empty(); }
};

struct Fragment;

/// For every order template of the fragment and every parameter tuple,
/// checks that the qcf entry holds iff the defined relation is a linear
/// order of the universe without last element and cofinality in C. On a
/// finite structure the right side is always false, so coherent means all
/// fragment tables are empty. Also re-checks that m satisfies genSA(frag).
CoherenceReport verifyFiniteCCoherence(const WeakStructure& m, const Fragment& frag,
                                       const CofinalitySpec& c = CofinalitySpec::only({"omega"}));

/// Structure files: {"size", "relations", "functions", "constants", "qcf"}.
nlohmann::json toJson(const WeakStructure& m);
/// Arities come from the signature (relations, functions) and from the
/// templates (qcf); qcf keys not in `templates` take their arity from
/// their first tuple.
WeakStructure structureFromJson(const nlohmann::json& j, const Signature& signature,
                                const std::vector<QcfTemplate>& templates = {});

}  // namespace qcf
