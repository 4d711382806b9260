#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcf {

/// First-order term: variable, constant, or function application.
struct Term {
  enum class Kind { Variable, Constant, Application };

  Kind kind = Kind::Variable;
  std::string name;
  std::vector<Term> args;

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term application(std::string function, std::vector<Term> args);
};

bool operator==(const Term& a, const Term& b);

enum class FormulaKind {
  Atom,
  Equal,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,
  Forall,
  Qcf,
};

class Formula;
struct QcfTemplate;

/// Immutable L(Q^cf) formula. Nodes are shared; copies are cheap.
class Formula {
 public:
  static Formula atom(std::string relation, std::vector<Term> args);
  static Formula equal(Term lhs, Term rhs);
  static Formula negation(Formula body);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula biconditional(Formula lhs, Formula rhs);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
  /// Q^cf x y. body; throws SignatureError when x == y.
  static Formula qcf(std::string x, std::string y, Formula body);

  /// Left-nested conjunction; `true` is rendered as the empty conjunction
  /// only by callers, so `parts` must be non-empty.
  static Formula conjunctionOf(const std::vector<Formula>& parts);

  FormulaKind kind() const;

  /// Atom: relation name. Equal: "=".
  const std::string& relation() const;
  /// Atom / Equal arguments.
  const std::vector<Term>& terms() const;
  /// Exists / Forall variable; first Qcf variable.
  const std::string& var() const;
  /// Second Qcf variable.
  const std::string& var2() const;
  /// Not / binders: the body. Binary connectives: left operand.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& body() const { return lhs(); }

  /// Canonical template of a Qcf node.
  const QcfTemplate& qcfTemplate() const;
  /// Actual parameter variables of a Qcf node, in the template's order.
  const std::vector<std::string>& qcfParameters() const;

  bool isBinary() const;
  bool isBinder() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Canonical form of a Qcf subformula body phi(x, y, z1..zn): the order
/// variables are renamed to "x" and "y", parameters to "z1".."zn" by first
/// occurrence, and bound variables by binder depth ("b1", "b2", ...).
/// Alpha-equivalent bodies give identical templates.
struct QcfTemplate {
  std::string key;
  std::shared_ptr<const Formula> body;
  std::size_t arity = 0;

  /// Template of `Qcf orderX orderY. formula`, together with the actual
  /// parameter names in canonical order.
  static std::pair<QcfTemplate, std::vector<std::string>> of(const Formula& formula,
                                                              const std::string& orderX,
                                                              const std::string& orderY);

  const Formula& formula() const { return *body; }

  bool operator==(const QcfTemplate& other) const { return key == other.key; }
  bool operator<(const QcfTemplate& other) const { return key < other.key; }
};

/// Free variables in order of first occurrence (pre-order, left to right).
std::vector<std::string> freeVariables(const Formula& f);
std::vector<std::string> termVariables(const Term& t);
bool isFree(const Formula& f, std::string_view var);
bool isSentence(const Formula& f);

/// Every variable name occurring anywhere, bound or free.
std::vector<std::string> allVariables(const Formula& f);

/// Names of constants occurring in f.
std::vector<std::string> constantsIn(const Formula& f);

/// Fresh name derived from `base` by appending primes, avoiding `taken`.
std::string freshName(const std::string& base, const std::vector<std::string>& taken);

/// Capture-avoiding simultaneous substitution of terms for free variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& replacements);
Formula substitute(const Formula& f, const std::string& var, const Term& t);
Term substituteTerm(const Term& t, const std::map<std::string, Term>& replacements);

/// Bound variables renamed by binder depth; free variables untouched.
Formula alphaNormalize(const Formula& f);
bool alphaEquivalent(const Formula& a, const Formula& b);

/// Canonical templates of all Qcf subformulas (recursively), sorted by key.
std::vector<QcfTemplate> qcfTemplates(const Formula& f);

/// A formula with two designated free variables, e.g. an order phi(x, y, z).
/// Other free variables are parameters.
struct BinaryTemplate {
  Formula body;
  std::string left = "x";
  std::string right = "y";

  Formula apply(const Term& a, const Term& b) const;
  std::vector<std::string> parameters() const;
};

/// A formula with one designated free variable (a domain predicate).
struct UnaryTemplate {
  Formula body;
  std::string var = "x";

  Formula apply(const Term& a) const;
};

/// leq(u, v) := order(u, v) | u = v.
BinaryTemplate reflexiveClosure(const BinaryTemplate& order);

enum class CofinalKind { ExistsCofinal, ForallCofinal };

/// exists^cf var A  ->  forall var'. exists var. (leq(var', var) & A)
/// forall^cf var A  ->  exists var'. forall var. (leq(var', var) -> A)
/// With a domain D, every quantifier over the order is relativized to D.
Formula expandCofinalMacro(CofinalKind kind, const std::string& var, const Formula& body,
                           const BinaryTemplate& leq,
                           const std::optional<UnaryTemplate>& domain = std::nullopt);

}  // namespace qcf
