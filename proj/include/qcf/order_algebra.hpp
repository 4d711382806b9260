#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qcf {

/// Names of the uncountable regular cardinals a Reg block may use, in
/// increasing rank.
const std::vector<std::string>& defaultRegulars();

struct OrderBlock {
  enum class Kind { Fin, Omega, Reg };
  Kind kind = Kind::Fin;
  std::size_t length = 0;  // Fin only
  std::string regular;     // Reg only

  bool operator==(const OrderBlock&) const = default;
};

/// An element of an element-representable order: position `index` inside
/// block `block` of the normalized sum.
struct OrderElement {
  std::size_t block = 0;
  std::size_t index = 0;

  bool operator==(const OrderElement&) const = default;
};

struct CofinalityResult {
  enum class Kind { Empty, HasLast, Cof };
  Kind kind = Kind::Empty;
  std::string regular;  // "omega" or a declared regular name, for Cof

  bool operator==(const CofinalityResult&) const = default;
  /// EMPTY, HAS_LAST, COF(name)
  std::string str() const;
};

/// A finite sum of blocks fin(n), omega and reg(NAME), kept normalized:
/// no fin(0) blocks and no two adjacent fin blocks.
class OrderExpr {
 public:
  OrderExpr() = default;

  static OrderExpr fin(std::size_t n);
  static OrderExpr omega();
  static OrderExpr reg(const std::string& name,
                       const std::vector<std::string>& regulars = defaultRegulars());
  static OrderExpr sum(const OrderExpr& left, const OrderExpr& right);

  /// "fin(3) + omega + reg(aleph1)"; '+' is left-associative and
  /// parentheses group. Throws ParseError.
  static OrderExpr parse(std::string_view text,
                         const std::vector<std::string>& regulars = defaultRegulars());

  const std::vector<OrderBlock>& blocks() const { return blocks_; }
  std::string str() const;

  CofinalityResult cofinality() const;
  bool hasRegular() const;
  bool finite() const;
  /// Number of elements; only for finite orders.
  std::size_t cardinality() const;

  /// Element operations; all throw OrderError on a Reg block.
  void requireElements() const;
  bool contains(const OrderElement& e) const;
  bool less(const OrderElement& a, const OrderElement& b) const;
  bool leq(const OrderElement& a, const OrderElement& b) const;
  std::optional<OrderElement> least() const;
  std::optional<OrderElement> successor(const OrderElement& e) const;
  /// "i" for a single-block order, otherwise "block:i".
  std::string render(const OrderElement& e) const;
  OrderElement parseElement(std::string_view text) const;

  /// First `count` elements of the structural enumeration: stage 0 lists
  /// every finite block and index 0 of each omega block, left to right;
  /// stage s lists index s of each omega block. Not order-preserving.
  std::vector<OrderElement> prefix(std::size_t count) const;

  /// All elements <= e when there are finitely many.
  std::optional<std::vector<OrderElement>> downset(const OrderElement& e) const;

  /// Canonical increasing cofinal sequence x_n = (last block, n). Requires
  /// cofinality omega.
  OrderElement fundamental(std::size_t n) const;
  /// Least n with e <= x_n.
  std::size_t leastIndexAbove(const OrderElement& e) const;

  /// Throws OrderError unless elements are representable and the
  /// cofinality is omega.
  void requireOmegaCofinal() const;

  bool operator==(const OrderExpr&) const = default;

 private:
  std::vector<OrderBlock> blocks_;
};

/// True iff X and Y have equal cofinality. Throws OrderError when either
/// is empty or has a last element.
bool connectedDecision(const OrderExpr& x, const OrderExpr& y);

/// Four-valued truth for bounded evaluation, ordered
/// False < Unknown < Bounded < True. Bounded means no counterexample within
/// the searched prefixes.
enum class Truth { False, Unknown, Bounded, True };

Truth truthAnd(Truth a, Truth b);
Truth truthOr(Truth a, Truth b);
Truth truthNot(Truth a);
bool definite(Truth t);

/// A relation G between the carriers of X and Y with optional metadata.
struct LazyRelation {
  using Member = std::function<Truth(const OrderElement&, const OrderElement&)>;
  using Pair = std::pair<OrderElement, OrderElement>;

  std::string name;
  OrderExpr x;
  OrderExpr y;
  Member member;

  /// G(x, y) and x2 <= x imply G(x2, y).
  bool antitoneX = false;
  /// G(x, y) and y <= y2 imply G(x, y2).
  bool monotoneY = false;
  /// Least y with G(x, y), nullopt when the row is empty. Present only
  /// when G(x, y) holds exactly for y >= threshold(x).
  std::function<std::optional<OrderElement>(const OrderElement&)> threshold;
  /// G(x, y) iff x = x_n and y_n <= y for some n, over the fundamental
  /// sequences of both carriers.
  bool sparseSequence = false;
  /// x' -> (x >= x', y') with G(x, y) for all y >= y'.
  std::function<Pair(const OrderElement&)> witness1;
  /// y' -> (y >= y', x') with not G(x, y) for all x >= x'.
  std::function<Pair(const OrderElement&)> witness2;

  Truth operator()(const OrderElement& a, const OrderElement& b) const { return member(a, b); }
};

/// G = {(x, y) | exists n (x <= x_n and y_n <= y)}, decided as y_{n0(x)} <= y.
LazyRelation buildConnection(const OrderExpr& x, const OrderExpr& y);
/// G = {(x_n, y) | y_n <= y}.
LazyRelation buildConnectionSparse(const OrderExpr& x, const OrderExpr& y);
/// x <= y on a single order without last element.
LazyRelation selfConnection(const OrderExpr& x);
LazyRelation fullRelation(const OrderExpr& x, const OrderExpr& y);
LazyRelation emptyRelation(const OrderExpr& x, const OrderExpr& y);

/// (y, x) -> not G(x, y).
LazyRelation inverseNeg(const LazyRelation& g);
/// K = {(x, z) | exists y' (forall y (y' <= y -> G(x, y)) and H(y', z))}.
LazyRelation compose(const LazyRelation& g, const LazyRelation& h, std::size_t bound = 200);
/// {(x, y) | exists x' (x <= x' and G(x', y))}.
LazyRelation antitoneClosure(const LazyRelation& g, std::size_t bound = 200);
/// {(x, y) | exists y' (y' <= y and G(x, y'))}.
LazyRelation monotoneLower(const LazyRelation& g, std::size_t bound = 200);

struct NormalizedPair {
  /// {(x, y) | exists x' (x <= x' and forall y' (y <= y' -> G(x', y')))}
  LazyRelation direct;
  /// The same relation as anti(inverseNeg(anti(inverseNeg(G)))).
  LazyRelation factored;
};
NormalizedPair normalizeMonotone(const LazyRelation& g, std::size_t bound = 200);

struct Verdict {
  enum class Kind { ExactTrue, ExactFalse, SatisfiedUpTo, RefutedAt, Unknown };
  Kind kind = Kind::Unknown;
  std::size_t bound = 0;
  /// Counterexample to the outermost universal quantifier, for RefutedAt.
  std::vector<std::string> witness;

  /// EXACT_TRUE, EXACT_FALSE, SAT_UPTO(b), REFUTED(w...), UNKNOWN(b)
  std::string token() const;
};

struct PropertyVerdicts {
  Verdict first;
  Verdict second;
};

/// (1) exists^cf x forall^cf y G(x, y) and (2) exists^cf y forall^cf x ~G(x, y).
/// Outer universals range over the first `bound` enumerated elements,
/// existentials over 2*bound and inner universals over 4*bound. Witness
/// metadata is spot-checked and then yields exact verdicts.
PropertyVerdicts checkConnection(const LazyRelation& g, std::size_t bound);

/// (3) exists^cf x exists y G(x, y) and
/// (4) forall y' exists x' forall x y (x' <= x and y <= y' -> ~G(x, y)).
PropertyVerdicts checkConditions34(const LazyRelation& g, std::size_t bound);

}  // namespace qcf
