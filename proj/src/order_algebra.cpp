#include "qcf/order_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <sstream>

#include "qcf/error.hpp"
#include "qcf/signature.hpp"

namespace qcf {

const std::vector<std::string>& defaultRegulars() {
  static const std::vector<std::string> names = {"aleph1", "aleph2", "aleph3"};
  return names;
}

std::string CofinalityResult::str() const {
  switch (kind) {
    case Kind::Empty:
      return "EMPTY";
    case Kind::HasLast:
      return "HAS_LAST";
    case Kind::Cof:
      return "COF(" + regular + ")";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Construction

OrderExpr OrderExpr::fin(std::size_t n) {
  OrderExpr o;
  if (n > 0) o.blocks_.push_back({OrderBlock::Kind::Fin, n, ""});
  return o;
}

OrderExpr OrderExpr::omega() {
  OrderExpr o;
  o.blocks_.push_back({OrderBlock::Kind::Omega, 0, ""});
  return o;
}

OrderExpr OrderExpr::reg(const std::string& name, const std::vector<std::string>& regulars) {
  if (std::find(regulars.begin(), regulars.end(), name) == regulars.end()) {
    throw OrderError("'" + name + "' is not a declared regular cardinal");
  }
  OrderExpr o;
  o.blocks_.push_back({OrderBlock::Kind::Reg, 0, name});
  return o;
}

OrderExpr OrderExpr::sum(const OrderExpr& left, const OrderExpr& right) {
  OrderExpr o = left;
  for (const auto& b : right.blocks_) {
    if (b.kind == OrderBlock::Kind::Fin && !o.blocks_.empty() &&
        o.blocks_.back().kind == OrderBlock::Kind::Fin) {
      o.blocks_.back().length += b.length;
    } else {
      o.blocks_.push_back(b);
    }
  }
  return o;
}

namespace {

class OrderParser {
 public:
  OrderParser(std::string_view text, const std::vector<std::string>& regulars)
      : text_(text), regulars_(regulars) {}

  OrderExpr parse() {
    OrderExpr e = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, 1, pos_ + 1); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected an order term");
    return std::string(text_.substr(start, pos_ - start));
  }

  OrderExpr expr() {
    OrderExpr e = term();
    while (accept('+')) e = OrderExpr::sum(e, term());
    return e;
  }

  OrderExpr term() {
    if (accept('(')) {
      OrderExpr e = expr();
      expect(')');
      return e;
    }
    const std::size_t start = pos_;
    const std::string w = word();
    if (w == "omega") return OrderExpr::omega();
    if (w == "fin") {
      expect('(');
      const std::string n = word();
      if (!std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isdigit(c); })) {
        fail("fin expects a natural number");
      }
      expect(')');
      return OrderExpr::fin(std::stoull(n));
    }
    if (w == "reg") {
      expect('(');
      const std::string name = word();
      expect(')');
      try {
        return OrderExpr::reg(name, regulars_);
      } catch (const OrderError& e) {
        throw ParseError(e.what(), 1, start + 1);
      }
    }
    pos_ = start;
    fail("unknown order term '" + w + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& regulars_;
  std::size_t pos_ = 0;
};

}  // namespace

OrderExpr OrderExpr::parse(std::string_view text, const std::vector<std::string>& regulars) {
  return OrderParser(text, regulars).parse();
}

std::string OrderExpr::str() const {
  if (blocks_.empty()) return "fin(0)";
  std::string out;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) out += " + ";
    const auto& b = blocks_[i];
    switch (b.kind) {
      case OrderBlock::Kind::Fin:
        out += "fin(" + std::to_string(b.length) + ")";
        break;
      case OrderBlock::Kind::Omega:
        out += "omega";
        break;
      case OrderBlock::Kind::Reg:
        out += "reg(" + b.regular + ")";
        break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cofinality

CofinalityResult OrderExpr::cofinality() const {
  if (blocks_.empty()) return {CofinalityResult::Kind::Empty, ""};
  const auto& last = blocks_.back();
  switch (last.kind) {
    case OrderBlock::Kind::Fin:
      return {CofinalityResult::Kind::HasLast, ""};
    case OrderBlock::Kind::Omega:
      return {CofinalityResult::Kind::Cof, "omega"};
    case OrderBlock::Kind::Reg:
      return {CofinalityResult::Kind::Cof, last.regular};
  }
  return {};
}

bool OrderExpr::hasRegular() const {
  return std::any_of(blocks_.begin(), blocks_.end(),
                     [](const OrderBlock& b) { return b.kind == OrderBlock::Kind::Reg; });
}

bool OrderExpr::finite() const {
  return std::all_of(blocks_.begin(), blocks_.end(),
                     [](const OrderBlock& b) { return b.kind == OrderBlock::Kind::Fin; });
}

std::size_t OrderExpr::cardinality() const {
  if (!finite()) throw OrderError("order " + str() + " is infinite");
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.length;
  return n;
}

bool connectedDecision(const OrderExpr& x, const OrderExpr& y) {
  const auto cx = x.cofinality();
  const auto cy = y.cofinality();
  for (const auto* c : {&cx, &cy}) {
    if (c->kind != CofinalityResult::Kind::Cof) {
      throw OrderError("orders that are empty or have a last element cannot be connected");
    }
  }
  return cx == cy;
}

// ---------------------------------------------------------------------------
// Elements

void OrderExpr::requireElements() const {
  if (hasRegular()) {
    throw OrderError("order " + str() + " has an uncountable block and no element representation");
  }
}

bool OrderExpr::contains(const OrderElement& e) const {
  if (e.block >= blocks_.size()) return false;
  const auto& b = blocks_[e.block];
  return b.kind == OrderBlock::Kind::Omega || (b.kind == OrderBlock::Kind::Fin && e.index < b.length);
}

bool OrderExpr::less(const OrderElement& a, const OrderElement& b) const {
  return a.block != b.block ? a.block < b.block : a.index < b.index;
}

bool OrderExpr::leq(const OrderElement& a, const OrderElement& b) const { return !less(b, a); }

std::optional<OrderElement> OrderExpr::least() const {
  requireElements();
  if (blocks_.empty()) return std::nullopt;
  return OrderElement{0, 0};
}

std::optional<OrderElement> OrderExpr::successor(const OrderElement& e) const {
  requireElements();
  const auto& b = blocks_.at(e.block);
  if (b.kind == OrderBlock::Kind::Omega || e.index + 1 < b.length) {
    return OrderElement{e.block, e.index + 1};
  }
  if (e.block + 1 < blocks_.size()) return OrderElement{e.block + 1, 0};
  return std::nullopt;
}

std::string OrderExpr::render(const OrderElement& e) const {
  if (blocks_.size() == 1) return std::to_string(e.index);
  return std::to_string(e.block) + ":" + std::to_string(e.index);
}

OrderElement OrderExpr::parseElement(std::string_view text) const {
  requireElements();
  OrderElement e;
  try {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
      e.index = std::stoull(std::string(text));
    } else {
      e.block = std::stoull(std::string(text.substr(0, colon)));
      e.index = std::stoull(std::string(text.substr(colon + 1)));
    }
  } catch (const std::logic_error&) {
    throw ParseError("invalid order element '" + std::string(text) + "'", 1, 1);
  }
  if (!contains(e)) throw OrderError("element '" + std::string(text) + "' not in " + str());
  return e;
}

std::vector<OrderElement> OrderExpr::prefix(std::size_t count) const {
  requireElements();
  std::vector<OrderElement> out;
  bool anyOmega = false;
  for (std::size_t b = 0; b < blocks_.size() && out.size() < count; ++b) {
    if (blocks_[b].kind == OrderBlock::Kind::Omega) {
      anyOmega = true;
      out.push_back({b, 0});
    } else {
      for (std::size_t i = 0; i < blocks_[b].length && out.size() < count; ++i) out.push_back({b, i});
    }
  }
  for (std::size_t stage = 1; anyOmega && out.size() < count; ++stage) {
    for (std::size_t b = 0; b < blocks_.size() && out.size() < count; ++b) {
      if (blocks_[b].kind == OrderBlock::Kind::Omega) out.push_back({b, stage});
    }
  }
  return out;
}

std::optional<std::vector<OrderElement>> OrderExpr::downset(const OrderElement& e) const {
  requireElements();
  for (std::size_t b = 0; b < e.block; ++b) {
    if (blocks_[b].kind != OrderBlock::Kind::Fin) return std::nullopt;
  }
  std::vector<OrderElement> out;
  for (std::size_t b = 0; b < e.block; ++b) {
    for (std::size_t i = 0; i < blocks_[b].length; ++i) out.push_back({b, i});
  }
  for (std::size_t i = 0; i <= e.index; ++i) out.push_back({e.block, i});
  return out;
}

void OrderExpr::requireOmegaCofinal() const {
  requireElements();
  const auto c = cofinality();
  if (c.kind != CofinalityResult::Kind::Cof || c.regular != "omega") {
    throw OrderError("order " + str() + " does not have cofinality omega");
  }
}

// The element constructions validate their carriers once; these two run
// inside membership tests and only check the last block.
OrderElement OrderExpr::fundamental(std::size_t n) const {
  if (blocks_.empty() || blocks_.back().kind != OrderBlock::Kind::Omega) requireOmegaCofinal();
  return {blocks_.size() - 1, n};
}

std::size_t OrderExpr::leastIndexAbove(const OrderElement& e) const {
  if (blocks_.empty() || blocks_.back().kind != OrderBlock::Kind::Omega) requireOmegaCofinal();
  return e.block + 1 < blocks_.size() ? 0 : e.index;
}

// ---------------------------------------------------------------------------
// Truth values

Truth truthAnd(Truth a, Truth b) { return std::min(a, b); }
Truth truthOr(Truth a, Truth b) { return std::max(a, b); }

Truth truthNot(Truth a) {
  switch (a) {
    case Truth::False:
      return Truth::True;
    case Truth::True:
      return Truth::False;
    default:
      return Truth::Unknown;
  }
}

bool definite(Truth t) { return t == Truth::True || t == Truth::False; }

namespace {

Truth fromBool(bool b) { return b ? Truth::True : Truth::False; }

/// Quantifier domain: a list of candidates and whether it exhausts the
/// intended range.
struct Range {
  std::vector<OrderElement> elements;
  bool complete = false;
};

Range prefixRange(const OrderExpr& o, std::size_t count) {
  Range r{o.prefix(count), false};
  r.complete = o.finite() && r.elements.size() == o.cardinality();
  return r;
}

/// Elements >= lo within a range, filtered lazily. Complete exactly when
/// the underlying range is.
struct Above {
  const OrderExpr& order;
  const Range& range;
  OrderElement lo;
};

Above above(const OrderExpr& o, const Range& r, const OrderElement& lo) { return {o, r, lo}; }

Range below(const OrderExpr& o, const Range& r, const OrderElement& hi) {
  if (auto d = o.downset(hi)) return {std::move(*d), true};
  Range out;
  for (const auto& e : r.elements) {
    if (o.leq(e, hi)) out.elements.push_back(e);
  }
  out.complete = false;
  return out;
}

const std::vector<OrderElement>& elementsOf(const Range& r) { return r.elements; }
const std::vector<OrderElement>& elementsOf(const Above& a) { return a.range.elements; }
bool completeOf(const Range& r) { return r.complete; }
bool completeOf(const Above& a) { return a.range.complete; }
bool keep(const Range&, const OrderElement&) { return true; }
bool keep(const Above& a, const OrderElement& e) { return a.order.leq(a.lo, e); }

template <typename R, typename Body>
Truth forAll(const R& r, Body&& body, std::optional<OrderElement>* counterexample = nullptr) {
  Truth result = Truth::True;
  for (const auto& e : elementsOf(r)) {
    if (!keep(r, e)) continue;
    const Truth v = body(e);
    if (v == Truth::False) {
      if (counterexample) *counterexample = e;
      return Truth::False;
    }
    result = truthAnd(result, v);
  }
  if (!completeOf(r) && result == Truth::True) result = Truth::Bounded;
  return result;
}

/// Stops at the first instance that is at least bounded-true; a later exact
/// instance could only sharpen the answer, never change its direction.
template <typename R, typename Body>
Truth exists(const R& r, Body&& body) {
  Truth result = Truth::False;
  for (const auto& e : elementsOf(r)) {
    if (!keep(r, e)) continue;
    const Truth v = body(e);
    if (v == Truth::True || v == Truth::Bounded) return v;
    result = truthOr(result, v);
  }
  if (!completeOf(r) && result == Truth::False) result = Truth::Unknown;
  return result;
}

void requireCompatible(const OrderExpr& a, const OrderExpr& b, const char* what) {
  if (!(a == b)) throw OrderError(std::string(what) + ": carriers " + a.str() + " and " + b.str() + " differ");
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructions

LazyRelation buildConnection(const OrderExpr& x, const OrderExpr& y) {
  x.requireOmegaCofinal();
  y.requireOmegaCofinal();
  LazyRelation g;
  g.name = "connection";
  g.x = x;
  g.y = y;
  g.member = [x, y](const OrderElement& a, const OrderElement& b) {
    return fromBool(y.leq(y.fundamental(x.leastIndexAbove(a)), b));
  };
  g.antitoneX = true;
  g.monotoneY = true;
  g.threshold = [x, y](const OrderElement& a) -> std::optional<OrderElement> {
    return y.fundamental(x.leastIndexAbove(a));
  };
  g.witness1 = [x, y](const OrderElement& a) {
    return LazyRelation::Pair{a, y.fundamental(x.leastIndexAbove(a))};
  };
  g.witness2 = [x, y](const OrderElement& b) {
    return LazyRelation::Pair{b, x.fundamental(y.leastIndexAbove(b) + 1)};
  };
  return g;
}

LazyRelation buildConnectionSparse(const OrderExpr& x, const OrderExpr& y) {
  x.requireOmegaCofinal();
  y.requireOmegaCofinal();
  LazyRelation g;
  g.name = "sparse";
  g.x = x;
  g.y = y;
  g.member = [x, y](const OrderElement& a, const OrderElement& b) {
    const std::size_t n = x.leastIndexAbove(a);
    if (!(x.fundamental(n) == a)) return Truth::False;
    return fromBool(y.leq(y.fundamental(n), b));
  };
  g.monotoneY = true;
  g.sparseSequence = true;
  g.threshold = [x, y](const OrderElement& a) -> std::optional<OrderElement> {
    const std::size_t n = x.leastIndexAbove(a);
    if (!(x.fundamental(n) == a)) return std::nullopt;
    return y.fundamental(n);
  };
  g.witness1 = [x, y](const OrderElement& a) {
    const std::size_t n = x.leastIndexAbove(a);
    return LazyRelation::Pair{x.fundamental(n), y.fundamental(n)};
  };
  g.witness2 = [x, y](const OrderElement& b) {
    return LazyRelation::Pair{b, x.fundamental(y.leastIndexAbove(b) + 1)};
  };
  return g;
}

LazyRelation selfConnection(const OrderExpr& x) {
  x.requireElements();
  if (x.cofinality().kind != CofinalityResult::Kind::Cof) {
    throw OrderError("order " + x.str() + " is empty or has a last element");
  }
  LazyRelation g;
  g.name = "self";
  g.x = x;
  g.y = x;
  g.member = [x](const OrderElement& a, const OrderElement& b) { return fromBool(x.leq(a, b)); };
  g.antitoneX = true;
  g.monotoneY = true;
  g.threshold = [](const OrderElement& a) -> std::optional<OrderElement> { return a; };
  g.witness1 = [](const OrderElement& a) { return LazyRelation::Pair{a, a}; };
  g.witness2 = [x](const OrderElement& b) { return LazyRelation::Pair{b, *x.successor(b)}; };
  return g;
}

LazyRelation fullRelation(const OrderExpr& x, const OrderExpr& y) {
  x.requireElements();
  y.requireElements();
  LazyRelation g;
  g.name = "full";
  g.x = x;
  g.y = y;
  g.member = [](const OrderElement&, const OrderElement&) { return Truth::True; };
  g.antitoneX = true;
  g.monotoneY = true;
  g.threshold = [y](const OrderElement&) { return y.least(); };
  if (y.least()) {
    g.witness1 = [y](const OrderElement& a) { return LazyRelation::Pair{a, *y.least()}; };
  }
  return g;
}

LazyRelation emptyRelation(const OrderExpr& x, const OrderExpr& y) {
  x.requireElements();
  y.requireElements();
  LazyRelation g;
  g.name = "empty";
  g.x = x;
  g.y = y;
  g.member = [](const OrderElement&, const OrderElement&) { return Truth::False; };
  g.antitoneX = true;
  g.monotoneY = true;
  g.threshold = [](const OrderElement&) -> std::optional<OrderElement> { return std::nullopt; };
  if (x.least()) {
    g.witness2 = [x](const OrderElement& b) { return LazyRelation::Pair{b, *x.least()}; };
  }
  return g;
}

LazyRelation inverseNeg(const LazyRelation& g) {
  LazyRelation h;
  h.name = "inverseNeg(" + g.name + ")";
  h.x = g.y;
  h.y = g.x;
  auto member = g.member;
  h.member = [member](const OrderElement& a, const OrderElement& b) {
    return truthNot(member(b, a));
  };
  h.antitoneX = g.monotoneY;
  h.monotoneY = g.antitoneX;
  h.witness1 = g.witness2;
  h.witness2 = g.witness1;
  return h;
}

LazyRelation compose(const LazyRelation& g, const LazyRelation& h, std::size_t bound) {
  requireCompatible(g.y, h.x, "compose");
  LazyRelation k;
  k.name = "compose(" + g.name + "," + h.name + ")";
  k.x = g.x;
  k.y = h.y;
  k.monotoneY = h.monotoneY;
  const OrderExpr mid = g.y;
  auto gm = g.member;
  auto hm = h.member;
  if (g.threshold && h.antitoneX) {
    // forall y >= y' G(x, y) iff y' >= t(x); H antitone picks y' = t(x).
    auto t = g.threshold;
    k.member = [t, hm](const OrderElement& a, const OrderElement& c) {
      const auto start = t(a);
      if (!start) return Truth::False;
      return hm(*start, c);
    };
    return k;
  }
  if (g.threshold) {
    auto t = g.threshold;
    auto ys = std::make_shared<const Range>(prefixRange(mid, bound));
    k.member = [t, hm, mid, ys](const OrderElement& a, const OrderElement& c) {
      const auto start = t(a);
      if (!start) return Truth::False;
      return exists(above(mid, *ys, *start),
                    [&](const OrderElement& yp) { return hm(yp, c); });
    };
    return k;
  }
  auto outer = std::make_shared<const Range>(prefixRange(mid, bound));
  auto inner = std::make_shared<const Range>(prefixRange(mid, 2 * bound));
  k.member = [gm, hm, mid, outer, inner](const OrderElement& a, const OrderElement& c) {
    return exists(*outer, [&](const OrderElement& yp) {
      const Truth tail =
          forAll(above(mid, *inner, yp), [&](const OrderElement& yy) { return gm(a, yy); });
      return truthAnd(tail, hm(yp, c));
    });
  };
  return k;
}

LazyRelation antitoneClosure(const LazyRelation& g, std::size_t bound) {
  if (g.antitoneX) return g;
  LazyRelation k;
  k.name = "anti(" + g.name + ")";
  k.x = g.x;
  k.y = g.y;
  k.antitoneX = true;
  k.monotoneY = g.monotoneY;
  k.witness1 = g.witness1;
  k.witness2 = g.witness2;
  if (g.sparseSequence) {
    // exists n >= n0(x) with y_n <= y, i.e. y_{n0(x)} <= y.
    const OrderExpr x = g.x;
    const OrderExpr y = g.y;
    k.member = [x, y](const OrderElement& a, const OrderElement& b) {
      return fromBool(y.leq(y.fundamental(x.leastIndexAbove(a)), b));
    };
    k.threshold = [x, y](const OrderElement& a) -> std::optional<OrderElement> {
      return y.fundamental(x.leastIndexAbove(a));
    };
    return k;
  }
  auto gm = g.member;
  const OrderExpr x = g.x;
  auto xs = std::make_shared<const Range>(prefixRange(x, bound));
  k.member = [gm, x, xs](const OrderElement& a, const OrderElement& b) {
    return exists(above(x, *xs, a),
                  [&](const OrderElement& xp) { return gm(xp, b); });
  };
  return k;
}

LazyRelation monotoneLower(const LazyRelation& g, std::size_t bound) {
  if (g.monotoneY) return g;
  LazyRelation k;
  k.name = "lower(" + g.name + ")";
  k.x = g.x;
  k.y = g.y;
  k.antitoneX = g.antitoneX;
  k.monotoneY = true;
  k.witness1 = g.witness1;
  auto gm = g.member;
  const OrderExpr y = g.y;
  auto ys = std::make_shared<const Range>(prefixRange(y, bound));
  k.member = [gm, y, ys](const OrderElement& a, const OrderElement& b) {
    return exists(below(y, *ys, b),
                  [&](const OrderElement& yp) { return gm(a, yp); });
  };
  return k;
}

NormalizedPair normalizeMonotone(const LazyRelation& g, std::size_t bound) {
  LazyRelation direct;
  if (g.antitoneX && g.monotoneY) {
    direct = g;
  } else if (g.monotoneY) {
    direct = antitoneClosure(g, bound);
  } else {
    direct.x = g.x;
    direct.y = g.y;
    auto gm = g.member;
    const OrderExpr x = g.x;
    const OrderExpr y = g.y;
    const bool antitone = g.antitoneX;
    auto xs = std::make_shared<const Range>(prefixRange(x, bound));
    auto ys = std::make_shared<const Range>(prefixRange(y, 2 * bound));
    direct.member = [gm, x, y, xs, ys, antitone](const OrderElement& a, const OrderElement& b) {
      auto tail = [&](const OrderElement& xp) {
        return forAll(above(y, *ys, b), [&](const OrderElement& yp) { return gm(xp, yp); });
      };
      if (antitone) return tail(a);
      return exists(above(x, *xs, a), tail);
    };
  }
  direct.name = "normal(" + g.name + ")";
  direct.antitoneX = true;
  direct.monotoneY = true;
  LazyRelation factored =
      antitoneClosure(inverseNeg(antitoneClosure(inverseNeg(g), bound)), bound);
  factored.name = "normalFactored(" + g.name + ")";
  factored.antitoneX = true;
  factored.monotoneY = true;
  return {std::move(direct), std::move(factored)};
}

// ---------------------------------------------------------------------------
// Verdicts

std::string Verdict::token() const {
  switch (kind) {
    case Kind::ExactTrue:
      return "EXACT_TRUE";
    case Kind::ExactFalse:
      return "EXACT_FALSE";
    case Kind::SatisfiedUpTo:
      return "SAT_UPTO(" + std::to_string(bound) + ")";
    case Kind::Unknown:
      return "UNKNOWN(" + std::to_string(bound) + ")";
    case Kind::RefutedAt: {
      std::string out = "REFUTED(";
      for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i) out += ",";
        out += witness[i];
      }
      return out + ")";
    }
  }
  return "";
}

namespace {

Verdict verdictOf(Truth t, std::size_t bound, const std::optional<OrderElement>& counterexample,
                  const OrderExpr& outer) {
  Verdict v;
  v.bound = bound;
  switch (t) {
    case Truth::True:
      v.kind = Verdict::Kind::ExactTrue;
      break;
    case Truth::Bounded:
      v.kind = Verdict::Kind::SatisfiedUpTo;
      break;
    case Truth::Unknown:
      v.kind = Verdict::Kind::Unknown;
      break;
    case Truth::False:
      if (counterexample) {
        v.kind = Verdict::Kind::RefutedAt;
        v.witness.push_back(outer.render(*counterexample));
      } else {
        v.kind = Verdict::Kind::ExactFalse;
      }
      break;
  }
  return v;
}

Verdict exact() {
  Verdict v;
  v.kind = Verdict::Kind::ExactTrue;
  return v;
}

/// Caches a per-element truth value; the middle quantifier blocks of the
/// checks depend only on their own variable.
template <typename F>
auto memoized(F f) {
  return [f = std::move(f), cache = std::map<std::pair<std::size_t, std::size_t>, Truth>()](
             const OrderElement& e) mutable {
    const auto key = std::make_pair(e.block, e.index);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const Truth t = f(e);
    cache.emplace(key, t);
    return t;
  };
}

constexpr std::size_t kSpotChecks = 24;

/// Samples the witness: for x' in a prefix, (x, y') = w(x') must satisfy
/// x >= x' and holds(x, y) for y >= y' in a prefix. `holds` reports false
/// only for a definite contradiction, so bounded memberships pass.
void spotCheck(const std::function<LazyRelation::Pair(const OrderElement&)>& w,
               const OrderExpr& outer, const OrderExpr& inner,
               const std::function<bool(const OrderElement&, const OrderElement&)>& holds,
               const std::string& what) {
  const auto samplesOuter = outer.prefix(kSpotChecks);
  const auto samplesInner = inner.prefix(4 * kSpotChecks);
  for (const auto& xp : samplesOuter) {
    const auto [x, yp] = w(xp);
    if (!outer.leq(xp, x)) throw OrderError(what + " witness is not above its argument");
    if (!holds(x, yp)) throw OrderError(what + " witness fails at its own bound");
    for (const auto& y : samplesInner) {
      if (inner.leq(yp, y) && !holds(x, y)) throw OrderError(what + " witness fails on a sample");
    }
  }
}

}  // namespace

PropertyVerdicts checkConnection(const LazyRelation& g, std::size_t bound) {
  g.x.requireElements();
  g.y.requireElements();
  PropertyVerdicts out;

  if (g.witness1) {
    spotCheck(g.witness1, g.x, g.y,
              [&](const OrderElement& a, const OrderElement& b) { return g(a, b) != Truth::False; },
              "property (1)");
    out.first = exact();
  } else {
    const Range outer = prefixRange(g.x, bound);
    const Range midX = prefixRange(g.x, 2 * bound);
    const Range midY = prefixRange(g.y, 2 * bound);
    const Range innerY = prefixRange(g.y, 4 * bound);
    auto tail = memoized([&](const OrderElement& x) {
      return exists(midY, [&](const OrderElement& yp) {
        return forAll(above(g.y, innerY, yp), [&](const OrderElement& y) { return g(x, y); });
      });
    });
    std::optional<OrderElement> ce;
    const Truth t = forAll(
        outer, [&](const OrderElement& xp) { return exists(above(g.x, midX, xp), tail); }, &ce);
    out.first = verdictOf(t, bound, ce, g.x);
  }

  if (g.witness2) {
    spotCheck(g.witness2, g.y, g.x,
              [&](const OrderElement& b, const OrderElement& a) { return g(a, b) != Truth::True; },
              "property (2)");
    out.second = exact();
  } else {
    const Range outer = prefixRange(g.y, bound);
    const Range midY = prefixRange(g.y, 2 * bound);
    const Range midX = prefixRange(g.x, 2 * bound);
    const Range innerX = prefixRange(g.x, 4 * bound);
    auto tail = memoized([&](const OrderElement& y) {
      return exists(midX, [&](const OrderElement& xp) {
        return forAll(above(g.x, innerX, xp),
                      [&](const OrderElement& x) { return truthNot(g(x, y)); });
      });
    });
    std::optional<OrderElement> ce;
    const Truth t = forAll(
        outer, [&](const OrderElement& yp) { return exists(above(g.y, midY, yp), tail); }, &ce);
    out.second = verdictOf(t, bound, ce, g.y);
  }
  return out;
}

PropertyVerdicts checkConditions34(const LazyRelation& g, std::size_t bound) {
  g.x.requireElements();
  g.y.requireElements();
  PropertyVerdicts out;

  if (g.witness1) {
    spotCheck(g.witness1, g.x, g.y,
              [&](const OrderElement& a, const OrderElement& b) { return g(a, b) != Truth::False; },
              "condition (3)");
    out.first = exact();
  } else {
    const Range outer = prefixRange(g.x, bound);
    const Range midX = prefixRange(g.x, 2 * bound);
    const Range midY = prefixRange(g.y, 2 * bound);
    auto tail = memoized([&](const OrderElement& x) {
      return exists(midY, [&](const OrderElement& y) { return g(x, y); });
    });
    std::optional<OrderElement> ce;
    const Truth t = forAll(
        outer, [&](const OrderElement& xp) { return exists(above(g.x, midX, xp), tail); }, &ce);
    out.first = verdictOf(t, bound, ce, g.x);
  }

  if (g.witness2 && g.monotoneY) {
    // not G(x, y) for x >= x' and monotonicity give not G(x, y0) for y0 <= y.
    spotCheck(g.witness2, g.y, g.x,
              [&](const OrderElement& b, const OrderElement& a) { return g(a, b) != Truth::True; },
              "condition (4)");
    out.second = exact();
  } else {
    const Range outer = prefixRange(g.y, bound);
    const Range midX = prefixRange(g.x, 2 * bound);
    const Range innerX = prefixRange(g.x, 4 * bound);
    const Range innerY = prefixRange(g.y, 4 * bound);
    std::optional<OrderElement> ce;
    const Truth t = forAll(
        outer,
        [&](const OrderElement& yp) {
          const Range ys = below(g.y, innerY, yp);
          return exists(midX, [&](const OrderElement& xp) {
            return forAll(above(g.x, innerX, xp), [&](const OrderElement& x) {
              return forAll(ys, [&](const OrderElement& y) { return truthNot(g(x, y)); });
            });
          });
        },
        &ce);
    out.second = verdictOf(t, bound, ce, g.y);
  }
  return out;
}

}  // namespace qcf
