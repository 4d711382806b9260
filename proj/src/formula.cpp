#include "qcf/formula.hpp"

#include <algorithm>
#include <set>

#include "qcf/error.hpp"
#include "qcf/syntax.hpp"

namespace qcf {

Term Term::variable(std::string name) { return Term{Kind::Variable, std::move(name), {}}; }

Term Term::constant(std::string name) { return Term{Kind::Constant, std::move(name), {}}; }

Term Term::application(std::string function, std::vector<Term> args) {
  return Term{Kind::Application, std::move(function), std::move(args)};
}

bool operator==(const Term& a, const Term& b) {
  return a.kind == b.kind && a.name == b.name && a.args == b.args;
}

struct Formula::Node {
  FormulaKind kind;
  std::string name;
  std::vector<Term> terms;
  std::string var;
  std::string var2;
  std::optional<Formula> lhs;
  std::optional<Formula> rhs;
  std::optional<QcfTemplate> tmpl;
  std::vector<std::string> params;
};

namespace {

const std::string kEqualName = "=";

}  // namespace

Formula Formula::atom(std::string relation, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Atom;
  n->name = std::move(relation);
  n->terms = std::move(args);
  return Formula(std::move(n));
}

Formula Formula::equal(Term lhs, Term rhs) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Equal;
  n->name = kEqualName;
  n->terms = {std::move(lhs), std::move(rhs)};
  return Formula(std::move(n));
}

Formula Formula::negation(Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Not;
  n->lhs = std::move(body);
  return Formula(std::move(n));
}

namespace {

template <class NodeT>
std::shared_ptr<NodeT> binaryNode(FormulaKind kind, Formula lhs, Formula rhs) {
  auto n = std::make_shared<NodeT>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

}  // namespace

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(binaryNode<Node>(FormulaKind::And, std::move(lhs), std::move(rhs)));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(binaryNode<Node>(FormulaKind::Or, std::move(lhs), std::move(rhs)));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  return Formula(binaryNode<Node>(FormulaKind::Implies, std::move(lhs), std::move(rhs)));
}

Formula Formula::biconditional(Formula lhs, Formula rhs) {
  return Formula(binaryNode<Node>(FormulaKind::Iff, std::move(lhs), std::move(rhs)));
}

Formula Formula::exists(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Exists;
  n->var = std::move(var);
  n->lhs = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::forall(std::string var, Formula body) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Forall;
  n->var = std::move(var);
  n->lhs = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::qcf(std::string x, std::string y, Formula body) {
  if (x == y) {
    throw SignatureError("Qcf must bind two different variables, got '" + x + "' twice");
  }
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Qcf;
  auto [tmpl, params] = QcfTemplate::of(body, x, y);
  n->tmpl = std::move(tmpl);
  n->params = std::move(params);
  n->var = std::move(x);
  n->var2 = std::move(y);
  n->lhs = std::move(body);
  return Formula(std::move(n));
}

Formula Formula::conjunctionOf(const std::vector<Formula>& parts) {
  if (parts.empty()) throw std::invalid_argument("conjunctionOf: empty list");
  Formula acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = conjunction(acc, parts[i]);
  return acc;
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::relation() const { return node_->name; }
const std::vector<Term>& Formula::terms() const { return node_->terms; }
const std::string& Formula::var() const { return node_->var; }
const std::string& Formula::var2() const { return node_->var2; }
const Formula& Formula::lhs() const { return *node_->lhs; }
const Formula& Formula::rhs() const { return *node_->rhs; }

const QcfTemplate& Formula::qcfTemplate() const {
  if (!node_->tmpl) throw std::logic_error("qcfTemplate() on a non-Qcf node");
  return *node_->tmpl;
}

const std::vector<std::string>& Formula::qcfParameters() const { return node_->params; }

bool Formula::isBinary() const {
  switch (node_->kind) {
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
      return true;
    default:
      return false;
  }
}

bool Formula::isBinder() const {
  return node_->kind == FormulaKind::Exists || node_->kind == FormulaKind::Forall ||
         node_->kind == FormulaKind::Qcf;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.name != y.name || x.terms != y.terms || x.var != y.var ||
      x.var2 != y.var2) {
    return false;
  }
  if (x.lhs.has_value() != y.lhs.has_value() || x.rhs.has_value() != y.rhs.has_value()) {
    return false;
  }
  if (x.lhs && !(*x.lhs == *y.lhs)) return false;
  if (x.rhs && !(*x.rhs == *y.rhs)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void pushUnique(std::vector<std::string>& out, const std::string& name) {
  if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
}

void collectTermVars(const Term& t, std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Variable) {
    pushUnique(out, t.name);
    return;
  }
  for (const auto& a : t.args) collectTermVars(a, out);
}

void collectTermVarsExcept(const Term& t, const std::vector<std::string>& bound,
                           std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Variable) {
    if (std::find(bound.begin(), bound.end(), t.name) == bound.end()) pushUnique(out, t.name);
    return;
  }
  for (const auto& a : t.args) collectTermVarsExcept(a, bound, out);
}

void collectFree(const Formula& f, std::vector<std::string>& bound,
                 std::vector<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      for (const auto& t : f.terms()) collectTermVarsExcept(t, bound, out);
      return;
    case FormulaKind::Not:
      collectFree(f.lhs(), bound, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
      collectFree(f.lhs(), bound, out);
      collectFree(f.rhs(), bound, out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      bound.push_back(f.var());
      collectFree(f.body(), bound, out);
      bound.pop_back();
      return;
    case FormulaKind::Qcf:
      bound.push_back(f.var());
      bound.push_back(f.var2());
      collectFree(f.body(), bound, out);
      bound.pop_back();
      bound.pop_back();
      return;
  }
}

void collectAll(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      for (const auto& t : f.terms()) collectTermVars(t, out);
      return;
    case FormulaKind::Not:
      collectAll(f.lhs(), out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Iff:
      collectAll(f.lhs(), out);
      collectAll(f.rhs(), out);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      pushUnique(out, f.var());
      collectAll(f.body(), out);
      return;
    case FormulaKind::Qcf:
      pushUnique(out, f.var());
      pushUnique(out, f.var2());
      collectAll(f.body(), out);
      return;
  }
}

void collectConstants(const Term& t, std::vector<std::string>& out) {
  if (t.kind == Term::Kind::Constant) pushUnique(out, t.name);
  for (const auto& a : t.args) collectConstants(a, out);
}

void collectConstants(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      for (const auto& t : f.terms()) collectConstants(t, out);
      return;
    case FormulaKind::Not:
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::Qcf:
      collectConstants(f.lhs(), out);
      return;
    default:
      collectConstants(f.lhs(), out);
      collectConstants(f.rhs(), out);
      return;
  }
}

}  // namespace

std::vector<std::string> freeVariables(const Formula& f) {
  std::vector<std::string> bound;
  std::vector<std::string> out;
  collectFree(f, bound, out);
  return out;
}

std::vector<std::string> termVariables(const Term& t) {
  std::vector<std::string> out;
  collectTermVars(t, out);
  return out;
}

bool isFree(const Formula& f, std::string_view var) {
  const auto vars = freeVariables(f);
  return std::find(vars.begin(), vars.end(), var) != vars.end();
}

bool isSentence(const Formula& f) { return freeVariables(f).empty(); }

std::vector<std::string> allVariables(const Formula& f) {
  std::vector<std::string> out;
  collectAll(f, out);
  return out;
}

std::vector<std::string> constantsIn(const Formula& f) {
  std::vector<std::string> out;
  collectConstants(f, out);
  return out;
}

std::string freshName(const std::string& base, const std::vector<std::string>& taken) {
  std::string candidate = base + "'";
  while (std::find(taken.begin(), taken.end(), candidate) != taken.end()) candidate += "'";
  return candidate;
}

// ---------------------------------------------------------------------------
// Substitution

Term substituteTerm(const Term& t, const std::map<std::string, Term>& replacements) {
  if (t.kind == Term::Kind::Variable) {
    auto it = replacements.find(t.name);
    return it == replacements.end() ? t : it->second;
  }
  if (t.kind == Term::Kind::Constant) return t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(substituteTerm(a, replacements));
  return Term::application(t.name, std::move(args));
}

namespace {

// Drops replacements for `var` and any whose variable is not free in body.
std::map<std::string, Term> relevantReplacements(const std::map<std::string, Term>& replacements,
                                                 const std::vector<std::string>& binders,
                                                 const Formula& body) {
  std::map<std::string, Term> out;
  const auto free = freeVariables(body);
  for (const auto& [name, term] : replacements) {
    if (std::find(binders.begin(), binders.end(), name) != binders.end()) continue;
    if (std::find(free.begin(), free.end(), name) == free.end()) continue;
    out.emplace(name, term);
  }
  return out;
}

Formula substituteImpl(const Formula& f, const std::map<std::string, Term>& replacements);

// Renames binders that would capture a variable of a replacement term.
std::vector<std::string> avoidCapture(const std::vector<std::string>& binders,
                                      const Formula& body, std::map<std::string, Term>& map) {
  std::vector<std::string> dangerous;
  for (const auto& [name, term] : map) {
    for (const auto& v : termVariables(term)) pushUnique(dangerous, v);
  }
  std::vector<std::string> taken = dangerous;
  for (const auto& v : freeVariables(body)) pushUnique(taken, v);
  for (const auto& [name, term] : map) pushUnique(taken, name);
  for (const auto& b : binders) pushUnique(taken, b);

  std::vector<std::string> renamed;
  for (const auto& b : binders) {
    if (std::find(dangerous.begin(), dangerous.end(), b) != dangerous.end()) {
      std::string fresh = freshName(b, taken);
      taken.push_back(fresh);
      map[b] = Term::variable(fresh);
      renamed.push_back(fresh);
    } else {
      renamed.push_back(b);
    }
  }
  return renamed;
}

Formula substituteImpl(const Formula& f, const std::map<std::string, Term>& replacements) {
  if (replacements.empty()) return f;
  switch (f.kind()) {
    case FormulaKind::Atom: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(substituteTerm(t, replacements));
      return Formula::atom(f.relation(), std::move(args));
    }
    case FormulaKind::Equal:
      return Formula::equal(substituteTerm(f.terms()[0], replacements),
                            substituteTerm(f.terms()[1], replacements));
    case FormulaKind::Not:
      return Formula::negation(substituteImpl(f.lhs(), replacements));
    case FormulaKind::And:
      return Formula::conjunction(substituteImpl(f.lhs(), replacements),
                                  substituteImpl(f.rhs(), replacements));
    case FormulaKind::Or:
      return Formula::disjunction(substituteImpl(f.lhs(), replacements),
                                  substituteImpl(f.rhs(), replacements));
    case FormulaKind::Implies:
      return Formula::implication(substituteImpl(f.lhs(), replacements),
                                  substituteImpl(f.rhs(), replacements));
    case FormulaKind::Iff:
      return Formula::biconditional(substituteImpl(f.lhs(), replacements),
                                    substituteImpl(f.rhs(), replacements));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      auto map = relevantReplacements(replacements, {f.var()}, f.body());
      if (map.empty()) return f;
      auto names = avoidCapture({f.var()}, f.body(), map);
      Formula body = substituteImpl(f.body(), map);
      return f.kind() == FormulaKind::Exists ? Formula::exists(names[0], std::move(body))
                                             : Formula::forall(names[0], std::move(body));
    }
    case FormulaKind::Qcf: {
      auto map = relevantReplacements(replacements, {f.var(), f.var2()}, f.body());
      if (map.empty()) return f;
      auto names = avoidCapture({f.var(), f.var2()}, f.body(), map);
      return Formula::qcf(names[0], names[1], substituteImpl(f.body(), map));
    }
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& replacements) {
  return substituteImpl(f, replacements);
}

Formula substitute(const Formula& f, const std::string& var, const Term& t) {
  return substituteImpl(f, {{var, t}});
}

// ---------------------------------------------------------------------------
// Canonical renaming

namespace {

Term renameTerm(const Term& t, const std::map<std::string, std::string>& env) {
  if (t.kind == Term::Kind::Variable) {
    auto it = env.find(t.name);
    return it == env.end() ? t : Term::variable(it->second);
  }
  if (t.kind == Term::Kind::Constant) return t;
  std::vector<Term> args;
  for (const auto& a : t.args) args.push_back(renameTerm(a, env));
  return Term::application(t.name, std::move(args));
}

// Renames bound variables to prefix + binder depth; `env` maps names in scope.
Formula renameBound(const Formula& f, std::map<std::string, std::string> env, std::size_t depth,
                    const std::string& prefix) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(renameTerm(t, env));
      return Formula::atom(f.relation(), std::move(args));
    }
    case FormulaKind::Equal:
      return Formula::equal(renameTerm(f.terms()[0], env), renameTerm(f.terms()[1], env));
    case FormulaKind::Not:
      return Formula::negation(renameBound(f.lhs(), env, depth, prefix));
    case FormulaKind::And:
      return Formula::conjunction(renameBound(f.lhs(), env, depth, prefix),
                                  renameBound(f.rhs(), env, depth, prefix));
    case FormulaKind::Or:
      return Formula::disjunction(renameBound(f.lhs(), env, depth, prefix),
                                  renameBound(f.rhs(), env, depth, prefix));
    case FormulaKind::Implies:
      return Formula::implication(renameBound(f.lhs(), env, depth, prefix),
                                  renameBound(f.rhs(), env, depth, prefix));
    case FormulaKind::Iff:
      return Formula::biconditional(renameBound(f.lhs(), env, depth, prefix),
                                    renameBound(f.rhs(), env, depth, prefix));
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      std::string name = prefix + std::to_string(depth + 1);
      env[f.var()] = name;
      Formula body = renameBound(f.body(), std::move(env), depth + 1, prefix);
      return f.kind() == FormulaKind::Exists ? Formula::exists(name, std::move(body))
                                             : Formula::forall(name, std::move(body));
    }
    case FormulaKind::Qcf: {
      std::string first = prefix + std::to_string(depth + 1);
      std::string second = prefix + std::to_string(depth + 2);
      env[f.var()] = first;
      env[f.var2()] = second;
      return Formula::qcf(first, second, renameBound(f.body(), std::move(env), depth + 2, prefix));
    }
  }
  return f;
}

void collectTemplates(const Formula& f, std::map<std::string, QcfTemplate>& out) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Equal:
      return;
    case FormulaKind::Qcf:
      out.emplace(f.qcfTemplate().key, f.qcfTemplate());
      collectTemplates(f.body(), out);
      return;
    case FormulaKind::Not:
    case FormulaKind::Exists:
    case FormulaKind::Forall:
      collectTemplates(f.lhs(), out);
      return;
    default:
      collectTemplates(f.lhs(), out);
      collectTemplates(f.rhs(), out);
      return;
  }
}

}  // namespace

std::pair<QcfTemplate, std::vector<std::string>> QcfTemplate::of(const Formula& formula,
                                                                 const std::string& orderX,
                                                                 const std::string& orderY) {
  std::vector<std::string> params;
  for (const auto& v : freeVariables(formula)) {
    if (v != orderX && v != orderY) params.push_back(v);
  }
  std::map<std::string, std::string> env;
  env[orderX] = "x";
  env[orderY] = "y";
  for (std::size_t i = 0; i < params.size(); ++i) env[params[i]] = "z" + std::to_string(i + 1);

  Formula canonical = renameBound(formula, std::move(env), 0, "b");
  QcfTemplate tmpl;
  tmpl.key = print(canonical);
  tmpl.body = std::make_shared<const Formula>(std::move(canonical));
  tmpl.arity = params.size();
  return {std::move(tmpl), std::move(params)};
}

Formula alphaNormalize(const Formula& f) { return renameBound(f, {}, 0, "#"); }

bool alphaEquivalent(const Formula& a, const Formula& b) {
  return alphaNormalize(a) == alphaNormalize(b);
}

std::vector<QcfTemplate> qcfTemplates(const Formula& f) {
  std::map<std::string, QcfTemplate> found;
  collectTemplates(f, found);
  std::vector<QcfTemplate> out;
  out.reserve(found.size());
  for (auto& [key, tmpl] : found) out.push_back(std::move(tmpl));
  return out;
}

// ---------------------------------------------------------------------------
// Templates and cofinal macros

Formula BinaryTemplate::apply(const Term& a, const Term& b) const {
  return substitute(body, {{left, a}, {right, b}});
}

std::vector<std::string> BinaryTemplate::parameters() const {
  std::vector<std::string> out;
  for (const auto& v : freeVariables(body)) {
    if (v != left && v != right) out.push_back(v);
  }
  return out;
}

Formula UnaryTemplate::apply(const Term& a) const { return substitute(body, var, a); }

BinaryTemplate reflexiveClosure(const BinaryTemplate& order) {
  return BinaryTemplate{
      Formula::disjunction(order.body, Formula::equal(Term::variable(order.left),
                                                      Term::variable(order.right))),
      order.left, order.right};
}

Formula expandCofinalMacro(CofinalKind kind, const std::string& var, const Formula& body,
                           const BinaryTemplate& leq, const std::optional<UnaryTemplate>& domain) {
  std::vector<std::string> taken = freeVariables(body);
  for (const auto& p : leq.parameters()) pushUnique(taken, p);
  if (domain) {
    for (const auto& v : freeVariables(domain->body)) {
      if (v != domain->var) pushUnique(taken, v);
    }
  }
  pushUnique(taken, var);
  const std::string lower = freshName(var, taken);

  const Term lowerTerm = Term::variable(lower);
  const Term varTerm = Term::variable(var);
  Formula bound = leq.apply(lowerTerm, varTerm);

  if (kind == CofinalKind::ExistsCofinal) {
    if (!domain) {
      return Formula::forall(lower, Formula::exists(var, Formula::conjunction(bound, body)));
    }
    Formula inner = Formula::exists(
        var, Formula::conjunctionOf({domain->apply(varTerm), bound, body}));
    return Formula::forall(lower, Formula::implication(domain->apply(lowerTerm), inner));
  }
  if (!domain) {
    return Formula::exists(lower, Formula::forall(var, Formula::implication(bound, body)));
  }
  Formula inner = Formula::forall(
      var, Formula::implication(domain->apply(varTerm), Formula::implication(bound, body)));
  return Formula::exists(lower, Formula::conjunction(domain->apply(lowerTerm), inner));
}

}  // namespace qcf
