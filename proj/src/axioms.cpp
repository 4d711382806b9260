#include "qcf/axioms.hpp"

#include <algorithm>
#include <sstream>

#include "qcf/error.hpp"

namespace qcf {

namespace {

void addUnique(std::vector<QcfTemplate>& list, QcfTemplate tmpl) {
  if (std::find(list.begin(), list.end(), tmpl) == list.end()) list.push_back(std::move(tmpl));
}

std::vector<QcfTemplate> sortedByKey(std::vector<QcfTemplate> list) {
  std::sort(list.begin(), list.end());
  return list;
}

Term var(const std::string& name) { return Term::variable(name); }

Formula forallAll(const std::vector<std::string>& vars, Formula body) {
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = Formula::forall(*it, body);
  return body;
}

std::string trim(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Formula qcfOf(const BinaryTemplate& phi) { return Formula::qcf(phi.left, phi.right, phi.body); }

// Names for the three order variables, avoiding the template's parameters.
struct OrderVars {
  std::string x, y, u;
};

OrderVars orderVars(const std::vector<std::vector<std::string>>& paramLists) {
  std::vector<std::string> taken;
  for (const auto& l : paramLists) taken.insert(taken.end(), l.begin(), l.end());
  auto pick = [&](const std::string& base) {
    std::string name = std::find(taken.begin(), taken.end(), base) == taken.end()
                           ? base
                           : freshName(base, taken);
    taken.push_back(name);
    return name;
  };
  OrderVars v;
  v.x = pick("x");
  v.y = pick("y");
  v.u = pick("u");
  return v;
}

void checkFreshSymbol(const Signature& sig, const Signature& ext, const std::string& name) {
  if (sig.declares(name) || ext.declares(name)) {
    throw SignatureError("symbol '" + name + "' already declared");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

void Fragment::addOrder(const Formula& phi) {
  addUnique(orders, QcfTemplate::of(phi, "x", "y").first);
}

void Fragment::addConnection(const Formula& gamma) {
  addUnique(connections, QcfTemplate::of(gamma, "x", "y").first);
}

FragmentFile parseFragment(std::string_view text) {
  HeaderedText parts = splitHeader(text);
  FragmentFile out{std::move(parts.signature), {}};
  for (const auto& [lineNo, raw] : parts.lines) {
    const std::string line = trim(raw);
    const auto colon = line.find(':');
    const std::string head = colon == std::string::npos ? "" : trim(line.substr(0, colon));
    if (head != "order" && head != "conn") {
      throw ParseError("expected 'order: FORMULA' or 'conn: FORMULA'", lineNo, 1);
    }
    const std::size_t offset = raw.find(':') + 2;
    Formula f = parseFormula(line.substr(colon + 1), out.signature, lineNo, offset);
    if (head == "order") {
      out.fragment.addOrder(f);
    } else {
      out.fragment.addConnection(f);
    }
  }
  return out;
}

FragmentFile loadFragment(const std::filesystem::path& path) {
  return parseFragment(readTextFile(path));
}

std::string Axiom::tag() const {
  std::ostringstream out;
  switch (schema) {
    case Schema::SAOrder:
      out << "SA-order phi=[" << keys.at(0) << "]";
      break;
    case Schema::SANoConnection:
      out << "SA-no-connection phi=[" << keys.at(0) << "] psi=[" << keys.at(1) << "] gamma=["
          << keys.at(2) << "]";
      break;
    case Schema::SK:
      out << "SK phi=[" << keys.at(0) << "] symbol=" << symbols.at(0);
      break;
    case Schema::Adapter:
      out << "adapter phi=[" << keys.at(0) << "] symbols=" << symbols.at(0) << ","
          << symbols.at(1);
      break;
  }
  return out.str();
}

std::vector<Formula> AxiomSet::sentences() const {
  std::vector<Formula> out;
  for (const auto& a : axioms) out.push_back(a.sentence);
  return out;
}

void AxiomSet::append(const AxiomSet& other) {
  axioms.insert(axioms.end(), other.axioms.begin(), other.axioms.end());
  extension = extension.merged(other.extension);
}

BinaryTemplate instantiate(const QcfTemplate& tmpl, const std::string& prefix) {
  std::map<std::string, Term> renames;
  if (prefix != "z") {
    for (std::size_t i = 1; i <= tmpl.arity; ++i) {
      renames.emplace("z" + std::to_string(i), var(prefix + std::to_string(i)));
    }
  }
  return BinaryTemplate{substitute(tmpl.formula(), renames), "x", "y"};
}

Formula linOrderNoLastSentence(const BinaryTemplate& phi) {
  const auto v = orderVars({phi.parameters()});
  const Term x = var(v.x), y = var(v.y), u = var(v.u);
  Formula irreflexive = Formula::forall(v.x, Formula::negation(phi.apply(x, x)));
  Formula transitive = forallAll(
      {v.x, v.y, v.u},
      Formula::implication(Formula::conjunction(phi.apply(x, y), phi.apply(y, u)),
                           phi.apply(x, u)));
  Formula total = forallAll(
      {v.x, v.y},
      Formula::implication(Formula::negation(Formula::equal(x, y)),
                           Formula::disjunction(phi.apply(x, y), phi.apply(y, x))));
  Formula noLast = Formula::forall(v.x, Formula::exists(v.y, phi.apply(x, y)));
  return Formula::conjunctionOf({irreflexive, transitive, total, noLast});
}

Formula linOrderNoLastOnDomain(const BinaryTemplate& phi, const UnaryTemplate& domain) {
  std::vector<std::string> domainParams;
  for (const auto& p : freeVariables(domain.body)) {
    if (p != domain.var) domainParams.push_back(p);
  }
  const auto v = orderVars({phi.parameters(), domainParams});
  const Term x = var(v.x), y = var(v.y), u = var(v.u);
  Formula irreflexive = Formula::forall(
      v.x, Formula::implication(domain.apply(x), Formula::negation(phi.apply(x, x))));
  Formula transitive = forallAll(
      {v.x, v.y, v.u},
      Formula::implication(
          Formula::conjunctionOf({domain.apply(x), domain.apply(y), domain.apply(u)}),
          Formula::implication(Formula::conjunction(phi.apply(x, y), phi.apply(y, u)),
                               phi.apply(x, u))));
  Formula total = forallAll(
      {v.x, v.y},
      Formula::implication(
          Formula::conjunction(domain.apply(x), domain.apply(y)),
          Formula::implication(Formula::negation(Formula::equal(x, y)),
                               Formula::disjunction(phi.apply(x, y), phi.apply(y, x)))));
  Formula noLast = Formula::forall(
      v.x, Formula::implication(
               domain.apply(x),
               Formula::exists(v.y, Formula::conjunction(domain.apply(y), phi.apply(x, y)))));
  return Formula::conjunctionOf({irreflexive, transitive, total, noLast});
}

Formula connectionSentence(const BinaryTemplate& gamma, const BinaryTemplate& phi,
                           const BinaryTemplate& psi,
                           const std::optional<UnaryTemplate>& phiDomain,
                           const std::optional<UnaryTemplate>& psiDomain) {
  std::vector<std::string> taken = gamma.parameters();
  for (const auto& p : phi.parameters()) taken.push_back(p);
  for (const auto& p : psi.parameters()) taken.push_back(p);
  const auto v = orderVars({taken});
  const BinaryTemplate leqPhi = reflexiveClosure(phi);
  const BinaryTemplate leqPsi = reflexiveClosure(psi);
  const Formula g = gamma.apply(var(v.x), var(v.y));

  // exists^cf x forall^cf y gamma(x, y)
  Formula first = expandCofinalMacro(
      CofinalKind::ExistsCofinal, v.x,
      expandCofinalMacro(CofinalKind::ForallCofinal, v.y, g, leqPsi, psiDomain), leqPhi,
      phiDomain);
  // exists^cf y forall^cf x ~gamma(x, y)
  Formula second = expandCofinalMacro(
      CofinalKind::ExistsCofinal, v.y,
      expandCofinalMacro(CofinalKind::ForallCofinal, v.x, Formula::negation(g), leqPhi,
                         phiDomain),
      leqPsi, psiDomain);
  return Formula::conjunction(first, second);
}

AxiomSet genSA(const Fragment& frag) {
  AxiomSet out;
  const auto orders = sortedByKey(frag.orders);
  const auto connections = sortedByKey(frag.connections);

  for (const auto& t : orders) {
    const BinaryTemplate phi = instantiate(t, "z");
    Formula body = Formula::implication(qcfOf(phi), linOrderNoLastSentence(phi));
    out.axioms.push_back({Schema::SAOrder, {t.key}, {}, forallAll(phi.parameters(), body)});
  }
  for (const auto& tPhi : orders) {
    for (const auto& tPsi : orders) {
      for (const auto& tGamma : connections) {
        const BinaryTemplate phi = instantiate(tPhi, "z");
        const BinaryTemplate psi = instantiate(tPsi, "v");
        const BinaryTemplate gamma = instantiate(tGamma, "w");
        Formula hypothesis = Formula::conjunctionOf(
            {qcfOf(phi), linOrderNoLastSentence(psi), Formula::negation(qcfOf(psi))});
        Formula body = Formula::implication(
            hypothesis, Formula::negation(connectionSentence(gamma, phi, psi)));
        std::vector<std::string> params = phi.parameters();
        for (const auto& p : psi.parameters()) params.push_back(p);
        for (const auto& p : gamma.parameters()) params.push_back(p);
        out.axioms.push_back({Schema::SANoConnection,
                              {tPhi.key, tPsi.key, tGamma.key},
                              {},
                              forallAll(params, body)});
      }
    }
  }
  return out;
}

AxiomSet genSK(const Fragment& frag, const Signature& signature) {
  AxiomSet out;
  const auto orders = sortedByKey(frag.orders);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const auto& t = orders[i];
    const std::string symbol = "V_" + std::to_string(i + 1);
    checkFreshSymbol(signature, out.extension, symbol);
    out.extension.addRelation(symbol, 2 + 2 * t.arity);

    const BinaryTemplate first = instantiate(t, "z");
    const BinaryTemplate second = instantiate(t, "v");
    const auto firstParams = first.parameters();
    const auto secondParams = second.parameters();

    std::vector<Term> args{var("x"), var("y")};
    for (const auto& p : firstParams) args.push_back(var(p));
    for (const auto& p : secondParams) args.push_back(var(p));
    const BinaryTemplate connector{Formula::atom(symbol, std::move(args)), "x", "y"};

    Formula hypothesis = Formula::conjunctionOf(
        {linOrderNoLastSentence(first), linOrderNoLastSentence(second),
         Formula::biconditional(qcfOf(first), qcfOf(second))});
    Formula body = Formula::implication(hypothesis, connectionSentence(connector, first, second));
    std::vector<std::string> params = firstParams;
    params.insert(params.end(), secondParams.begin(), secondParams.end());
    out.axioms.push_back({Schema::SK, {t.key}, {symbol}, forallAll(params, body)});
  }
  return out;
}

AxiomSet genDomainAdapter(const Fragment& frag, const Signature& signature) {
  AxiomSet out;
  const auto orders = sortedByKey(frag.orders);
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const auto& t = orders[i];
    const std::string orderSymbol = "O_" + std::to_string(i + 1);
    const std::string connectSymbol = "H_" + std::to_string(i + 1);
    checkFreshSymbol(signature, out.extension, orderSymbol);
    out.extension.addRelation(orderSymbol, 2 + t.arity);
    checkFreshSymbol(signature, out.extension, connectSymbol);
    out.extension.addRelation(connectSymbol, 2 + t.arity);

    const BinaryTemplate phi = instantiate(t, "z");
    const auto params = phi.parameters();
    auto symbolAtom = [&](const std::string& symbol) {
      std::vector<Term> args{var("x"), var("y")};
      for (const auto& p : params) args.push_back(var(p));
      return BinaryTemplate{Formula::atom(symbol, std::move(args)), "x", "y"};
    };
    const BinaryTemplate universeOrder = symbolAtom(orderSymbol);
    const BinaryTemplate connector = symbolAtom(connectSymbol);
    const UnaryTemplate domain{Formula::exists("y", phi.body), "x"};

    Formula conclusion = Formula::conjunction(
        linOrderNoLastSentence(universeOrder),
        connectionSentence(connector, phi, universeOrder, domain, std::nullopt));
    Formula body = Formula::implication(linOrderNoLastOnDomain(phi, domain), conclusion);
    out.axioms.push_back(
        {Schema::Adapter, {t.key}, {orderSymbol, connectSymbol}, forallAll(params, body)});
  }
  return out;
}

Theory reduceToWeak(const Theory& theory, const Fragment& frag) {
  Theory out = theory;
  for (const auto& s : genSA(frag).sentences()) out.sentences.push_back(s);
  return out;
}

std::string formatAxiomFile(const Signature& base, const AxiomSet& axioms) {
  std::string out = formatSignatureHeader(base.merged(axioms.extension));
  for (const auto& a : axioms.axioms) {
    out += "# tag: " + a.tag() + "\n";
    out += print(a.sentence) + "\n";
  }
  return out;
}

}  // namespace qcf
