#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcf/formula.hpp"
#include "qcf/signature.hpp"
#include "qcf/syntax.hpp"

namespace qcf {

/// Finite set of templates over which the axiom schemas are instantiated.
/// Order candidates phi(x, y, z...) and connection candidates
/// gamma(x, y, w...) use the free variables x and y as the designated pair;
/// every other free variable is a parameter.
struct Fragment {
  std::vector<QcfTemplate> orders;
  std::vector<QcfTemplate> connections;

  /// Adds unless an alpha-equivalent template is already present.
  void addOrder(const Formula& phi);
  void addConnection(const Formula& gamma);

  bool empty() const { return orders.empty() && connections.empty(); }
};

/// Signature header followed by "order: FORMULA" / "conn: FORMULA" lines.
struct FragmentFile {
  Signature signature;
  Fragment fragment;
};

FragmentFile parseFragment(std::string_view text);
FragmentFile loadFragment(const std::filesystem::path& path);

enum class Schema { SAOrder, SANoConnection, SK, Adapter };

struct Axiom {
  Schema schema;
  /// Template keys instantiated, in role order.
  std::vector<std::string> keys;
  /// Fresh symbols this axiom speaks about (SK / adapter).
  std::vector<std::string> symbols;
  Formula sentence;

  std::string tag() const;
};

struct AxiomSet {
  std::vector<Axiom> axioms;
  /// Relation symbols introduced by the generator.
  Signature extension;

  std::vector<Formula> sentences() const;
  void append(const AxiomSet& other);
};

/// The template with its parameters renamed to `prefix`1, `prefix`2, ...
BinaryTemplate instantiate(const QcfTemplate& tmpl, const std::string& prefix);

/// Strict linear order without last element, open in the parameters:
/// irreflexivity, transitivity, totality on distinct elements, no last element.
Formula linOrderNoLastSentence(const BinaryTemplate& phi);

/// The same four conditions with every order variable relativized to `domain`.
Formula linOrderNoLastOnDomain(const BinaryTemplate& phi, const UnaryTemplate& domain);

/// Both connection properties for gamma between the phi-order (on x) and
/// the psi-order (on y), expanded through the cofinal macros with
/// leq := (< | =):
///   exists^cf x forall^cf y gamma(x, y)  &  exists^cf y forall^cf x ~gamma(x, y)
Formula connectionSentence(const BinaryTemplate& gamma, const BinaryTemplate& phi,
                           const BinaryTemplate& psi,
                           const std::optional<UnaryTemplate>& phiDomain = std::nullopt,
                           const std::optional<UnaryTemplate>& psiDomain = std::nullopt);

/// Q^cf-positive orders are endless linear orders, and a Q^cf-positive order
/// has no candidate connection to a Q^cf-negative linear order.
AxiomSet genSA(const Fragment& frag);

/// One connecting symbol V_i (arity 2 + 2|z|) per order candidate, declared
/// to connect any two instances with the same Q^cf status.
AxiomSet genSK(const Fragment& frag, const Signature& signature);

/// Per order candidate, a universe order O_i and a connection H_i between
/// phi restricted to its domain {x | exists y phi(x, y)} and O_i.
AxiomSet genDomainAdapter(const Fragment& frag, const Signature& signature);

/// T together with genSA(frag), to be read with weak semantics.
Theory reduceToWeak(const Theory& theory, const Fragment& frag);

/// Header (base signature plus extension), then each axiom preceded by a
/// "# tag: ..." line.
std::string formatAxiomFile(const Signature& base, const AxiomSet& axioms);

}  // namespace qcf
