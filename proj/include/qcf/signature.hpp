#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qcf {

struct SymbolDecl {
  std::string name;
  std::size_t arity = 0;

  bool operator==(const SymbolDecl&) const = default;
};

/// Relation, function and constant symbols of a first-order language.
/// Equality is built in and never declared. Names are unique across kinds.
class Signature {
 public:
  void addRelation(std::string name, std::size_t arity);
  void addFunction(std::string name, std::size_t arity);
  void addConstant(std::string name);

  std::optional<std::size_t> relationArity(std::string_view name) const;
  std::optional<std::size_t> functionArity(std::string_view name) const;
  bool hasConstant(std::string_view name) const;
  bool declares(std::string_view name) const;

  const std::vector<SymbolDecl>& relations() const { return relations_; }
  const std::vector<SymbolDecl>& functions() const { return functions_; }
  const std::vector<std::string>& constants() const { return constants_; }

  /// Union with `other`; throws SignatureError on any name clash.
  Signature merged(const Signature& other) const;

  bool operator==(const Signature&) const = default;

 private:
  void checkFresh(std::string_view name) const;

  std::vector<SymbolDecl> relations_;
  std::vector<SymbolDecl> functions_;
  std::vector<std::string> constants_;
};

bool isIdentifier(std::string_view text);

}  // namespace qcf
