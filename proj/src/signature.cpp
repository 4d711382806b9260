#include "qcf/signature.hpp"

#include <algorithm>
#include <cctype>

#include "qcf/error.hpp"

namespace qcf {

bool isIdentifier(std::string_view text) {
  if (text.empty()) return false;
  const auto head = static_cast<unsigned char>(text.front());
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(text.begin() + 1, text.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_' || u == '\'';
  });
}

namespace {

bool isKeyword(std::string_view name) {
  return name == "forall" || name == "exists" || name == "Qcf";
}

}  // namespace

void Signature::checkFresh(std::string_view name) const {
  if (declares(name)) {
    throw SignatureError("symbol '" + std::string(name) + "' declared twice");
  }
}

void Signature::addRelation(std::string name, std::size_t arity) {
  if (!(isIdentifier(name) || name == "<") || isKeyword(name)) {
    throw SignatureError("invalid relation name '" + name + "'");
  }
  if (arity == 0) throw SignatureError("relation '" + name + "' must have arity >= 1");
  if (name == "<" && arity != 2) throw SignatureError("relation '<' must be binary");
  checkFresh(name);
  relations_.push_back({std::move(name), arity});
}

void Signature::addFunction(std::string name, std::size_t arity) {
  if (!isIdentifier(name) || isKeyword(name)) {
    throw SignatureError("invalid function name '" + name + "'");
  }
  if (arity == 0) throw SignatureError("function '" + name + "' must have arity >= 1");
  checkFresh(name);
  functions_.push_back({std::move(name), arity});
}

void Signature::addConstant(std::string name) {
  if (!isIdentifier(name) || isKeyword(name)) {
    throw SignatureError("invalid constant name '" + name + "'");
  }
  checkFresh(name);
  constants_.push_back(std::move(name));
}

std::optional<std::size_t> Signature::relationArity(std::string_view name) const {
  for (const auto& r : relations_) {
    if (r.name == name) return r.arity;
  }
  return std::nullopt;
}

std::optional<std::size_t> Signature::functionArity(std::string_view name) const {
  for (const auto& f : functions_) {
    if (f.name == name) return f.arity;
  }
  return std::nullopt;
}

bool Signature::hasConstant(std::string_view name) const {
  return std::find(constants_.begin(), constants_.end(), name) != constants_.end();
}

bool Signature::declares(std::string_view name) const {
  return relationArity(name).has_value() || functionArity(name).has_value() || hasConstant(name);
}

Signature Signature::merged(const Signature& other) const {
  Signature out = *this;
  for (const auto& r : other.relations_) out.addRelation(r.name, r.arity);
  for (const auto& f : other.functions_) out.addFunction(f.name, f.arity);
  for (const auto& c : other.constants_) out.addConstant(c);
  return out;
}

}  // namespace qcf
