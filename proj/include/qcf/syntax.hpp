#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qcf/formula.hpp"
#include "qcf/signature.hpp"

namespace qcf {

/// Parses the surface syntax
///
///   term    := IDENT | IDENT "(" term {"," term} ")"
///   atom    := IDENT "(" term {"," term} ")" | term "=" term | term "<" term
///   formula := atom | "~" formula | formula "&" formula | formula "|" formula
///            | formula "->" formula | formula "<->" formula
///            | "forall" IDENT "." formula | "exists" IDENT "." formula
///            | "Qcf" IDENT IDENT "." formula | "(" formula ")"
///
/// with precedence ~ > & > | > -> > <->, binders extending maximally to the
/// right and "->" right-associative. An identifier in term position is a
/// bound variable if in scope, else a constant if declared, else a free
/// variable. `line`/`column` offset the reported error positions.
Formula parseFormula(std::string_view text, const Signature& signature, std::size_t line = 1,
                     std::size_t column = 1);

/// Deterministic printer; output re-parses to an alpha-equivalent formula.
/// Binders whose variable would shadow an enclosing binder, clash with a
/// constant of the body, or spell a keyword are renamed.
std::string print(const Formula& f);
std::string print(const Term& t);

/// A named finite list of sentences over a signature.
struct Theory {
  std::string name;
  Signature signature;
  std::vector<Formula> sentences;
};

/// A signature header ("rel NAME ARITY", "fun NAME ARITY", "const NAME",
/// terminated by "begin") followed by the remaining content lines.
struct HeaderedText {
  Signature signature;
  /// (1-based line number, text with comments stripped) of non-blank lines.
  std::vector<std::pair<std::size_t, std::string>> lines;
};

HeaderedText splitHeader(std::string_view text);

/// One sentence per line, "#" comments, blank lines ignored.
Theory parseTheory(std::string_view text, std::string name = "theory");
Theory loadTheory(const std::filesystem::path& path);

std::string formatSignatureHeader(const Signature& signature);
std::string formatTheory(const Theory& theory);

std::string readTextFile(const std::filesystem::path& path);

}  // namespace qcf
