#include "qcf/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qcf/error.hpp"

namespace qcf {

namespace {

enum class Tok {
  Ident,
  LParen,
  RParen,
  Comma,
  Dot,
  Equal,
  Less,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Forall,
  Exists,
  Qcf,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t line, std::size_t column)
      : text_(text), line_(line), column_(column) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipSpace();
      const std::size_t line = line_;
      const std::size_t column = column_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line, column});
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
          const auto u = static_cast<unsigned char>(text_[pos_]);
          if (!(std::isalnum(u) || u == '_' || u == '\'')) break;
          advance();
        }
        std::string word(text_.substr(start, pos_ - start));
        Tok kind = Tok::Ident;
        if (word == "forall") kind = Tok::Forall;
        if (word == "exists") kind = Tok::Exists;
        if (word == "Qcf") kind = Tok::Qcf;
        out.push_back({kind, std::move(word), line, column});
        continue;
      }
      if (text_.substr(pos_, 3) == "<->") {
        advance(3);
        out.push_back({Tok::Iff, "<->", line, column});
        continue;
      }
      if (text_.substr(pos_, 2) == "->") {
        advance(2);
        out.push_back({Tok::Implies, "->", line, column});
        continue;
      }
      Tok kind;
      switch (c) {
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case ',': kind = Tok::Comma; break;
        case '.': kind = Tok::Dot; break;
        case '=': kind = Tok::Equal; break;
        case '<': kind = Tok::Less; break;
        case '~': kind = Tok::Not; break;
        case '&': kind = Tok::And; break;
        case '|': kind = Tok::Or; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, column);
      }
      advance();
      out.push_back({kind, std::string(1, c), line, column});
    }
  }

 private:
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
      ++pos_;
    }
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, const Signature& signature)
      : tokens_(std::move(tokens)), sig_(signature) {}

  Formula parseAll() {
    Formula f = parseIff();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after formula");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& peekAt(std::size_t k) const {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  Token next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().line, peek().column);
  }
  [[noreturn]] void failAt(const Token& t, const std::string& message) const {
    throw ParseError(message, t.line, t.column);
  }

  Token expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(std::string("expected ") + what + ", found '" +
           (peek().kind == Tok::End ? std::string("end of input") : peek().text) + "'");
    }
    return next();
  }

  Formula parseIff() {
    Formula lhs = parseImplies();
    while (peek().kind == Tok::Iff) {
      next();
      lhs = Formula::biconditional(lhs, parseImplies());
    }
    return lhs;
  }

  Formula parseImplies() {
    Formula lhs = parseOr();
    if (peek().kind == Tok::Implies) {
      next();
      return Formula::implication(lhs, parseImplies());
    }
    return lhs;
  }

  Formula parseOr() {
    Formula lhs = parseAnd();
    while (peek().kind == Tok::Or) {
      next();
      lhs = Formula::disjunction(lhs, parseAnd());
    }
    return lhs;
  }

  Formula parseAnd() {
    Formula lhs = parseUnary();
    while (peek().kind == Tok::And) {
      next();
      lhs = Formula::conjunction(lhs, parseUnary());
    }
    return lhs;
  }

  Formula parseUnary() {
    switch (peek().kind) {
      case Tok::Not:
        next();
        return Formula::negation(parseUnary());
      case Tok::LParen: {
        next();
        Formula f = parseIff();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Forall:
      case Tok::Exists: {
        const bool universal = next().kind == Tok::Forall;
        std::string var = expect(Tok::Ident, "variable").text;
        expect(Tok::Dot, "'.'");
        bound_.push_back(var);
        Formula body = parseIff();
        bound_.pop_back();
        return universal ? Formula::forall(var, body) : Formula::exists(var, body);
      }
      case Tok::Qcf: {
        const Token head = next();
        std::string x = expect(Tok::Ident, "variable").text;
        std::string y = expect(Tok::Ident, "variable").text;
        if (x == y) failAt(head, "Qcf must bind two different variables");
        expect(Tok::Dot, "'.'");
        bound_.push_back(x);
        bound_.push_back(y);
        Formula body = parseIff();
        bound_.pop_back();
        bound_.pop_back();
        return Formula::qcf(x, y, body);
      }
      case Tok::Ident:
        return parseAtom();
      default:
        fail("expected a formula, found '" +
             (peek().kind == Tok::End ? std::string("end of input") : peek().text) + "'");
    }
  }

  bool isBound(const std::string& name) const {
    return std::find(bound_.begin(), bound_.end(), name) != bound_.end();
  }

  std::vector<Term> parseArgs() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    args.push_back(parseTerm());
    while (peek().kind == Tok::Comma) {
      next();
      args.push_back(parseTerm());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Term parseTerm() {
    const Token head = expect(Tok::Ident, "term");
    if (peek().kind == Tok::LParen) {
      auto arity = sig_.functionArity(head.text);
      if (!arity) failAt(head, "unknown function symbol '" + head.text + "'");
      auto args = parseArgs();
      if (args.size() != *arity) {
        failAt(head, "function '" + head.text + "' expects " + std::to_string(*arity) +
                         " arguments, got " + std::to_string(args.size()));
      }
      return Term::application(head.text, std::move(args));
    }
    return identifierTerm(head);
  }

  Term identifierTerm(const Token& head) const {
    if (isBound(head.text)) return Term::variable(head.text);
    if (sig_.hasConstant(head.text)) return Term::constant(head.text);
    if (sig_.functionArity(head.text)) failAt(head, "function '" + head.text + "' needs arguments");
    if (sig_.relationArity(head.text)) {
      failAt(head, "relation '" + head.text + "' used as a term");
    }
    return Term::variable(head.text);
  }

  Formula parseAtom() {
    const Token head = peek();
    // Relation application: IDENT "(" ... ")" not followed by "=" / "<".
    if (peekAt(1).kind == Tok::LParen && sig_.relationArity(head.text) && !isBound(head.text)) {
      next();
      auto args = parseArgs();
      const auto arity = *sig_.relationArity(head.text);
      if (args.size() != arity) {
        failAt(head, "relation '" + head.text + "' expects " + std::to_string(arity) +
                         " arguments, got " + std::to_string(args.size()));
      }
      return Formula::atom(head.text, std::move(args));
    }
    Term lhs = parseTerm();
    if (peek().kind == Tok::Equal) {
      next();
      return Formula::equal(std::move(lhs), parseTerm());
    }
    if (peek().kind == Tok::Less) {
      const Token op = next();
      if (!sig_.relationArity("<")) failAt(op, "infix '<' requires a binary relation '<'");
      return Formula::atom("<", {std::move(lhs), parseTerm()});
    }
    fail("expected '=' or '<' after term '" + head.text + "'");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Signature& sig_;
  std::vector<std::string> bound_;
};

// ---------------------------------------------------------------------------
// Printer

enum Prec { kIff = 1, kImplies = 2, kOr = 3, kAnd = 4, kUnary = 5 };

int precOf(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::Iff: return kIff;
    case FormulaKind::Implies: return kImplies;
    case FormulaKind::Or: return kOr;
    case FormulaKind::And: return kAnd;
    default: return kUnary;
  }
}

const char* opText(FormulaKind kind) {
  switch (kind) {
    case FormulaKind::Iff: return " <-> ";
    case FormulaKind::Implies: return " -> ";
    case FormulaKind::Or: return " | ";
    case FormulaKind::And: return " & ";
    default: return "";
  }
}

bool isKeyword(const std::string& name) {
  return name == "forall" || name == "exists" || name == "Qcf";
}

class Printer {
 public:
  std::string run(const Formula& f) {
    emit(f, 0, true);
    return out_.str();
  }

  void term(const Term& t) {
    if (t.kind == Term::Kind::Variable) {
      auto it = std::find_if(scope_.rbegin(), scope_.rend(),
                             [&](const auto& p) { return p.first == t.name; });
      out_ << (it == scope_.rend() ? t.name : it->second);
      return;
    }
    out_ << t.name;
    if (t.kind == Term::Kind::Application) {
      out_ << '(';
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out_ << ", ";
        term(t.args[i]);
      }
      out_ << ')';
    }
  }

  std::string str() const { return out_.str(); }

 private:
  // A binder may appear unparenthesized only in tail position.
  void emit(const Formula& f, int minPrec, bool tail) {
    switch (f.kind()) {
      case FormulaKind::Atom:
        atom(f);
        return;
      case FormulaKind::Equal:
        term(f.terms()[0]);
        out_ << " = ";
        term(f.terms()[1]);
        return;
      case FormulaKind::Not: {
        out_ << '~';
        const Formula& body = f.lhs();
        const bool bare = body.kind() == FormulaKind::Not ||
                          (body.kind() == FormulaKind::Atom && body.relation() != "<");
        if (bare) {
          emit(body, kUnary, tail);
        } else {
          out_ << '(';
          emit(body, 0, true);
          out_ << ')';
        }
        return;
      }
      case FormulaKind::Exists:
      case FormulaKind::Forall:
      case FormulaKind::Qcf: {
        if (!tail) {
          out_ << '(';
          binder(f);
          out_ << ')';
        } else {
          binder(f);
        }
        return;
      }
      default:
        break;
    }
    const int prec = precOf(f.kind());
    const bool wrap = prec < minPrec;
    if (wrap) out_ << '(';
    const bool innerTail = wrap || tail;
    const bool rightAssoc = f.kind() == FormulaKind::Implies;
    emit(f.lhs(), rightAssoc ? prec + 1 : prec, false);
    out_ << opText(f.kind());
    emit(f.rhs(), rightAssoc ? prec : prec + 1, innerTail);
    if (wrap) out_ << ')';
  }

  void atom(const Formula& f) {
    const auto& args = f.terms();
    if (f.relation() == "<" && args.size() == 2) {
      term(args[0]);
      out_ << " < ";
      term(args[1]);
      return;
    }
    out_ << f.relation();
    if (args.empty()) return;
    out_ << '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out_ << ", ";
      term(args[i]);
    }
    out_ << ')';
  }

  std::string bindName(const std::string& var, const Formula& body,
                       const std::vector<std::string>& siblings) {
    const bool shadows = std::any_of(scope_.begin(), scope_.end(),
                                     [&](const auto& p) { return p.second == var; });
    const auto constants = constantsIn(body);
    const bool clashes =
        std::find(constants.begin(), constants.end(), var) != constants.end() || isKeyword(var) ||
        std::find(siblings.begin(), siblings.end(), var) != siblings.end();
    // A free variable of the body printed under a renamed outer binder may
    // carry this name as well.
    bool captures = false;
    for (const auto& v : freeVariables(body)) {
      if (v == var) continue;
      auto it = std::find_if(scope_.rbegin(), scope_.rend(),
                             [&](const auto& p) { return p.first == v; });
      const std::string printed = it == scope_.rend() ? v : it->second;
      if (printed == var) captures = true;
    }
    if (!shadows && !clashes && !captures) return var;

    std::vector<std::string> taken = constants;
    for (const auto& p : scope_) taken.push_back(p.second);
    for (const auto& v : freeVariables(body)) taken.push_back(v);
    for (const auto& v : allVariables(body)) taken.push_back(v);
    for (const auto& s : siblings) taken.push_back(s);
    std::string fresh = freshName(var, taken);
    while (isKeyword(fresh)) fresh += "'";
    return fresh;
  }

  void binder(const Formula& f) {
    if (f.kind() == FormulaKind::Qcf) {
      std::string x = bindName(f.var(), f.body(), {});
      std::string y = bindName(f.var2(), f.body(), {x});
      out_ << "Qcf " << x << ' ' << y << ". ";
      scope_.emplace_back(f.var(), x);
      scope_.emplace_back(f.var2(), y);
      emit(f.body(), 0, true);
      scope_.pop_back();
      scope_.pop_back();
      return;
    }
    std::string v = bindName(f.var(), f.body(), {});
    out_ << (f.kind() == FormulaKind::Forall ? "forall " : "exists ") << v << ". ";
    scope_.emplace_back(f.var(), v);
    emit(f.body(), 0, true);
    scope_.pop_back();
  }

  std::ostringstream out_;
  std::vector<std::pair<std::string, std::string>> scope_;
};

std::string stripComment(const std::string& line) {
  auto hash = line.find('#');
  std::string s = hash == std::string::npos ? line : line.substr(0, hash);
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::size_t parseArity(const std::string& text, std::size_t line) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      })) {
    throw ParseError("invalid arity '" + text + "'", line, 1);
  }
  return static_cast<std::size_t>(std::stoul(text));
}

}  // namespace

Formula parseFormula(std::string_view text, const Signature& signature, std::size_t line,
                     std::size_t column) {
  Lexer lexer(text, line, column);
  Parser parser(lexer.run(), signature);
  return parser.parseAll();
}

std::string print(const Formula& f) { return Printer().run(f); }

std::string print(const Term& t) {
  Printer p;
  p.term(t);
  return p.str();
}

HeaderedText splitHeader(std::string_view text) {
  HeaderedText out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineNo = 0;
  bool inHeader = true;
  while (std::getline(in, raw)) {
    ++lineNo;
    std::string line = stripComment(raw);
    if (line.empty()) continue;
    if (!inHeader) {
      out.lines.emplace_back(lineNo, raw.substr(0, raw.find('#')));
      continue;
    }
    auto w = words(line);
    try {
      if (w[0] == "begin" && w.size() == 1) {
        inHeader = false;
      } else if (w[0] == "rel" && w.size() == 3) {
        out.signature.addRelation(w[1], parseArity(w[2], lineNo));
      } else if (w[0] == "fun" && w.size() == 3) {
        out.signature.addFunction(w[1], parseArity(w[2], lineNo));
      } else if (w[0] == "const" && w.size() == 2) {
        out.signature.addConstant(w[1]);
      } else {
        throw ParseError("expected 'rel NAME ARITY', 'fun NAME ARITY', 'const NAME' or 'begin'",
                         lineNo, 1);
      }
    } catch (const SignatureError& e) {
      throw ParseError(e.what(), lineNo, 1);
    }
  }
  if (inHeader) throw ParseError("missing 'begin' line", lineNo + 1, 1);
  return out;
}

Theory parseTheory(std::string_view text, std::string name) {
  HeaderedText parts = splitHeader(text);
  Theory theory{std::move(name), std::move(parts.signature), {}};
  for (const auto& [lineNo, line] : parts.lines) {
    Formula f = parseFormula(line, theory.signature, lineNo, 1);
    auto free = freeVariables(f);
    if (!free.empty()) {
      throw ParseError("sentence has free variable '" + free.front() + "'", lineNo, 1);
    }
    theory.sentences.push_back(std::move(f));
  }
  return theory;
}

std::string readTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Theory loadTheory(const std::filesystem::path& path) {
  return parseTheory(readTextFile(path), path.stem().string());
}

std::string formatSignatureHeader(const Signature& signature) {
  std::ostringstream out;
  for (const auto& r : signature.relations()) out << "rel " << r.name << ' ' << r.arity << '\n';
  for (const auto& f : signature.functions()) out << "fun " << f.name << ' ' << f.arity << '\n';
  for (const auto& c : signature.constants()) out << "const " << c << '\n';
  out << "begin\n";
  return out.str();
}

std::string formatTheory(const Theory& theory) {
  std::string out = formatSignatureHeader(theory.signature);
  for (const auto& s : theory.sentences) out += print(s) + "\n";
  return out;
}

}  // namespace qcf
