/// @file   parser.hpp
/// @brief  Lexer and LL(1) recursive-descent parser for relational scripts
///
///   script  := stmt* "eval" expr
///   stmt    := "carrier" ID "=" (NAT | cexpr) ";"
///            | "let" ID (":" rtype)? "=" expr ";"
///   rtype   := cexpr "<->" cexpr
///   cexpr   := cterm ("*" cterm)*
///   cterm   := ID | "unit" | "pow" cterm | "(" cexpr ")"
///   expr    := inter ("|" inter)*
///   inter   := comp ("&" comp)*
///   comp    := unary ("." unary)*
///   unary   := "-" unary | postfix
///   postfix := atom ("^")*
///   atom    := ID | "(" expr ")" | builtin
///   builtin := ("L"|"O") "[" rtype "]" | "I" "[" cexpr "]"
///            | ("eps"|"omega"|"pi"|"rho") "[" cexpr "]"
///            | ("syq"|"pair") "(" expr "," expr ")"
///            | ("vec"|"rel"|"inj") "(" expr ")"
///
/// `#` starts a comment running to the end of the line.

#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relctl/dsl/ast.hpp"

namespace relctl::dsl {

class syntax_error : public std::runtime_error {
public:
  syntax_error(Pos pos, std::vector<std::string> expected, std::string found)
      : std::runtime_error(render(pos, expected, found)), pos_(pos),
        expected_(std::move(expected)), found_(std::move(found)) {}

  [[nodiscard]] Pos pos() const noexcept { return pos_; }
  [[nodiscard]] const std::vector<std::string> &expected() const noexcept {
    return expected_;
  }
  [[nodiscard]] const std::string &found() const noexcept { return found_; }

private:
  Pos pos_;
  std::vector<std::string> expected_;
  std::string found_;

  static std::string render(Pos pos, const std::vector<std::string> &exp,
                            const std::string &found) {
    std::string s = pos.str() + ": syntax error: expected ";
    if (exp.size() > 1)
      s += "one of ";
    for (std::size_t i = 0; i < exp.size(); ++i)
      s += (i ? ", " : "") + exp[i];
    return s + "; found " + found;
  }
};

struct Token {
  enum class Kind { id, nat, sym, eof };
  Kind kind = Kind::eof;
  std::string text;
  Pos pos;

  [[nodiscard]] std::string describe() const {
    switch (kind) {
    case Kind::eof: return "end of input";
    case Kind::nat: return "number " + text;
    default: return "'" + text + "'";
    }
  }
};

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto adv = [&](std::size_t k = 1) {
    for (; k > 0; --k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n')
        adv();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      adv();
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = Token::Kind::id;
      t.text = std::string(src.substr(i, j - i));
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      t.kind = Token::Kind::nat;
      t.text = std::string(src.substr(i, j - i));
    } else if (src.substr(i, 3) == "<->") {
      t.kind = Token::Kind::sym;
      t.text = "<->";
    } else if (std::string_view("()[],;=:.^-|&*").find(c) !=
               std::string_view::npos) {
      t.kind = Token::Kind::sym;
      t.text = std::string(1, c);
    } else {
      throw syntax_error(t.pos, {"a token"},
                         "unexpected character '" + std::string(1, c) + "'");
    }
    adv(t.text.size());
    out.push_back(std::move(t));
  }
  Token eof;
  eof.pos = {line, col};
  out.push_back(eof);
  return out;
}

inline bool is_reserved(std::string_view w) {
  static const std::set<std::string, std::less<>> words{
      "carrier", "let", "eval", "pow",  "unit", "L",   "O",   "I",   "eps",
      "omega",   "pi",  "rho",  "syq",  "pair", "vec", "rel", "inj"};
  return words.count(w) > 0;
}

class Parser {
public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Script script() {
    Script s;
    while (is("carrier") || is("let"))
      s.stmts.push_back(stmt());
    if (!is("eval"))
      fail({"'carrier'", "'let'", "'eval'"});
    next();
    s.result = expr();
    if (peek().kind != Token::Kind::eof)
      fail({"'|'", "'&'", "'.'", "'^'", "end of input"});
    return s;
  }

  ExprPtr expression_only() {
    ExprPtr e = expr();
    if (peek().kind != Token::Kind::eof)
      fail({"end of input"});
    return e;
  }

private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;

  const Token &peek() const { return toks_[at_]; }
  const Token &next() { return toks_[at_++]; }

  bool is(std::string_view text) const {
    const Token &t = peek();
    return (t.kind == Token::Kind::id || t.kind == Token::Kind::sym) &&
           t.text == text;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw syntax_error(peek().pos, std::move(expected), peek().describe());
  }

  void expect(std::string_view text) {
    if (!is(text))
      fail({"'" + std::string(text) + "'"});
    next();
  }

  std::string ident() {
    const Token &t = peek();
    if (t.kind != Token::Kind::id || is_reserved(t.text))
      fail({"identifier"});
    return next().text;
  }

  Stmt stmt() {
    Stmt s;
    s.pos = peek().pos;
    if (is("carrier")) {
      next();
      s.kind = Stmt::Kind::carrier;
      s.name = ident();
      expect("=");
      if (peek().kind == Token::Kind::nat) {
        try {
          s.size = std::stoull(peek().text);
        } catch (const std::exception &) {
          fail({"number below 2^64"});
        }
        next();
      } else if (starts_cexpr()) {
        s.shape = cexpr();
      } else {
        fail({"number", "identifier", "'unit'", "'pow'", "'('"});
      }
      expect(";");
      return s;
    }
    expect("let");
    s.kind = Stmt::Kind::let;
    s.name = ident();
    if (is(":")) {
      next();
      s.annotation = rtype();
    }
    if (!is("="))
      fail(s.annotation ? std::vector<std::string>{"'='", "'*'"}
                        : std::vector<std::string>{"':'", "'='"});
    next();
    s.expr = expr();
    if (!is(";"))
      fail({"'|'", "'&'", "'.'", "'^'", "';'"});
    next();
    return s;
  }

  bool starts_cexpr() const {
    const Token &t = peek();
    return is("unit") || is("pow") || is("(") ||
           (t.kind == Token::Kind::id && !is_reserved(t.text));
  }

  RType rtype() {
    RType r;
    r.source = cexpr();
    if (!is("<->"))
      fail({"'*'", "'<->'"});
    next();
    r.target = cexpr();
    return r;
  }

  CExpr cexpr() {
    CExpr c = cterm();
    while (is("*")) {
      const Pos p = peek().pos;
      next();
      CExpr prod;
      prod.kind = CExpr::Kind::product;
      prod.pos = p;
      prod.args.push_back(std::move(c));
      prod.args.push_back(cterm());
      c = std::move(prod);
    }
    return c;
  }

  CExpr cterm() {
    CExpr c;
    c.pos = peek().pos;
    if (is("unit")) {
      next();
      c.kind = CExpr::Kind::unit;
    } else if (is("pow")) {
      next();
      c.kind = CExpr::Kind::pow;
      c.args.push_back(cterm());
    } else if (is("(")) {
      next();
      c = cexpr();
      expect(")");
    } else if (peek().kind == Token::Kind::id && !is_reserved(peek().text)) {
      c.kind = CExpr::Kind::id;
      c.name = next().text;
    } else {
      fail({"carrier name", "'unit'", "'pow'", "'('"});
    }
    return c;
  }

  static ExprPtr node(Op op, Pos pos) {
    auto e = std::make_unique<Expr>();
    e->op = op;
    e->pos = pos;
    return e;
  }

  ExprPtr binary_chain(Op op, std::string_view sym, ExprPtr (Parser::*sub)()) {
    ExprPtr l = (this->*sub)();
    while (is(sym)) {
      const Pos p = peek().pos;
      next();
      ExprPtr e = node(op, p);
      e->args.push_back(std::move(l));
      e->args.push_back((this->*sub)());
      l = std::move(e);
    }
    return l;
  }

  ExprPtr expr() { return binary_chain(Op::unite, "|", &Parser::inter); }
  ExprPtr inter() { return binary_chain(Op::intersect, "&", &Parser::comp); }
  ExprPtr comp() { return binary_chain(Op::compose, ".", &Parser::unary); }

  ExprPtr unary() {
    if (is("-")) {
      ExprPtr e = node(Op::complement, peek().pos);
      next();
      e->args.push_back(unary());
      return e;
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    while (is("^")) {
      ExprPtr t = node(Op::transpose, peek().pos);
      next();
      t->args.push_back(std::move(e));
      e = std::move(t);
    }
    return e;
  }

  ExprPtr atom() {
    const Token &t = peek();
    const Pos p = t.pos;
    if (is("(")) {
      next();
      ExprPtr e = expr();
      if (!is(")"))
        fail({"'|'", "'&'", "'.'", "'^'", "')'"});
      next();
      return e;
    }
    if (t.kind != Token::Kind::id)
      fail(atom_starts());
    static const std::pair<const char *, Op> rtype_ops[] = {
        {"L", Op::universal}, {"O", Op::empty}};
    static const std::pair<const char *, Op> carrier_ops[] = {
        {"I", Op::identity}, {"eps", Op::eps}, {"omega", Op::omega},
        {"pi", Op::pi},      {"rho", Op::rho}};
    static const std::pair<const char *, Op> binary_ops[] = {
        {"syq", Op::syq}, {"pair", Op::pair}};
    static const std::pair<const char *, Op> unary_ops[] = {
        {"vec", Op::vec}, {"rel", Op::rel}, {"inj", Op::inj}};
    for (auto [w, op] : rtype_ops)
      if (is(w)) {
        next();
        ExprPtr e = node(op, p);
        expect("[");
        e->rtype = rtype();
        expect("]");
        return e;
      }
    for (auto [w, op] : carrier_ops)
      if (is(w)) {
        next();
        ExprPtr e = node(op, p);
        expect("[");
        e->carrier = cexpr();
        if (!is("]"))
          fail({"'*'", "']'"});
        next();
        return e;
      }
    for (auto [w, op] : binary_ops)
      if (is(w)) {
        next();
        ExprPtr e = node(op, p);
        expect("(");
        e->args.push_back(expr());
        if (!is(","))
          fail({"'|'", "'&'", "'.'", "'^'", "','"});
        next();
        e->args.push_back(expr());
        if (!is(")"))
          fail({"'|'", "'&'", "'.'", "'^'", "')'"});
        next();
        return e;
      }
    for (auto [w, op] : unary_ops)
      if (is(w)) {
        next();
        ExprPtr e = node(op, p);
        expect("(");
        e->args.push_back(expr());
        if (!is(")"))
          fail({"'|'", "'&'", "'.'", "'^'", "')'"});
        next();
        return e;
      }
    if (is_reserved(t.text))
      fail(atom_starts());
    ExprPtr e = node(Op::ident, p);
    e->name = next().text;
    return e;
  }

  static std::vector<std::string> atom_starts() {
    return {"identifier", "'-'", "'('", "'L'", "'O'", "'I'", "'eps'",
            "'omega'", "'pi'", "'rho'", "'syq'", "'pair'", "'vec'", "'rel'",
            "'inj'"};
  }
};

inline Script parse(std::string_view src) { return Parser(src).script(); }

inline ExprPtr parse_expression(std::string_view src) {
  return Parser(src).expression_only();
}

} // namespace relctl::dsl
