/// @file   ast.hpp
/// @brief  Syntax trees of relational scripts, with a canonical printer and
///         an S-expression dump

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relctl/carrier.hpp"

namespace relctl::dsl {

struct Pos {
  std::size_t line = 1, col = 1;
  [[nodiscard]] std::string str() const {
    return std::to_string(line) + ":" + std::to_string(col);
  }
};

/// Carrier expression: a name, `unit`, `pow c`, or `c * c`.
struct CExpr {
  enum class Kind { id, unit, pow, product };
  Kind kind = Kind::unit;
  std::string name;
  std::vector<CExpr> args;
  Pos pos;
};

struct RType {
  CExpr source, target;
};

enum class Op {
  ident,
  complement,
  transpose,
  unite,
  intersect,
  compose,
  universal, // L[..]
  empty,     // O[..]
  identity,  // I[..]
  eps,
  omega,
  pi,
  rho,
  syq,
  pair,
  vec,
  rel,
  inj
};

/// Type of a relation expression after checking.
struct Type {
  Carrier source, target;
  [[nodiscard]] std::string str() const {
    return source.to_string() + " <-> " + target.to_string();
  }
};

struct Expr {
  Op op = Op::ident;
  std::string name;
  std::vector<std::unique_ptr<Expr>> args;
  std::optional<RType> rtype;   // L, O
  std::optional<CExpr> carrier; // I, eps, omega, pi, rho
  Pos pos;
  std::optional<Type> type; // set by the typechecker
};

using ExprPtr = std::unique_ptr<Expr>;

struct Stmt {
  enum class Kind { carrier, let };
  Kind kind = Kind::let;
  std::string name;
  Pos pos;
  std::optional<std::uint64_t> size; // carrier X = 5;
  std::optional<CExpr> shape;        // carrier X = A * B;
  std::optional<RType> annotation;   // let X : S <-> T = ...
  ExprPtr expr;
};

struct Script {
  std::vector<Stmt> stmts;
  ExprPtr result;

  [[nodiscard]] std::size_t binding_count() const {
    std::size_t n = 0;
    for (const auto &s : stmts)
      n += s.kind == Stmt::Kind::let;
    return n;
  }
};

// -- structural equality, positions and types ignored ----------------------------

inline bool operator==(const CExpr &a, const CExpr &b) {
  return a.kind == b.kind && a.name == b.name && a.args == b.args;
}

inline bool operator==(const RType &a, const RType &b) {
  return a.source == b.source && a.target == b.target;
}

inline bool operator==(const Expr &a, const Expr &b) {
  if (a.op != b.op || a.name != b.name || a.rtype != b.rtype ||
      a.carrier != b.carrier || a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!(*a.args[i] == *b.args[i]))
      return false;
  return true;
}

inline bool operator==(const Stmt &a, const Stmt &b) {
  if (a.kind != b.kind || a.name != b.name || a.size != b.size ||
      a.shape != b.shape || a.annotation != b.annotation)
    return false;
  if (!a.expr || !b.expr)
    return !a.expr && !b.expr;
  return *a.expr == *b.expr;
}

inline bool operator==(const Script &a, const Script &b) {
  return a.stmts == b.stmts && a.result && b.result && *a.result == *b.result;
}

// -- canonical printing ----------------------------------------------------------

inline const char *builtin_name(Op op) {
  switch (op) {
  case Op::universal: return "L";
  case Op::empty: return "O";
  case Op::identity: return "I";
  case Op::eps: return "eps";
  case Op::omega: return "omega";
  case Op::pi: return "pi";
  case Op::rho: return "rho";
  case Op::syq: return "syq";
  case Op::pair: return "pair";
  case Op::vec: return "vec";
  case Op::rel: return "rel";
  case Op::inj: return "inj";
  default: return "";
  }
}

namespace detail {

// binding strength, loosest first
inline int precedence(const Expr &e) {
  switch (e.op) {
  case Op::unite: return 1;
  case Op::intersect: return 2;
  case Op::compose: return 3;
  case Op::complement: return 4;
  case Op::transpose: return 5;
  default: return 6;
  }
}

inline int cprecedence(const CExpr &c) {
  switch (c.kind) {
  case CExpr::Kind::product: return 1;
  case CExpr::Kind::pow: return 2;
  default: return 3;
  }
}

} // namespace detail

inline std::string print(const CExpr &c) {
  auto wrap = [](const CExpr &x, int min) {
    const std::string s = print(x);
    return detail::cprecedence(x) < min ? "(" + s + ")" : s;
  };
  switch (c.kind) {
  case CExpr::Kind::id: return c.name;
  case CExpr::Kind::unit: return "unit";
  case CExpr::Kind::pow: return "pow " + wrap(c.args[0], 2);
  case CExpr::Kind::product:
    return wrap(c.args[0], 1) + "*" + wrap(c.args[1], 2);
  }
  return "";
}

inline std::string print(const RType &t) {
  return print(t.source) + " <-> " + print(t.target);
}

inline std::string print(const Expr &e) {
  auto wrap = [](const Expr &x, int min) {
    const std::string s = print(x);
    return detail::precedence(x) < min ? "(" + s + ")" : s;
  };
  switch (e.op) {
  case Op::ident: return e.name;
  case Op::complement: return "-" + wrap(*e.args[0], 4);
  case Op::transpose: return wrap(*e.args[0], 5) + "^";
  case Op::unite: return wrap(*e.args[0], 1) + " | " + wrap(*e.args[1], 2);
  case Op::intersect: return wrap(*e.args[0], 2) + " & " + wrap(*e.args[1], 3);
  case Op::compose: return wrap(*e.args[0], 3) + " . " + wrap(*e.args[1], 4);
  case Op::universal:
  case Op::empty: return std::string(builtin_name(e.op)) + "[" + print(*e.rtype) + "]";
  case Op::identity:
  case Op::eps:
  case Op::omega:
  case Op::pi:
  case Op::rho:
    return std::string(builtin_name(e.op)) + "[" + print(*e.carrier) + "]";
  case Op::syq:
  case Op::pair:
    return std::string(builtin_name(e.op)) + "(" + print(*e.args[0]) + ", " +
           print(*e.args[1]) + ")";
  case Op::vec:
  case Op::rel:
  case Op::inj:
    return std::string(builtin_name(e.op)) + "(" + print(*e.args[0]) + ")";
  }
  return "";
}

inline std::string print(const Script &s) {
  std::ostringstream os;
  for (const auto &st : s.stmts) {
    if (st.kind == Stmt::Kind::carrier) {
      os << "carrier " << st.name << " = "
         << (st.size ? std::to_string(*st.size) : print(*st.shape)) << ";\n";
    } else {
      os << "let " << st.name;
      if (st.annotation)
        os << " : " << print(*st.annotation);
      os << " = " << print(*st.expr) << ";\n";
    }
  }
  os << "eval " << print(*s.result) << '\n';
  return os.str();
}

// -- S-expressions ---------------------------------------------------------------

inline std::string sexpr(const CExpr &c) {
  switch (c.kind) {
  case CExpr::Kind::id: return c.name;
  case CExpr::Kind::unit: return "unit";
  case CExpr::Kind::pow: return "(pow " + sexpr(c.args[0]) + ")";
  case CExpr::Kind::product:
    return "(* " + sexpr(c.args[0]) + " " + sexpr(c.args[1]) + ")";
  }
  return "";
}

inline std::string sexpr(const RType &t) {
  return "(<-> " + sexpr(t.source) + " " + sexpr(t.target) + ")";
}

inline std::string sexpr(const Expr &e) {
  static const char *ops[] = {"", "-", "^", "|", "&", "."};
  std::string out;
  switch (e.op) {
  case Op::ident: return e.name;
  case Op::complement:
  case Op::transpose:
  case Op::unite:
  case Op::intersect:
  case Op::compose:
    out = std::string("(") + ops[static_cast<int>(e.op)];
    break;
  default:
    out = std::string("(") + builtin_name(e.op);
  }
  if (e.rtype)
    out += " " + sexpr(*e.rtype);
  if (e.carrier)
    out += " " + sexpr(*e.carrier);
  for (const auto &a : e.args)
    out += " " + sexpr(*a);
  return out + ")";
}

/// One top-level form per line.
inline std::string sexpr(const Script &s) {
  std::ostringstream os;
  os << "(script\n";
  for (const auto &st : s.stmts) {
    if (st.kind == Stmt::Kind::carrier)
      os << "  (carrier " << st.name << " "
         << (st.size ? std::to_string(*st.size) : sexpr(*st.shape)) << ")\n";
    else
      os << "  (let " << st.name
         << (st.annotation ? " " + sexpr(*st.annotation) : std::string()) << " "
         << sexpr(*st.expr) << ")\n";
  }
  os << "  (eval " << sexpr(*s.result) << "))\n";
  return os.str();
}

} // namespace relctl::dsl
