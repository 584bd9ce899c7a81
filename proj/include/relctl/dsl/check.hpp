/// @file   check.hpp
/// @brief  Typechecker for relational scripts
///
/// Carrier names are aliases: they resolve to structural carriers, and types
/// are compared structurally. The one nominal exception is the subset
/// carrier created by `inj`, whose size is only known at evaluation time; it
/// is named after the position of the `inj` call and compared by that name
/// alone.

#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "relctl/dsl/ast.hpp"

namespace relctl::dsl {

class type_error : public std::runtime_error {
public:
  type_error(Pos pos, const std::string &msg)
      : std::runtime_error(pos.str() + ": type error: " + msg), pos_(pos) {}
  [[nodiscard]] Pos pos() const noexcept { return pos_; }

private:
  Pos pos_;
};

struct TypeEnv {
  std::map<std::string, Carrier> carriers;
  std::map<std::string, Type> relations;
};

inline const std::string inj_prefix = "inj@";

inline std::string inj_carrier_name(Pos p) {
  return inj_prefix + std::to_string(p.line) + ":" + std::to_string(p.col);
}

/// Structural carrier equality, with `inj` carriers compared by name.
inline bool compatible(const Carrier &a, const Carrier &b) {
  if (a.kind() != b.kind())
    return false;
  switch (a.kind()) {
  case Carrier::Kind::unit:
    return true;
  case Carrier::Kind::base:
    if (a.name().rfind(inj_prefix, 0) == 0 || b.name().rfind(inj_prefix, 0) == 0)
      return a.name() == b.name();
    return a == b;
  case Carrier::Kind::product:
    return compatible(a.left(), b.left()) && compatible(a.right(), b.right());
  case Carrier::Kind::powerset:
    return compatible(a.inner(), b.inner());
  }
  return false;
}

inline bool compatible(const Type &a, const Type &b) {
  return compatible(a.source, b.source) && compatible(a.target, b.target);
}

inline Carrier resolve(const CExpr &c,
                       const std::map<std::string, Carrier> &carriers) {
  switch (c.kind) {
  case CExpr::Kind::id: {
    auto it = carriers.find(c.name);
    if (it == carriers.end())
      throw type_error(c.pos, "unknown carrier '" + c.name + "'");
    return it->second;
  }
  case CExpr::Kind::unit:
    return Carrier::unit();
  case CExpr::Kind::pow:
    return Carrier::powerset(resolve(c.args[0], carriers));
  case CExpr::Kind::product:
    return Carrier::product(resolve(c.args[0], carriers),
                            resolve(c.args[1], carriers));
  }
  return Carrier::unit();
}

/// Carrier bound by a `carrier` statement.
inline Carrier declare_carrier(const Stmt &s,
                               const std::map<std::string, Carrier> &carriers) {
  if (s.size) {
    std::vector<std::string> labels;
    for (std::uint64_t i = 0; i < *s.size; ++i)
      labels.push_back(std::to_string(i));
    return Carrier::base(s.name, *s.size, std::move(labels));
  }
  return resolve(*s.shape, carriers);
}

class Checker {
public:
  explicit Checker(TypeEnv env) : env_(std::move(env)) {}

  /// Annotates every expression node with its type and returns the type of
  /// the script's result.
  Type run(Script &s) {
    for (auto &st : s.stmts) {
      if (st.kind == Stmt::Kind::carrier) {
        if (env_.carriers.count(st.name))
          throw type_error(st.pos, "carrier '" + st.name + "' is already bound");
        env_.carriers.emplace(st.name, declare_carrier(st, env_.carriers));
        continue;
      }
      if (env_.relations.count(st.name))
        throw type_error(st.pos, "relation '" + st.name + "' is already bound");
      Type t = check(*st.expr);
      if (st.annotation) {
        const Type want{resolve(st.annotation->source, env_.carriers),
                        resolve(st.annotation->target, env_.carriers)};
        if (!compatible(want, t))
          throw type_error(st.expr->pos, "'" + st.name + "' is declared " +
                                             want.str() + " but its definition has type " +
                                             t.str());
      }
      env_.relations.emplace(st.name, std::move(t));
    }
    return check(*s.result);
  }

  Type check(Expr &e) {
    e.type = infer(e);
    return *e.type;
  }

  [[nodiscard]] const TypeEnv &env() const noexcept { return env_; }

private:
  TypeEnv env_;

  Carrier carrier_of(const CExpr &c) const { return resolve(c, env_.carriers); }

  static std::string at(const Expr &e) {
    return e.type->str() + " (at " + e.pos.str() + ")";
  }

  Carrier product_arg(const Expr &e, const char *what) const {
    const Carrier c = carrier_of(*e.carrier);
    if (!c.is_product())
      throw type_error(e.carrier->pos, std::string(what) +
                                           " needs a product carrier, got " +
                                           c.to_string());
    return c;
  }

  Type infer(Expr &e) {
    switch (e.op) {
    case Op::ident: {
      auto it = env_.relations.find(e.name);
      if (it == env_.relations.end())
        throw type_error(e.pos, "unknown relation '" + e.name + "'");
      return it->second;
    }
    case Op::complement:
      return check(*e.args[0]);
    case Op::transpose: {
      const Type t = check(*e.args[0]);
      return {t.target, t.source};
    }
    case Op::unite:
    case Op::intersect: {
      const Type l = check(*e.args[0]), r = check(*e.args[1]);
      if (!compatible(l, r))
        throw type_error(e.pos, std::string(e.op == Op::unite ? "union" : "intersection") +
                                    " of different types: " + at(*e.args[0]) +
                                    " and " + at(*e.args[1]));
      return l;
    }
    case Op::compose: {
      const Type l = check(*e.args[0]), r = check(*e.args[1]);
      if (!compatible(l.target, r.source))
        throw type_error(e.pos, "composition needs matching inner carriers: " +
                                    at(*e.args[0]) + " and " + at(*e.args[1]));
      return {l.source, r.target};
    }
    case Op::universal:
    case Op::empty:
      return {carrier_of(e.rtype->source), carrier_of(e.rtype->target)};
    case Op::identity: {
      const Carrier c = carrier_of(*e.carrier);
      return {c, c};
    }
    case Op::eps: {
      const Carrier c = carrier_of(*e.carrier);
      return {c, Carrier::powerset(c)};
    }
    case Op::omega: {
      const Carrier p = Carrier::powerset(carrier_of(*e.carrier));
      return {p, p};
    }
    case Op::pi: {
      const Carrier c = product_arg(e, "pi");
      return {c, c.left()};
    }
    case Op::rho: {
      const Carrier c = product_arg(e, "rho");
      return {c, c.right()};
    }
    case Op::syq: {
      const Type l = check(*e.args[0]), r = check(*e.args[1]);
      if (!compatible(l.source, r.source))
        throw type_error(e.pos, "syq needs equal sources: " + at(*e.args[0]) +
                                    " and " + at(*e.args[1]));
      return {l.target, r.target};
    }
    case Op::pair: {
      const Type l = check(*e.args[0]), r = check(*e.args[1]);
      if (!compatible(l.source, r.source))
        throw type_error(e.pos, "pair needs equal sources: " + at(*e.args[0]) +
                                    " and " + at(*e.args[1]));
      return {l.source, Carrier::product(l.target, r.target)};
    }
    case Op::vec: {
      const Type t = check(*e.args[0]);
      return {Carrier::product(t.source, t.target), Carrier::unit()};
    }
    case Op::rel: {
      const Type t = check(*e.args[0]);
      if (!t.target.is_unit() || !t.source.is_product())
        throw type_error(e.pos, "rel needs a vector over a product, got " +
                                    at(*e.args[0]));
      return {t.source.left(), t.source.right()};
    }
    case Op::inj: {
      const Type t = check(*e.args[0]);
      if (!t.target.is_unit())
        throw type_error(e.pos, "inj needs a vector, got " + at(*e.args[0]));
      return {Carrier::base(inj_carrier_name(e.pos), 0), t.source};
    }
    }
    throw type_error(e.pos, "unknown expression form");
  }
};

inline Type typecheck(Script &s, TypeEnv env) {
  return Checker(std::move(env)).run(s);
}

} // namespace relctl::dsl
