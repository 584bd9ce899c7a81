/// @file   eval.hpp
/// @brief  Evaluation of checked scripts on the relation engine

#pragma once

#include <map>
#include <optional>
#include <string>

#include "relctl/dsl/check.hpp"
#include "relctl/dsl/parser.hpp"
#include "relctl/election.hpp"
#include "relctl/relation.hpp"

namespace relctl::dsl {

struct Env {
  std::map<std::string, Carrier> carriers;
  std::map<std::string, Relation> relations;

  [[nodiscard]] TypeEnv types() const {
    TypeEnv t;
    t.carriers = carriers;
    for (const auto &[name, r] : relations)
      t.relations.emplace(name, Type{r.source(), r.target()});
    return t;
  }
};

class Evaluator {
public:
  Evaluator(Context &ctx, Env env) : ctx_(ctx), env_(std::move(env)) {}

  /// Runs a script that has passed `typecheck` against `env.types()`.
  Relation run(const Script &s) {
    for (const auto &st : s.stmts) {
      if (st.kind == Stmt::Kind::carrier)
        env_.carriers.emplace(st.name, declare_carrier(st, env_.carriers));
      else
        env_.relations.emplace(st.name, eval(*st.expr));
    }
    return eval(*s.result);
  }

  Relation eval(const Expr &e) {
    auto arg = [&](std::size_t i) { return eval(*e.args[i]); };
    auto carrier = [&] { return resolve(*e.carrier, env_.carriers); };
    switch (e.op) {
    case Op::ident: return env_.relations.at(e.name);
    case Op::complement: return complement(arg(0));
    case Op::transpose: return transpose(arg(0));
    case Op::unite: return unite(arg(0), arg(1));
    case Op::intersect: return intersect(arg(0), arg(1));
    case Op::compose: return compose(arg(0), arg(1));
    case Op::universal:
    case Op::empty: {
      const Carrier s = resolve(e.rtype->source, env_.carriers);
      const Carrier t = resolve(e.rtype->target, env_.carriers);
      return e.op == Op::universal ? universal(ctx_, s, t) : empty(ctx_, s, t);
    }
    case Op::identity: return identity(ctx_, carrier());
    case Op::eps: return relctl::eps(ctx_, carrier());
    case Op::omega: return relctl::omega(ctx_, carrier());
    case Op::pi: return relctl::pi(ctx_, carrier());
    case Op::rho: return relctl::rho(ctx_, carrier());
    case Op::syq: return relctl::syq(arg(0), arg(1));
    case Op::pair: return pairing(arg(0), arg(1));
    case Op::vec: return relctl::vec(arg(0));
    case Op::rel: return rel_of(arg(0));
    case Op::inj: return relctl::inj(arg(0), inj_carrier_name(e.pos));
    }
    throw type_error(e.pos, "unknown expression form");
  }

private:
  Context &ctx_;
  Env env_;
};

/// Parses, checks and evaluates in one go.
inline Relation run_script(Context &ctx, std::string_view text, const Env &env) {
  Script s = parse(text);
  typecheck(s, env.types());
  return Evaluator(ctx, env).run(s);
}

/// Carriers N, A, A2 = A*A, PN = pow N and relation P of an election, plus
/// the point p of the target alternative when one is given.
inline Env election_env(Context &ctx, const Election &e, const Relation &P,
                        std::optional<std::size_t> target = std::nullopt) {
  const ElectionCarriers c(e);
  Env env;
  env.carriers = {{"N", c.N}, {"A", c.A}, {"A2", c.A2}, {"PN", c.PN}};
  env.relations.emplace("P", P);
  if (target)
    env.relations.emplace("p", point_of(ctx, c.A, *target));
  return env;
}

} // namespace relctl::dsl
