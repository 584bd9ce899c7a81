/// @file   control.hpp
/// @brief  Symbolic constructive control by deleting voters
///
/// All relations with source pow N describe, per voter subset X, the
/// situation in the sub-election of the voters in X.

#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relctl/election.hpp"
#include "relctl/relation.hpp"
#include "relctl/result.hpp"

namespace relctl {

/// R : pow N <-> A*A, R_{X,(a,b)} iff within X more voters put a above b
/// than b above a.
inline Relation relativized_dominance(const Relation &P) {
  Context &ctx = P.context();
  const Carrier &N = P.source();
  const Carrier &A2 = P.target();
  if (!A2.is_product() || !(A2.left() == A2.right()))
    throw type_error("relativized dominance: P must have type N <-> A*A, got " +
                     P.type_string());
  const Carrier PN = Carrier::powerset(N);
  const Relation e = eps(ctx, N);
  const Relation swap = pairing(rho(ctx, A2), pi(ctx, A2));
  const Relation E = syq(pairing(e, P), e);
  const Relation F = syq(pairing(e, P * swap), e);
  const Relation L = universal(ctx, PN, Carrier::unit());
  return rel_of((E & (F * strict_omega(ctx, N))) * L);
}

/// U : pow N <-> A*A, the covering relation of each sub-election.
inline Relation relativized_covering(const Relation &R) {
  Context &ctx = R.context();
  const Carrier &A2 = R.target();
  if (!A2.is_product() || !(A2.left() == A2.right()))
    throw type_error("relativized covering: R must have target A*A, got " +
                     R.type_string());
  const Relation p = pi(ctx, A2), q = rho(ctx, A2);
  // E_{(v,w),u} iff v = (c,u1) and w = (c,u2) for some c
  const Relation E =
      transpose(pairing(p * transpose(q), q * transpose(q))) &
      vec(p * transpose(p)) * universal(ctx, Carrier::unit(), A2);
  return R & ~(pairing(R, ~R) * E);
}

namespace detail {

inline void require_point(const Relation &p) {
  if (!p.is_vector() || entry_count(p) != 1)
    throw type_error("target must be a point (exactly one entry), got " +
                     p.type_string() + " with " + entry_count(p).str() +
                     " entries");
}

} // namespace detail

/// Subsets X in which the target strictly beats every other alternative.
inline Relation cand_condorcet(const Relation &R, const Relation &p) {
  detail::require_point(p);
  Context &ctx = R.context();
  const Carrier &A2 = R.target();
  const Relation first = pi(ctx, A2) * p, second = rho(ctx, A2) * p;
  return ~(~R * (first & ~second));
}

/// Subsets X in which nothing covers the target.
inline Relation cand_uncovered(const Relation &U, const Relation &p) {
  detail::require_point(p);
  Context &ctx = U.context();
  const Carrier &A2 = U.target();
  const Relation first = pi(ctx, A2) * p, second = rho(ctx, A2) * p;
  return ~(U * (~first & second));
}

/// The members of cand of largest cardinality: cand & -(-Om^ . cand).
inline Relation maximal_solutions(const Relation &cand) {
  if (!cand.is_vector() || !cand.source().is_powerset())
    throw type_error("maximal solutions: need a vector over a powerset, got " +
                     cand.type_string());
  Context &ctx = cand.context();
  const Relation om = omega(ctx, cand.source().inner());
  return cand & ~(transpose(~om) * cand);
}

/// Row X of a relation pow N <-> A*A, reshaped into A <-> A.
inline Relation slice(const Relation &R, std::uint64_t X) {
  const Relation x = point_of(R.context(), R.source(), X);
  return rel_of(transpose(R) * x);
}

/// Powerset index of a 0-based keep mask (voter 1 is the most significant
/// bit).
inline std::uint64_t subset_index(const std::vector<bool> &keep) {
  std::uint64_t idx = 0;
  for (bool b : keep)
    idx = (idx << 1) | (b ? 1u : 0u);
  return idx;
}

struct ControlArtifacts {
  Relation R;
  std::optional<Relation> U;
  Relation cand, sol;
};

/// Caches P, R and U of one election so that several targets and rules can
/// be solved against the same diagrams.
class ControlSession {
public:
  /// Largest voter count for which keep-sets are decoded into indices.
  static constexpr std::size_t max_voters = 62;

  explicit ControlSession(Election e)
      : election_(std::move(e)), carriers_(election_),
        P_(build_P(ctx_, election_)) {}

  ControlSession(const ControlSession &) = delete;
  ControlSession &operator=(const ControlSession &) = delete;

  [[nodiscard]] Context &context() noexcept { return ctx_; }
  [[nodiscard]] const Election &election() const noexcept { return election_; }
  [[nodiscard]] const ElectionCarriers &carriers() const noexcept {
    return carriers_;
  }
  [[nodiscard]] const Relation &P() const noexcept { return P_; }

  const Relation &R() {
    if (!R_)
      R_ = relativized_dominance(P_);
    return *R_;
  }

  const Relation &U() {
    if (!U_)
      U_ = relativized_covering(R());
    return *U_;
  }

  [[nodiscard]] Relation target_point(std::size_t target) {
    if (target >= election_.m())
      throw election_error("unknown alternative index " + std::to_string(target));
    return point_of(ctx_, carriers_.A, target);
  }

  ControlArtifacts artifacts(std::size_t target, Rule rule) {
    const Relation p = target_point(target);
    if (rule == Rule::condorcet) {
      Relation cand = cand_condorcet(R(), p);
      Relation sol = maximal_solutions(cand);
      return {R(), std::nullopt, std::move(cand), std::move(sol)};
    }
    Relation cand = cand_uncovered(U(), p);
    Relation sol = maximal_solutions(cand);
    return {R(), U(), std::move(cand), std::move(sol)};
  }

  ControlResult solve(std::size_t target, Rule rule,
                      std::size_t limit = SIZE_MAX) {
    const std::size_t n = election_.n();
    if (n > max_voters)
      throw election_error("symbolic solve decodes at most " +
                           std::to_string(max_voters) + " voters, got " +
                           std::to_string(n));
    const ControlArtifacts art = artifacts(target, rule);
    ControlResult res;
    res.target = election_.alternatives[target];
    res.rule = rule;
    res.n = n;
    res.backend = "symbolic";
    res.num_optimal = entry_count(art.sol);
    res.feasible = !art.cand.is_empty();
    if (!res.feasible)
      return res;
    // sol is nonempty whenever cand is
    const auto idx = members(art.sol, limit == SIZE_MAX ? limit : limit + 1);
    for (std::size_t k = 0; k < idx.size() && k < limit; ++k) {
      std::vector<std::size_t> keep;
      for (std::size_t j = 0; j < n; ++j)
        if ((idx[k] >> (n - 1 - j)) & 1u)
          keep.push_back(j + 1);
      res.keeps.push_back(std::move(keep));
    }
    res.truncated = idx.size() > limit;
    const std::uint64_t first = idx.front();
    res.min_deletions = n - static_cast<std::size_t>(std::popcount(first));
    return res;
  }

private:
  Context ctx_;
  Election election_;
  ElectionCarriers carriers_;
  Relation P_;
  std::optional<Relation> R_, U_;
};

} // namespace relctl
