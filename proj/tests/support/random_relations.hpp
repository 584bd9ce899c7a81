// Random carriers and relations for property tests.
#pragma once

#include <random>
#include <vector>

#include "relctl/dense.hpp"
#include "relctl/relation.hpp"

namespace relctl::testing {

/// A small zoo of carriers of size <= 16 covering every shape, including
/// non-power-of-two base sizes.
inline std::vector<Carrier> small_carriers() {
  const Carrier b1 = Carrier::base("B", 1);
  const Carrier b2 = Carrier::base("T", 2);
  const Carrier b3 = Carrier::base("X", 3);
  const Carrier b5 = Carrier::base("Y", 5);
  const Carrier b8 = Carrier::base("E", 8);
  return {Carrier::unit(),
          b1,
          b2,
          b3,
          b5,
          b8,
          Carrier::product(b2, b3),
          Carrier::product(b3, b3),
          Carrier::powerset(b3),
          Carrier::powerset(b2),
          Carrier::product(b2, Carrier::powerset(b2))};
}

inline Carrier pick(std::mt19937_64 &rng, const std::vector<Carrier> &cs) {
  return cs[rng() % cs.size()];
}

inline DenseRelation random_dense(std::mt19937_64 &rng, std::uint64_t rows,
                                  std::uint64_t cols, unsigned density = 50) {
  DenseRelation d(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j)
      if (rng() % 100 < density)
        d.set(i, j);
  return d;
}

inline Relation random_relation(Context &ctx, std::mt19937_64 &rng,
                                const Carrier &s, const Carrier &t,
                                unsigned density = 50) {
  return from_dense(ctx, s, t, random_dense(rng, s.count(), t.count(), density));
}

/// No entry outside the care space of the relation's carriers.
inline bool within_care(const Relation &r) {
  Context &ctx = r.context();
  const auto care =
      ctx.care(r.source(), Slot::source) & ctx.care(r.target(), Slot::target);
  return (r.fn() & ~care).is_false();
}

} // namespace relctl::testing
