#include <bit>
#include <random>

#include <gtest/gtest.h>

#include "relctl/dense.hpp"
#include "relctl/relation.hpp"
#include "support/random_relations.hpp"

using namespace relctl;
using relctl::testing::pick;
using relctl::testing::random_dense;
using relctl::testing::random_relation;
using relctl::testing::small_carriers;
using relctl::testing::within_care;

namespace {

constexpr int cases = 500;

const Carrier X3 = Carrier::base("X", 3);
const Carrier A8 = Carrier::base("A", 8, {"a", "b", "c", "d", "e", "f", "g", "h"});

} // namespace

TEST(Carrier, SizesAndWidths) {
  EXPECT_EQ(Carrier::unit().size(), 1);
  EXPECT_EQ(Carrier::unit().width(), 0u);
  EXPECT_EQ(Carrier::base("N", 13).width(), 4u);
  EXPECT_EQ(Carrier::product(X3, A8).size(), 24);
  EXPECT_EQ(Carrier::product(X3, A8).width(), 5u);
  EXPECT_EQ(Carrier::powerset(X3).size(), 8);
  EXPECT_EQ(Carrier::powerset(Carrier::base("N", 70)).size(), BigInt(1) << 70);
  EXPECT_EQ(Carrier::base("Z", 0).width(), 0u);
}

TEST(Carrier, StructuralEqualityIgnoresLabels) {
  EXPECT_EQ(Carrier::base("A", 8), A8);
  EXPECT_FALSE(Carrier::base("B", 8) == A8);
  EXPECT_FALSE(Carrier::base("A", 7) == A8);
  EXPECT_EQ(Carrier::product(A8, A8), Carrier::product(A8, Carrier::base("A", 8)));
  EXPECT_FALSE(Carrier::powerset(A8) == A8);
}

TEST(Carrier, EncodeDecodeRoundTrip) {
  for (const Carrier &c : small_carriers())
    for (std::uint64_t i = 0; i < c.count(); ++i) {
      auto bits = c.encode(i);
      ASSERT_EQ(bits.size(), c.width());
      ASSERT_EQ(c.decode(bits), i);
    }
  EXPECT_EQ(Carrier::powerset(X3).label(0b101), "{0,2}");
  EXPECT_EQ(Carrier::product(X3, A8).label(8 + 4), "(1,e)");
}

TEST(Relation, Constants) {
  for (const Carrier &s : small_carriers())
    for (const Carrier &t : small_carriers()) {
      Context ctx;
      const Relation o = empty(ctx, s, t), l = universal(ctx, s, t);
      ASSERT_EQ(complement(o), l);
      ASSERT_EQ(entry_count(l), s.size() * t.size());
      ASSERT_TRUE(within_care(l));
    }
  Context ctx;
  EXPECT_EQ(entry_count(identity(ctx, X3)), 3);
  EXPECT_EQ(entry_count(universal(ctx, Carrier::base("P", 5), X3)), 15);
  EXPECT_THROW((void)identity(ctx, X3, A8), type_error);
}

TEST(Relation, DenseRoundTrip) {
  std::mt19937_64 rng(1);
  const Carrier b64 = Carrier::base("S", 64);
  for (int k = 0; k < 300; ++k) {
    Context ctx;
    const Carrier s = k % 3 == 0 ? b64 : pick(rng, small_carriers());
    const Carrier t = k % 5 == 0 ? b64 : pick(rng, small_carriers());
    const DenseRelation d = random_dense(rng, s.count(), t.count());
    const Relation r = from_dense(ctx, s, t, d);
    ASSERT_EQ(to_dense(r), d);
    ASSERT_EQ(from_dense(ctx, s, t, to_dense(r)), r);
    ASSERT_EQ(entry_count(r), d.count());
  }
  Context ctx;
  EXPECT_EQ(to_dense(identity(ctx, Carrier::base("F", 4))), dense::identity(4));
  EXPECT_THROW(DenseRelation(1u << 13, 1u << 12), std::length_error);
}

TEST(Relation, BasicAlgebraMatchesDense) {
  std::mt19937_64 rng(2);
  const auto cs = small_carriers();
  for (int k = 0; k < cases; ++k) {
    Context ctx;
    const Carrier x = pick(rng, cs), y = pick(rng, cs), z = pick(rng, cs);
    const Relation r = random_relation(ctx, rng, x, y);
    const Relation r2 = random_relation(ctx, rng, x, y, 30);
    const Relation s = random_relation(ctx, rng, y, z);
    const DenseRelation dr = to_dense(r), dr2 = to_dense(r2), ds = to_dense(s);

    ASSERT_EQ(to_dense(~r), dense::complement(dr));
    ASSERT_EQ(to_dense(transpose(r)), dense::transpose(dr));
    ASSERT_EQ(to_dense(r | r2), dense::unite(dr, dr2));
    ASSERT_EQ(to_dense(r & r2), dense::intersect(dr, dr2));
    ASSERT_EQ(to_dense(r * s), dense::compose(dr, ds));
    ASSERT_EQ(is_included(r & r2, r), true);
    ASSERT_EQ(is_included(r, r & r2), dense::intersect(dr, dr2) == dr);
    for (const Relation &q : {~r, transpose(r), r | r2, r & r2, r * s})
      ASSERT_TRUE(within_care(q));
  }
}

TEST(Relation, ComposeOnRandomFiveByFive) {
  std::mt19937_64 rng(3);
  const Carrier f = Carrier::base("F", 5);
  for (int k = 0; k < cases; ++k) {
    Context ctx;
    const Relation r = random_relation(ctx, rng, f, f, 30);
    const Relation s = random_relation(ctx, rng, f, f, 30);
    ASSERT_EQ(to_dense(r * s), dense::compose(to_dense(r), to_dense(s)));
  }
}

TEST(Relation, AlgebraicLaws) {
  std::mt19937_64 rng(4);
  const auto cs = small_carriers();
  for (int k = 0; k < 200; ++k) {
    Context ctx;
    const Carrier w = pick(rng, cs), x = pick(rng, cs), y = pick(rng, cs),
                  z = pick(rng, cs);
    const Relation r = random_relation(ctx, rng, w, x);
    const Relation s = random_relation(ctx, rng, x, y);
    const Relation t = random_relation(ctx, rng, y, z);
    const Relation r2 = random_relation(ctx, rng, w, x);
    ASSERT_EQ(r * (s * t), (r * s) * t);
    ASSERT_EQ(transpose(transpose(r)), r);
    ASSERT_EQ(identity(ctx, w) * r, r);
    ASSERT_EQ(r * identity(ctx, x), r);
    ASSERT_EQ(~(r | r2), ~r & ~r2);
    ASSERT_EQ(~(r & r2), ~r | ~r2);
    ASSERT_EQ(transpose(r | r2), transpose(r) | transpose(r2));
    ASSERT_EQ(transpose(r * s), transpose(s) * transpose(r));
    // Schroeder equivalence: Q.R <= S iff Q^.-S <= -R
    const Relation q = random_relation(ctx, rng, w, x);
    const Relation target = random_relation(ctx, rng, w, y, 70);
    ASSERT_EQ(is_included(q * s, target),
              is_included(transpose(q) * ~target, ~s));
  }
}

TEST(Relation, TypeErrorsNameBothTypes) {
  Context ctx;
  const Relation r = universal(ctx, X3, A8);
  try {
    (void)(r * r);
    FAIL() << "expected type_error";
  } catch (const type_error &e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("X <-> A"), std::string::npos) << msg;
  }
  EXPECT_THROW((void)(r | universal(ctx, A8, X3)), type_error);
  Context other;
  EXPECT_THROW((void)(r | universal(other, X3, A8)), std::invalid_argument);
}

TEST(Relation, SyqMatchesPointwiseDefinition) {
  std::mt19937_64 rng(5);
  const auto cs = small_carriers();
  for (int k = 0; k < cases; ++k) {
    Context ctx;
    const Carrier x = pick(rng, cs), y = pick(rng, cs), z = pick(rng, cs);
    const Relation r = random_relation(ctx, rng, x, y);
    const Relation s = random_relation(ctx, rng, x, z);
    const Relation q = syq(r, s);
    ASSERT_EQ(to_dense(q), dense::syq(to_dense(r), to_dense(s)));
    ASSERT_TRUE(within_care(q));
  }
}

TEST(Relation, SyqExhaustiveOnTinyCarriers) {
  // every R : X <-> Y and S : X <-> Z with |X|,|Y|,|Z| <= 3 would be 2^18
  // pairs; all relations over 2x2 and 3x1 shapes plus every R for fixed S
  // over 3x3 cover the law without that blow-up
  for (std::uint64_t nx : {1u, 2u, 3u})
    for (std::uint64_t ny : {1u, 2u, 3u}) {
      Context ctx;
      const Carrier x = Carrier::base("X", nx), y = Carrier::base("Y", ny);
      const std::uint64_t cells = nx * ny;
      std::vector<Relation> all;
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << cells); ++code) {
        DenseRelation d(nx, ny);
        for (std::uint64_t c = 0; c < cells; ++c)
          if ((code >> c) & 1u)
            d.set(c / ny, c % ny);
        all.push_back(from_dense(ctx, x, y, d));
      }
      std::mt19937_64 rng(nx * 10 + ny);
      for (const Relation &r : all)
        for (int k = 0; k < 8; ++k) {
          const Relation &s = all[rng() % all.size()];
          ASSERT_EQ(to_dense(syq(r, s)), dense::syq(to_dense(r), to_dense(s)));
        }
    }
}

TEST(Relation, SyqExamples) {
  Context ctx;
  const Relation e = eps(ctx, X3);
  EXPECT_EQ(syq(e, e), identity(ctx, Carrier::powerset(X3)));
  EXPECT_EQ(syq(identity(ctx, X3), identity(ctx, X3)), identity(ctx, X3));
  std::mt19937_64 rng(6);
  for (int k = 0; k < 100; ++k) {
    const Relation r = random_relation(ctx, rng, X3, A8);
    const DenseRelation q = to_dense(syq(r, r));
    for (std::uint64_t y = 0; y < 8; ++y)
      ASSERT_TRUE(q.get(y, y));
  }
}

TEST(Relation, ProjectionsAndPairing) {
  std::mt19937_64 rng(7);
  const auto cs = small_carriers();
  for (int k = 0; k < cases; ++k) {
    Context ctx;
    const Carrier x = pick(rng, cs), y = pick(rng, cs), z = pick(rng, cs);
    const Carrier xy = Carrier::product(x, y);
    if (xy.count() * std::max<std::uint64_t>(x.count(), y.count()) > 4096)
      continue;
    const Relation p = pi(ctx, xy), q = rho(ctx, xy);
    ASSERT_EQ(to_dense(p), dense::pi(x.count(), y.count()));
    ASSERT_EQ(to_dense(q), dense::rho(x.count(), y.count()));
    ASSERT_EQ(pairing(p, q), identity(ctx, xy));
    const Relation r = random_relation(ctx, rng, z, x);
    const Relation s = random_relation(ctx, rng, z, y);
    const Relation rs = pairing(r, s);
    ASSERT_EQ(to_dense(rs), dense::pairing(to_dense(r), to_dense(s)));
    // the defining formula R.pi^ & S.rho^
    ASSERT_EQ(rs, (r * transpose(p)) & (s * transpose(q)));
    ASSERT_TRUE(within_care(rs));
  }
  Context ctx;
  const Carrier b2 = Carrier::base("T", 2), b3 = Carrier::base("X", 3);
  const Carrier b23 = Carrier::product(b2, b3);
  EXPECT_EQ(entry_count(pi(ctx, b23)), 6);
  EXPECT_TRUE(is_included(identity(ctx, b2), transpose(pi(ctx, b23)) * pi(ctx, b23)));
  EXPECT_EQ(pairing(universal(ctx, b3, b2), universal(ctx, b3, b3)),
            universal(ctx, b3, Carrier::product(b2, b3)));
  EXPECT_TRUE(pairing(universal(ctx, b3, b2), empty(ctx, b3, b3)).is_empty());
  EXPECT_THROW((void)pi(ctx, b2), type_error);
}

TEST(Relation, PairingPointwiseOnFourByThreeAndTwo) {
  std::mt19937_64 rng(8);
  const Carrier z = Carrier::base("Z", 4), x = Carrier::base("X", 3),
                y = Carrier::base("T", 2);
  for (int k = 0; k < cases; ++k) {
    Context ctx;
    const Relation r = random_relation(ctx, rng, z, x);
    const Relation s = random_relation(ctx, rng, z, y);
    const DenseRelation d = to_dense(pairing(r, s));
    const DenseRelation dr = to_dense(r), ds = to_dense(s);
    for (std::uint64_t zi = 0; zi < 4; ++zi)
      for (std::uint64_t xi = 0; xi < 3; ++xi)
        for (std::uint64_t yi = 0; yi < 2; ++yi)
          ASSERT_EQ(d.get(zi, xi * 2 + yi), dr.get(zi, xi) && ds.get(zi, yi));
  }
}

TEST(Relation, Exchange) {
  Context ctx;
  const Carrier t2 = Carrier::base("T", 2);
  const Carrier sq = Carrier::product(t2, t2);
  const Relation ex = exchange(ctx, sq);
  EXPECT_EQ(ex * ex, identity(ctx, sq));
  EXPECT_TRUE(contains(ex, 1, 2));  // (0,1) -> (1,0)
  EXPECT_TRUE(contains(ex, 0, 0));  // (0,0) -> (0,0)
  EXPECT_FALSE(contains(ex, 1, 1));
  EXPECT_THROW((void)exchange(ctx, Carrier::product(t2, X3)), type_error);

  std::mt19937_64 rng(9);
  const Carrier sq3 = Carrier::product(X3, X3);
  const Carrier n = Carrier::base("N", 5);
  for (int k = 0; k < cases; ++k) {
    const Relation p = random_relation(ctx, rng, n, sq3);
    ASSERT_EQ(to_dense(p * exchange(ctx, sq3)),
              dense::compose(to_dense(p), dense::exchange(3)));
  }
}

TEST(Relation, VecAndRel) {
  std::mt19937_64 rng(10);
  const auto cs = small_carriers();
  for (int k = 0; k < cases; ++k) {
    Context ctx;
    const Carrier x = pick(rng, cs), y = pick(rng, cs);
    const Carrier xy = Carrier::product(x, y);
    const Relation r = random_relation(ctx, rng, x, y);
    const Relation v = vec(r);
    ASSERT_EQ(to_dense(v), dense::vec(to_dense(r)));
    ASSERT_EQ(rel_of(v), r);
    ASSERT_EQ(entry_count(v), entry_count(r));
    const Relation w = random_relation(ctx, rng, xy, Carrier::unit());
    ASSERT_EQ(vec(rel_of(w)), w);
    ASSERT_EQ(to_dense(rel_of(w)), dense::rel_of(to_dense(w), x.count(), y.count()));
    if (xy.count() * std::max<std::uint64_t>(x.count(), y.count()) <= 4096) {
      // the defining formulas (pi.R & rho).L and pi^.(rho & v.L)
      const Relation p = pi(ctx, xy), q = rho(ctx, xy);
      ASSERT_EQ(v, ((p * r) & q) * universal(ctx, y, Carrier::unit()));
      ASSERT_EQ(rel_of(w),
                transpose(p) * (q & (w * universal(ctx, Carrier::unit(), y))));
    }
  }
  Context ctx;
  EXPECT_TRUE(vec(empty(ctx, X3, A8)).is_empty());
}

TEST(Relation, MembershipPointwise) {
  for (std::uint64_t m = 0; m <= 4; ++m) {
    Context ctx;
    const Carrier x = Carrier::base("X", m);
    const Relation e = eps(ctx, x);
    ASSERT_EQ(to_dense(e), dense::eps(m));
    ASSERT_TRUE(within_care(e));
  }
  for (std::uint64_t m = 1; m <= 10; ++m) {
    Context ctx;
    const Relation e = eps(ctx, Carrier::base("X", m));
    ASSERT_EQ(entry_count(e), BigInt(m) << static_cast<unsigned>(m - 1));
  }
  Context ctx;
  const Relation e = eps(ctx, X3);
  for (std::uint64_t x = 0; x < 3; ++x) {
    EXPECT_TRUE(contains(e, x, 7));
    EXPECT_FALSE(contains(e, x, 0));
  }
}

TEST(Relation, SizeComparisonPointwise) {
  for (std::uint64_t m = 0; m <= 4; ++m) {
    Context ctx;
    const Carrier x = Carrier::base("X", m);
    const Relation om = omega(ctx, x);
    ASSERT_EQ(to_dense(om), dense::omega(m));
    ASSERT_EQ(om | transpose(om), universal(ctx, om.source(), om.target()));
    ASSERT_TRUE(is_included(identity(ctx, om.source()), om));
  }
  Context ctx;
  const Relation om3 = omega(ctx, X3);
  EXPECT_EQ(entry_count(om3), 42);
  // {1} vs {2} in a two-element set both ways
  const Relation om2 = omega(ctx, Carrier::base("T", 2));
  EXPECT_TRUE(contains(om2, 0b10, 0b01));
  EXPECT_TRUE(contains(om2, 0b01, 0b10));
  for (std::uint64_t y = 0; y < 8; ++y)
    EXPECT_TRUE(contains(om3, 0, y));
}

TEST(Relation, SizeComparisonBruteForceCountForThree) {
  // 64 pairs (Y, Z) over a 3-element set; sizes 1,3,3,1 give (64 + 20) / 2
  int n = 0;
  for (unsigned y = 0; y < 8; ++y)
    for (unsigned z = 0; z < 8; ++z)
      n += std::popcount(y) <= std::popcount(z);
  EXPECT_EQ(n, 42);
}

TEST(Relation, PointsAndEmbedding) {
  Context ctx;
  for (std::uint64_t i = 0; i < 8; ++i)
    EXPECT_EQ(entry_count(point_of(ctx, A8, i)), 1);
  Relation all = empty(ctx, A8, Carrier::unit());
  for (std::uint64_t i = 0; i < 8; ++i)
    all = all | point_of(ctx, A8, i);
  EXPECT_EQ(all, universal(ctx, A8, Carrier::unit()));
  EXPECT_EQ(A8.label(4), "e");
  EXPECT_EQ(members(point_of(ctx, A8, 4)), std::vector<std::uint64_t>{4});
  EXPECT_THROW((void)point_of(ctx, A8, 8), std::out_of_range);

  const Relation full = inj(universal(ctx, A8, Carrier::unit()));
  EXPECT_EQ(to_dense(full), dense::identity(8));

  std::mt19937_64 rng(11);
  for (int k = 0; k < cases; ++k) {
    const Carrier x = pick(rng, small_carriers());
    const Relation r = random_relation(ctx, rng, x, Carrier::unit());
    const Relation j = inj(r);
    ASSERT_EQ(to_dense(j), dense::inj(to_dense(r)));
    ASSERT_EQ(j * transpose(j), identity(ctx, j.source()));
  }
  const Relation none = inj(empty(ctx, A8, Carrier::unit()));
  EXPECT_EQ(none.source().count(), 0u);
  EXPECT_TRUE(none.is_empty());
}

TEST(Relation, ColumnEnumeration) {
  Context ctx;
  const Carrier pw = Carrier::powerset(X3);
  // family {{0,2}, {1}}
  const Relation fam = point_of(ctx, pw, 0b101) | point_of(ctx, pw, 0b010);
  const Relation cols = column_enum(fam);
  ASSERT_EQ(cols.target().count(), 2u);
  const DenseRelation d = to_dense(cols);
  // columns in index order: {1} = 0b010 first, then {0,2} = 0b101
  EXPECT_TRUE(!d.get(0, 0) && d.get(1, 0) && !d.get(2, 0));
  EXPECT_TRUE(d.get(0, 1) && !d.get(1, 1) && d.get(2, 1));
}

TEST(Relation, MatrixRendering) {
  Context ctx;
  const Carrier t = Carrier::base("T", 2, {"p", "q"});
  const std::string s = to_matrix_string(identity(ctx, t));
  EXPECT_EQ(s, "# columns: p q\np 1.\nq .1\n");
}
