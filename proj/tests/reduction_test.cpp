#include <random>

#include <gtest/gtest.h>

#include "relctl/reduction.hpp"

using namespace relctl;

namespace {

/// Exact cover by trying every subset of sets.
bool has_cover_brute(const X4CInstance &inst) {
  const std::size_t k = inst.sets.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<int> occ(inst.n + 1, 0);
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1u)
        for (auto j : inst.sets[i])
          ++occ[j];
    if (std::all_of(occ.begin() + 1, occ.end(), [](int c) { return c == 1; }))
      return true;
  }
  return false;
}

bool satisfiable_brute(const OneInThreeInstance &inst) {
  for (std::uint64_t a = 0; a < (std::uint64_t{1} << inst.num_vars); ++a) {
    bool ok = true;
    for (const auto &c : inst.clauses) {
      int t = 0;
      for (auto v : c)
        t += (a >> (v - 1)) & 1u;
      if (t != 1) {
        ok = false;
        break;
      }
    }
    if (ok)
      return true;
  }
  return false;
}

bool is_exact_cover(const X4CInstance &inst, const std::vector<std::size_t> &c) {
  std::vector<int> occ(inst.n + 1, 0);
  for (auto i : c)
    for (auto j : inst.sets[i])
      ++occ[j];
  return std::all_of(occ.begin() + 1, occ.end(), [](int x) { return x == 1; });
}

} // namespace

TEST(ValidateX4C, Examples) {
  X4CInstance three{4, {{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}}};
  EXPECT_TRUE(validate_x4c(three).empty());
  X4CInstance small = three;
  small.sets[0] = {1, 2, 3};
  EXPECT_FALSE(validate_x4c(small).empty());
  X4CInstance twice = three;
  twice.sets[0] = {1, 1, 2, 3};
  const auto bad = validate_x4c(twice);
  EXPECT_GE(bad.size(), 2u); // repeated element, wrong occurrence counts
  EXPECT_FALSE(validate_x4c({5, {}}).empty());
  X4CInstance range = three;
  range.sets[2] = {1, 2, 3, 9};
  EXPECT_FALSE(validate_x4c(range).empty());
}

TEST(Reduce1in3, OutputIsValidAndPreservesSatisfiability) {
  std::mt19937_64 rng(1);
  int sat = 0, unsat = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t clauses = 4 * (1 + rng() % 4); // up to 16 clauses
    const bool planted = k % 2 == 0;
    const auto in = generate_one_in_three(clauses, planted, rng);
    ASSERT_TRUE(validate_one_in_three(in).empty());
    const auto out = reduce_1in3_to_x4c(in);
    ASSERT_EQ(out.n, clauses);
    ASSERT_TRUE(validate_x4c(out).empty());
    const bool s = satisfiable_brute(in);
    if (planted) {
      ASSERT_TRUE(s);
    }
    const auto cover = find_exact_cover(out);
    ASSERT_EQ(cover.has_value(), s);
    (s ? sat : unsat)++;
  }
  EXPECT_GT(sat, 100);
  EXPECT_GT(unsat, 0);
}

TEST(Reduce1in3, RejectsInvalidInput) {
  OneInThreeInstance bad{3, {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}, {1, 2, 2}}};
  EXPECT_THROW(reduce_1in3_to_x4c(bad), instance_error);
  try {
    reduce_1in3_to_x4c(bad);
  } catch (const instance_error &e) {
    EXPECT_FALSE(e.violations().empty());
  }
}

TEST(ExactCover, AgainstExhaustiveSearch) {
  std::mt19937_64 rng(2);
  int pos = 0, neg = 0;
  for (int k = 0; k < 300; ++k) {
    const std::size_t n = 4 * (1 + rng() % 4); // k = 3n/4 <= 12 sets
    const auto inst = generate_x4c(n, k % 3 == 0, rng);
    ASSERT_TRUE(validate_x4c(inst).empty());
    const auto c = find_exact_cover(inst);
    ASSERT_EQ(c.has_value(), has_cover_brute(inst));
    if (c) {
      ASSERT_EQ(c->size(), n / 4);
      ASSERT_TRUE(is_exact_cover(inst, *c));
      ++pos;
    } else {
      ++neg;
    }
  }
  EXPECT_GT(pos, 0);
  EXPECT_GT(neg, 0);
}

TEST(ExactCover, PlantedPartitionsArePositive) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {16u, 24u, 40u}) {
    const auto inst = generate_x4c(n, true, rng);
    const auto c = find_exact_cover(inst);
    ASSERT_TRUE(c);
    EXPECT_TRUE(is_exact_cover(inst, *c));
  }
}

TEST(ControlInstance, ShapeForSixteen) {
  std::mt19937_64 rng(4);
  const auto inst = generate_x4c(16, true, rng);
  const auto ci = build_control_instance(inst);
  EXPECT_EQ(ci.layout.t, 2u);
  EXPECT_EQ(ci.layout.budget, 4u);
  EXPECT_EQ(ci.election.m(), 33u);
  EXPECT_EQ(ci.election.n(), 77u);
  EXPECT_EQ(ci.election.alternatives[ci.layout.target], "astar");
  const auto &last = ci.election.voters.back();
  EXPECT_EQ(last.tiers.front().front(), ci.layout.target);
  EXPECT_EQ(ci.layout.groups.back(), (VoterGroup{4, 0}));
  for (const auto &v : ci.election.voters)
    EXPECT_TRUE(v.is_linear());
  // the election survives the file format
  EXPECT_EQ(parse_election(write_election(ci.election)), ci.election);
}

TEST(ControlInstance, RejectsBadInput) {
  X4CInstance three{4, {{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}}};
  EXPECT_THROW(build_control_instance(three), instance_error);
  std::mt19937_64 rng(5);
  auto inst = generate_x4c(16, true, rng);
  inst.sets.pop_back();
  EXPECT_THROW(build_control_instance(inst), instance_error);
}

TEST(Audit, MarginFormulas) {
  std::mt19937_64 rng(6);
  for (std::size_t n : {16u, 20u, 24u})
    for (bool planted : {true, false}) {
      const auto ci = build_control_instance(generate_x4c(n, planted, rng));
      const auto rep = audit_margins(ci.election, ci.layout);
      EXPECT_TRUE(rep.ok()) << rep.deviations.size() << " deviations, first "
                            << rep.deviations.front().claim;
      EXPECT_EQ(rep.pairs_checked, 3 * n + n * (n - 1));
      EXPECT_TRUE(rep.headline_holds);
      EXPECT_TRUE(rep.body_holds);
      if (n == 16) {
        EXPECT_EQ(rep.b_over_own_s, 1);
        EXPECT_EQ(rep.astar_over_s, 13);
        EXPECT_EQ(rep.b_over_astar, 65);
      }
    }
}

TEST(Audit, ReportsDeviations) {
  std::mt19937_64 rng(7);
  auto ci = build_control_instance(generate_x4c(16, true, rng));
  ci.election.voters.pop_back(); // drop the group-4 voter
  const auto rep = audit_margins(ci.election, ci.layout);
  EXPECT_FALSE(rep.ok());
  EXPECT_FALSE(rep.body_holds);
}

TEST(Reduction, CoverDeletionWinsAndNothingSmallerDoes) {
  std::mt19937_64 rng(8);
  const auto inst = generate_x4c(16, true, rng);
  const auto ci = build_control_instance(inst);
  const auto cover = find_exact_cover(inst);
  ASSERT_TRUE(cover);
  const auto del = ci.layout.set_voters(*cover);
  ASSERT_EQ(del.size(), 4u);
  EXPECT_TRUE(verify_deletion(ci.election, del, ci.layout.target, Rule::uncovered));
  EXPECT_FALSE(verify_deletion(ci.election, {}, ci.layout.target, Rule::uncovered));
  const auto scan = scan_deletions(ci.election, ci.layout.target, 3);
  EXPECT_EQ(scan.subsets_checked, 1u + 77u + 2926u + 73150u);
  EXPECT_TRUE(scan.winning.empty());
}

TEST(Reduction, ScanFindsKnownWinners) {
  // at size 4 the cover itself must show up
  std::mt19937_64 rng(9);
  const auto inst = generate_x4c(16, true, rng);
  const auto ci = build_control_instance(inst);
  const auto del = ci.layout.set_voters(*find_exact_cover(inst));
  const auto scan = scan_deletions(ci.election, ci.layout.target, 4);
  EXPECT_EQ(scan.subsets_checked, 1u + 77u + 2926u + 73150u + 1353275u);
  EXPECT_NE(std::find(scan.winning.begin(), scan.winning.end(), del),
            scan.winning.end());
  for (std::size_t k = 0; k < scan.winning.size(); k += 1 + scan.winning.size() / 20)
    EXPECT_TRUE(verify_deletion(ci.election, scan.winning[k], ci.layout.target,
                                Rule::uncovered));
}

TEST(Reduction, ScanIndependentOfThreadCount) {
  std::mt19937_64 rng(10);
  const auto ci = build_control_instance(generate_x4c(16, true, rng));
  // target s1 is uncovered for many small deletions, which exercises merging
  const std::size_t s1 = ci.layout.s(1);
  const auto one = scan_deletions(ci.election, s1, 2, 1);
  const auto many = scan_deletions(ci.election, s1, 2, 5);
  EXPECT_EQ(one.subsets_checked, many.subsets_checked);
  EXPECT_EQ(one.winning, many.winning);
  EXPECT_GT(one.winning.size(), 100u);
}

TEST(ReductionJson, RoundTrip) {
  std::mt19937_64 rng(10);
  const auto inst = generate_x4c(16, true, rng);
  EXPECT_EQ(x4c_from_json(to_json(inst)), inst);
  const auto o = generate_one_in_three(8, true, rng);
  const auto back = one_in_three_from_json(to_json(o));
  EXPECT_EQ(back.clauses, o.clauses);
  const auto side = layout_json(build_control_instance(inst));
  EXPECT_EQ(side["target"], "astar");
  EXPECT_EQ(side["budget"], 4);
  EXPECT_EQ(side["groups"].size(), 77u);
}
