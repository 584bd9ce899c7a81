/// @file   oracle.hpp
/// @brief  Brute-force reference solver: enumerate voter subsets and count
///         pairwise majorities directly
///
/// Nothing here touches relations or decision diagrams. Subsets are bit
/// masks with bit i standing for voter i+1.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>
#include <vector>

#include "relctl/election.hpp"
#include "relctl/result.hpp"

namespace relctl {

class oracle_cap_exceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OracleConfig {
  std::size_t max_n = 20;
  /// worker threads; 0 picks the hardware concurrency
  unsigned parallel_chunks = 0;
  /// solutions kept in the result; num_optimal is always exact
  std::size_t limit = SIZE_MAX;

  /// Defaults with max_n taken from RELCTL_ORACLE_CAP when set.
  static OracleConfig from_env() {
    OracleConfig c;
    if (const char *s = std::getenv("RELCTL_ORACLE_CAP"))
      c.max_n = static_cast<std::size_t>(std::stoul(s));
    return c;
  }
};

struct OracleDominance {
  std::vector<std::vector<int>> margin;
  std::vector<std::vector<bool>> beats;
};

inline OracleDominance oracle_dominance_on(const Election &e,
                                           std::uint64_t subset) {
  const std::size_t m = e.m();
  OracleDominance d{std::vector<std::vector<int>>(m, std::vector<int>(m, 0)),
                    std::vector<std::vector<bool>>(m, std::vector<bool>(m))};
  for (std::size_t i = 0; i < e.n(); ++i) {
    if (!((subset >> i) & 1u))
      continue;
    const auto &rank = e.voters[i].rank;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        if (rank[a] >= 0 && rank[b] >= 0 && rank[a] < rank[b]) {
          ++d.margin[a][b];
          --d.margin[b][a];
        }
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      d.beats[a][b] = d.margin[a][b] > 0;
  return d;
}

inline bool oracle_winner_check(const Election &e, std::uint64_t subset,
                                std::size_t target, Rule rule) {
  const auto d = oracle_dominance_on(e, subset);
  const std::size_t m = e.m();
  if (rule == Rule::condorcet) {
    for (std::size_t b = 0; b < m; ++b)
      if (b != target && !d.beats[target][b])
        return false;
    return true;
  }
  // target is covered by b when b beats target and whatever beats b also
  // beats target
  for (std::size_t b = 0; b < m; ++b) {
    if (b == target || !d.beats[b][target])
      continue;
    bool covers = true;
    for (std::size_t c = 0; c < m && covers; ++c)
      if (d.beats[c][b] && !d.beats[c][target])
        covers = false;
    if (covers)
      return false;
  }
  return true;
}

/// Full-width mask for n voters.
inline std::uint64_t all_voters(std::size_t n) {
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

inline ControlResult oracle_solve(const Election &e, std::size_t target,
                                  Rule rule, const OracleConfig &cfg = {}) {
  const std::size_t n = e.n();
  if (n > cfg.max_n || n > 40)
    throw oracle_cap_exceeded("oracle: " + std::to_string(n) +
                              " voters exceeds the cap of " +
                              std::to_string(std::min<std::size_t>(cfg.max_n, 40)));
  if (target >= e.m())
    throw election_error("unknown alternative index " + std::to_string(target));

  ControlResult res;
  res.target = e.alternatives[target];
  res.rule = rule;
  res.n = n;
  res.backend = "oracle";

  const std::uint64_t space = std::uint64_t{1} << n;
  unsigned workers = cfg.parallel_chunks ? cfg.parallel_chunks
                                         : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, 64);
  if (space < 4096)
    workers = 1;

  for (std::size_t k = n + 1; k-- > 0;) {
    auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
      std::vector<std::uint64_t> hits;
      for (std::uint64_t s = lo; s < hi; ++s)
        if (static_cast<std::size_t>(std::popcount(s)) == k &&
            oracle_winner_check(e, s, target, rule))
          hits.push_back(s);
      return hits;
    };
    std::vector<std::uint64_t> hits;
    if (workers == 1) {
      hits = scan(0, space);
    } else {
      std::vector<std::future<std::vector<std::uint64_t>>> parts;
      const std::uint64_t step = (space + workers - 1) / workers;
      for (std::uint64_t lo = 0; lo < space; lo += step)
        parts.push_back(std::async(std::launch::async, scan, lo,
                                   std::min(space, lo + step)));
      for (auto &p : parts) {
        auto h = p.get();
        hits.insert(hits.end(), h.begin(), h.end());
      }
    }
    if (hits.empty())
      continue;

    res.feasible = true;
    res.min_deletions = n - k;
    res.num_optimal = hits.size();
    std::vector<std::vector<std::size_t>> keeps;
    for (auto s : hits) {
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < n; ++i)
        if ((s >> i) & 1u)
          keep.push_back(i + 1);
      keeps.push_back(std::move(keep));
    }
    std::sort(keeps.begin(), keeps.end(), [n](const auto &a, const auto &b) {
      return membership(a, n) < membership(b, n);
    });
    if (keeps.size() > cfg.limit) {
      keeps.resize(cfg.limit);
      res.truncated = true;
    }
    res.keeps = std::move(keeps);
    return res;
  }
  return res;
}

} // namespace relctl
