/// @file   reduction.hpp
/// @brief  Exact cover by 4-sets, its reduction from 1-in-3 satisfiability,
///         and the election built from it for uncovered-set control
///
/// Elements, sets, variables and clauses are numbered from 1 in the JSON
/// forms and in `X4CInstance::sets`; set and voter indices returned by the
/// search and scan routines are 0-based.

#pragma once

#include <algorithm>
#include <array>
#include <climits>
#include <cstdint>
#include <future>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "relctl/election.hpp"

namespace relctl {

class instance_error : public std::runtime_error {
public:
  instance_error(const std::string &what, std::vector<std::string> violations)
      : std::runtime_error(what), violations_(std::move(violations)) {}
  [[nodiscard]] const std::vector<std::string> &violations() const noexcept {
    return violations_;
  }

private:
  std::vector<std::string> violations_;
};

struct X4CInstance {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> sets;
  friend bool operator==(const X4CInstance &, const X4CInstance &) = default;
};

struct OneInThreeInstance {
  std::size_t num_vars = 0;
  std::vector<std::array<std::size_t, 3>> clauses;
};

/// Every violated constraint of the instance; empty means valid.
inline std::vector<std::string> validate_x4c(const X4CInstance &inst) {
  std::vector<std::string> bad;
  const std::size_t n = inst.n;
  if (n == 0 || n % 4 != 0)
    bad.push_back("ground-set size " + std::to_string(n) +
                  " is not a positive multiple of 4");
  if (inst.sets.size() * 4 != 3 * n)
    bad.push_back("expected 3n/4 = " + std::to_string(3 * n / 4) +
                  " sets, got " + std::to_string(inst.sets.size()));
  std::vector<std::size_t> occ(n + 1, 0);
  for (std::size_t i = 0; i < inst.sets.size(); ++i) {
    const auto &s = inst.sets[i];
    const std::string name = "set " + std::to_string(i + 1);
    if (s.size() != 4)
      bad.push_back(name + " has " + std::to_string(s.size()) +
                    " elements, expected 4");
    std::vector<std::size_t> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      bad.push_back(name + " repeats an element");
    for (auto j : s) {
      if (j < 1 || j > n)
        bad.push_back(name + " contains " + std::to_string(j) +
                      ", outside 1.." + std::to_string(n));
      else
        ++occ[j];
    }
  }
  for (std::size_t j = 1; j <= n; ++j)
    if (occ[j] != 3)
      bad.push_back("element " + std::to_string(j) + " occurs in " +
                    std::to_string(occ[j]) + " sets, expected 3");
  return bad;
}

inline std::vector<std::string>
validate_one_in_three(const OneInThreeInstance &inst) {
  std::vector<std::string> bad;
  std::vector<std::size_t> occ(inst.num_vars + 1, 0);
  for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
    const auto &cl = inst.clauses[c];
    const std::string name = "clause " + std::to_string(c + 1);
    if (cl[0] == cl[1] || cl[0] == cl[2] || cl[1] == cl[2])
      bad.push_back(name + " repeats a variable");
    for (auto v : cl) {
      if (v < 1 || v > inst.num_vars)
        bad.push_back(name + " uses variable " + std::to_string(v) +
                      ", outside 1.." + std::to_string(inst.num_vars));
      else
        ++occ[v];
    }
  }
  for (std::size_t v = 1; v <= inst.num_vars; ++v)
    if (occ[v] != 4)
      bad.push_back("variable " + std::to_string(v) + " appears in " +
                    std::to_string(occ[v]) + " clauses, expected 4");
  if (4 * inst.num_vars != 3 * inst.clauses.size())
    bad.push_back("variable count " + std::to_string(inst.num_vars) +
                  " is not 3/4 of the clause count " +
                  std::to_string(inst.clauses.size()));
  return bad;
}

/// Clause j becomes element j; variable i becomes the set of clauses that
/// mention it.
inline X4CInstance reduce_1in3_to_x4c(const OneInThreeInstance &inst) {
  if (auto bad = validate_one_in_three(inst); !bad.empty())
    throw instance_error("invalid 1-in-3 instance", std::move(bad));
  X4CInstance out;
  out.n = inst.clauses.size();
  out.sets.resize(inst.num_vars);
  for (std::size_t c = 0; c < inst.clauses.size(); ++c)
    for (auto v : inst.clauses[c])
      out.sets[v - 1].push_back(c + 1);
  return out;
}

/// Some exact cover as ascending 0-based set indices. Branches on the
/// uncovered element with the fewest usable sets.
inline std::optional<std::vector<std::size_t>>
find_exact_cover(const X4CInstance &inst) {
  const std::size_t n = inst.n;
  std::vector<std::vector<std::size_t>> sets_of(n + 1);
  for (std::size_t i = 0; i < inst.sets.size(); ++i)
    for (auto j : inst.sets[i])
      if (j >= 1 && j <= n)
        sets_of[j].push_back(i);
  std::vector<bool> covered(n + 1, false);
  std::vector<std::size_t> chosen;

  auto usable = [&](std::size_t i) {
    return std::none_of(inst.sets[i].begin(), inst.sets[i].end(),
                        [&](std::size_t j) { return covered[j]; });
  };
  auto dfs = [&](auto &&self) -> bool {
    std::size_t best = 0, best_count = SIZE_MAX;
    for (std::size_t j = 1; j <= n; ++j) {
      if (covered[j])
        continue;
      std::size_t c = 0;
      for (auto i : sets_of[j])
        c += usable(i);
      if (c < best_count) {
        best = j;
        best_count = c;
      }
    }
    if (best == 0)
      return true;
    for (auto i : sets_of[best]) {
      if (!usable(i))
        continue;
      for (auto j : inst.sets[i])
        covered[j] = true;
      chosen.push_back(i);
      if (self(self))
        return true;
      chosen.pop_back();
      for (auto j : inst.sets[i])
        covered[j] = false;
    }
    return false;
  };
  if (!dfs(dfs))
    return std::nullopt;
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

// -- generators ------------------------------------------------------------------

namespace detail {

/// Three random partitions of 1..n into 4-sets; the first is an exact cover.
inline X4CInstance planted_x4c(std::size_t n, std::mt19937_64 &rng) {
  X4CInstance inst{n, {}};
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  for (int round = 0; round < 3; ++round) {
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t k = 0; k < n; k += 4) {
      std::vector<std::size_t> s(perm.begin() + k, perm.begin() + k + 4);
      std::sort(s.begin(), s.end());
      inst.sets.push_back(std::move(s));
    }
  }
  std::shuffle(inst.sets.begin(), inst.sets.end(), rng);
  return inst;
}

/// Uniform 3-regular 4-uniform family by the configuration model, retried
/// until no set repeats an element. May or may not have an exact cover.
inline X4CInstance random_x4c(std::size_t n, std::mt19937_64 &rng) {
  std::vector<std::size_t> slots;
  for (std::size_t j = 1; j <= n; ++j)
    slots.insert(slots.end(), 3, j);
  for (;;) {
    std::shuffle(slots.begin(), slots.end(), rng);
    X4CInstance inst{n, {}};
    bool ok = true;
    for (std::size_t k = 0; k < slots.size() && ok; k += 4) {
      std::vector<std::size_t> s(slots.begin() + k, slots.begin() + k + 4);
      std::sort(s.begin(), s.end());
      ok = std::adjacent_find(s.begin(), s.end()) == s.end();
      inst.sets.push_back(std::move(s));
    }
    if (ok)
      return inst;
  }
}

} // namespace detail

/// Valid X4C instance on n elements (n a positive multiple of 4). With
/// `planted`, one of three hidden partitions is an exact cover.
inline X4CInstance generate_x4c(std::size_t n, bool planted,
                                std::mt19937_64 &rng) {
  if (n == 0 || n % 4 != 0)
    throw std::invalid_argument("x4c generator: n must be a positive multiple of 4");
  return planted ? detail::planted_x4c(n, rng) : detail::random_x4c(n, rng);
}

/// Valid 1-in-3 instance with `clauses` clauses (a positive multiple of 4).
/// With `planted`, variables 1..clauses/4 true and the rest false satisfy
/// exactly one literal per clause, before variables are shuffled.
inline OneInThreeInstance generate_one_in_three(std::size_t clauses,
                                                bool planted,
                                                std::mt19937_64 &rng) {
  if (clauses == 0 || clauses % 4 != 0)
    throw std::invalid_argument(
        "1-in-3 generator: clause count must be a positive multiple of 4");
  const std::size_t vars = 3 * clauses / 4;
  std::vector<std::size_t> rename(vars);
  std::iota(rename.begin(), rename.end(), 1);
  std::shuffle(rename.begin(), rename.end(), rng);
  for (;;) {
    OneInThreeInstance inst{vars, {}};
    bool ok = true;
    if (planted) {
      const std::size_t t = clauses / 4;
      std::vector<std::size_t> yes, no;
      for (std::size_t v = 0; v < t; ++v)
        yes.insert(yes.end(), 4, v);
      for (std::size_t v = t; v < vars; ++v)
        no.insert(no.end(), 4, v);
      std::shuffle(yes.begin(), yes.end(), rng);
      std::shuffle(no.begin(), no.end(), rng);
      for (std::size_t c = 0; c < clauses && ok; ++c) {
        ok = no[2 * c] != no[2 * c + 1];
        inst.clauses.push_back({rename[yes[c]], rename[no[2 * c]],
                                rename[no[2 * c + 1]]});
      }
    } else {
      std::vector<std::size_t> slots;
      for (std::size_t v = 0; v < vars; ++v)
        slots.insert(slots.end(), 4, v);
      std::shuffle(slots.begin(), slots.end(), rng);
      for (std::size_t c = 0; c < clauses && ok; ++c) {
        const std::size_t x = slots[3 * c], y = slots[3 * c + 1],
                          z = slots[3 * c + 2];
        ok = x != y && x != z && y != z;
        inst.clauses.push_back({rename[x], rename[y], rename[z]});
      }
    }
    if (ok)
      return inst;
  }
}

// -- the control instance --------------------------------------------------------

struct VoterGroup {
  int group = 0;         ///< 1..4
  std::size_t index = 0; ///< i for groups 1 and 2, set number for group 3
  friend bool operator==(const VoterGroup &, const VoterGroup &) = default;
};

struct ReductionLayout {
  std::size_t n = 0;
  std::size_t t = 0;
  std::size_t budget = 0;
  std::size_t target = 0; ///< index of a*
  std::vector<VoterGroup> groups;

  [[nodiscard]] std::size_t s(std::size_t i) const { return i; }
  [[nodiscard]] std::size_t b(std::size_t i) const { return n + i; }

  /// 1-based voter numbers of the group-3 voters of the given 0-based sets.
  [[nodiscard]] std::vector<std::size_t>
  set_voters(const std::vector<std::size_t> &set_indices) const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < groups.size(); ++v)
      if (groups[v].group == 3 &&
          std::find(set_indices.begin(), set_indices.end(),
                    groups[v].index - 1) != set_indices.end())
        out.push_back(v + 1);
    return out;
  }
};

struct ControlInstance {
  Election election;
  ReductionLayout layout;
};

/// Alternatives astar, s1..sn, b1..bn. Voters: t copies of the group-1 order
/// for each i, then t copies of the group-2 order for each i, one group-3
/// voter per set in input order, and the single group-4 voter. Inside every
/// block alternatives appear in ascending index order.
inline ControlInstance build_control_instance(const X4CInstance &inst) {
  if (auto bad = validate_x4c(inst); !bad.empty())
    throw instance_error("invalid X4C instance", std::move(bad));
  const std::size_t n = inst.n;
  if (n < 16)
    throw instance_error("invalid X4C instance",
                         {"ground-set size " + std::to_string(n) +
                          " is below the required minimum of 16"});
  ControlInstance ci;
  ReductionLayout &L = ci.layout;
  L.n = n;
  L.t = n / 4 - 2;
  L.budget = n / 4;
  L.target = 0;
  Election &e = ci.election;
  e.alternatives.push_back("astar");
  for (std::size_t i = 1; i <= n; ++i)
    e.alternatives.push_back("s" + std::to_string(i));
  for (std::size_t i = 1; i <= n; ++i)
    e.alternatives.push_back("b" + std::to_string(i));
  const std::size_t m = e.alternatives.size();

  auto push = [&](const std::vector<std::size_t> &r, VoterGroup g) {
    e.voters.push_back(VoterOrder::linear(r, m));
    L.groups.push_back(g);
  };
  auto s_range = [&](auto pred) {
    std::vector<std::size_t> r;
    for (std::size_t j = 1; j <= n; ++j)
      if (pred(j))
        r.push_back(L.s(j));
    return r;
  };
  auto b_range = [&](auto pred) {
    std::vector<std::size_t> r;
    for (std::size_t j = 1; j <= n; ++j)
      if (pred(j))
        r.push_back(L.b(j));
    return r;
  };
  auto cat = [](std::initializer_list<std::vector<std::size_t>> parts) {
    std::vector<std::size_t> r;
    for (const auto &p : parts)
      r.insert(r.end(), p.begin(), p.end());
    return r;
  };
  const std::vector<std::size_t> astar{L.target};
  auto any = [](std::size_t) { return true; };

  for (std::size_t i = 1; i <= n; ++i) {
    auto other = [i](std::size_t j) { return j != i; };
    const auto r = cat({s_range(other), {L.s(i), L.b(i)}, b_range(other), astar});
    for (std::size_t k = 0; k < L.t; ++k)
      push(r, {1, i});
  }
  for (std::size_t i = 1; i <= n; ++i) {
    auto other = [i](std::size_t j) { return j != i; };
    const auto r = cat({b_range(other), astar, {L.s(i), L.b(i)}, s_range(other)});
    for (std::size_t k = 0; k < L.t; ++k)
      push(r, {2, i});
  }
  for (std::size_t k = 0; k < inst.sets.size(); ++k) {
    const auto &S = inst.sets[k];
    auto in = [&S](std::size_t j) {
      return std::find(S.begin(), S.end(), j) != S.end();
    };
    auto out = [&](std::size_t j) { return !in(j); };
    push(cat({b_range(out), astar, s_range(any), b_range(in)}), {3, k + 1});
  }
  push(cat({astar, s_range(any), b_range(any)}), {4, 0});
  return ci;
}

// -- margin audit ----------------------------------------------------------------

struct MarginDeviation {
  std::string claim;
  std::string row, col;
  long expected = 0, actual = 0;
};

struct AuditReport {
  std::vector<MarginDeviation> deviations;
  std::size_t pairs_checked = 0;
  /// expected values of the four claims
  long b_over_astar = 0, astar_over_s = 0, b_over_other_s = 0, b_over_own_s = 0;
  /// smallest observed margin(a*, s_i) and the two thresholds it is compared
  /// to: the stated lower bound n/4 + 1 and the computed value 3n/4 + 1
  long min_astar_over_s = 0;
  long headline_threshold = 0, body_value = 0;
  bool headline_holds = false, body_holds = false;

  [[nodiscard]] bool ok() const noexcept { return deviations.empty(); }
};

inline AuditReport audit_margins(const Election &e, const ReductionLayout &L) {
  const long n = static_cast<long>(L.n), t = static_cast<long>(L.t);
  AuditReport rep;
  rep.b_over_astar = 2 * (n - 1) * t + 3 * n / 4 - 7;
  rep.astar_over_s = 3 * n / 4 + 1;
  rep.b_over_other_s = 3 * n / 4 - 7;
  rep.b_over_own_s = n / 4 - 3;
  rep.headline_threshold = n / 4 + 1;
  rep.body_value = rep.astar_over_s;

  const MarginMatrix mm = margins(e);
  auto check = [&](const char *claim, std::size_t r, std::size_t c, long exp) {
    ++rep.pairs_checked;
    if (mm[r][c] != exp)
      rep.deviations.push_back(
          {claim, e.alternatives[r], e.alternatives[c], exp, mm[r][c]});
  };
  rep.min_astar_over_s = LONG_MAX;
  for (std::size_t i = 1; i <= L.n; ++i) {
    check("margin(b_i, a*) = 2(n-1)t + 3n/4 - 7", L.b(i), L.target,
          rep.b_over_astar);
    check("margin(a*, s_i) = 3n/4 + 1", L.target, L.s(i), rep.astar_over_s);
    check("margin(b_i, s_i) = n/4 - 3", L.b(i), L.s(i), rep.b_over_own_s);
    for (std::size_t j = 1; j <= L.n; ++j)
      if (j != i)
        check("margin(b_i, s_j) = 3n/4 - 7 for i != j", L.b(i), L.s(j),
              rep.b_over_other_s);
    rep.min_astar_over_s =
        std::min<long>(rep.min_astar_over_s, mm[L.target][L.s(i)]);
  }
  rep.headline_holds = rep.min_astar_over_s >= rep.headline_threshold;
  rep.body_holds = rep.min_astar_over_s == rep.body_value;
  return rep;
}

// -- small deletion scan ---------------------------------------------------------

namespace detail {

/// Whether target is uncovered under margin matrix mm (dominance = positive
/// margin, upward covering).
inline bool uncovered_under(const MarginMatrix &mm, std::size_t target) {
  const std::size_t m = mm.size();
  for (std::size_t b = 0; b < m; ++b) {
    if (b == target || mm[b][target] <= 0)
      continue;
    bool covers = true;
    for (std::size_t c = 0; c < m && covers; ++c)
      if (mm[c][b] > 0 && mm[c][target] <= 0)
        covers = false;
    if (covers)
      return false;
  }
  return true;
}

} // namespace detail

struct ScanResult {
  std::uint64_t subsets_checked = 0;
  /// winning deletion sets as ascending 1-based voter numbers
  std::vector<std::vector<std::size_t>> winning;
};

/// Every deletion set of at most max_size voters, checked for making target
/// uncovered. Margins of each sub-election are the full-election margins
/// minus the ballots of the deleted voters.
inline ScanResult scan_deletions(const Election &e, std::size_t target,
                                 std::size_t max_size, unsigned threads = 0) {
  const std::size_t n = e.n(), m = e.m();
  const MarginMatrix base = margins(e);
  std::vector<MarginMatrix> ballot(n);
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<bool> only(n, false);
    only[v] = true;
    ballot[v] = margins(e, only);
  }
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());

  // sets are split over workers by their smallest voter; worker 0 also
  // owns the empty set
  auto work = [&](unsigned worker) {
    ScanResult r;
    MarginMatrix mm = base;
    std::vector<std::size_t> chosen;
    auto apply = [&](std::size_t v, int sign) {
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          mm[a][b] -= sign * ballot[v][a][b];
    };
    auto rec = [&](auto &&self, std::size_t next) -> void {
      ++r.subsets_checked;
      if (detail::uncovered_under(mm, target)) {
        std::vector<std::size_t> d;
        for (auto v : chosen)
          d.push_back(v + 1);
        r.winning.push_back(std::move(d));
      }
      if (chosen.size() == max_size)
        return;
      for (std::size_t v = next; v < n; ++v) {
        if (chosen.empty() && v % threads != worker)
          continue;
        chosen.push_back(v);
        apply(v, 1);
        self(self, v + 1);
        apply(v, -1);
        chosen.pop_back();
      }
    };
    if (worker == 0) {
      rec(rec, 0);
    } else {
      for (std::size_t v = worker; v < n; v += threads) {
        chosen.push_back(v);
        apply(v, 1);
        rec(rec, v + 1);
        apply(v, -1);
        chosen.pop_back();
      }
    }
    return r;
  };
  std::vector<std::future<ScanResult>> parts;
  for (unsigned w = 0; w < threads; ++w)
    parts.push_back(std::async(std::launch::async, work, w));
  ScanResult total;
  for (auto &p : parts) {
    ScanResult r = p.get();
    total.subsets_checked += r.subsets_checked;
    total.winning.insert(total.winning.end(), r.winning.begin(),
                         r.winning.end());
  }
  std::sort(total.winning.begin(), total.winning.end());
  return total;
}

// -- JSON ------------------------------------------------------------------------

inline nlohmann::json to_json(const X4CInstance &inst) {
  return {{"n", inst.n}, {"sets", inst.sets}};
}

inline X4CInstance x4c_from_json(const nlohmann::json &j) {
  X4CInstance inst;
  inst.n = j.at("n").get<std::size_t>();
  inst.sets = j.at("sets").get<std::vector<std::vector<std::size_t>>>();
  return inst;
}

inline nlohmann::json to_json(const OneInThreeInstance &inst) {
  return {{"vars", inst.num_vars}, {"clauses", inst.clauses}};
}

inline OneInThreeInstance one_in_three_from_json(const nlohmann::json &j) {
  OneInThreeInstance inst;
  inst.num_vars = j.at("vars").get<std::size_t>();
  for (const auto &c : j.at("clauses")) {
    const auto v = c.get<std::vector<std::size_t>>();
    if (v.size() != 3)
      throw instance_error("invalid 1-in-3 instance",
                           {"clause with " + std::to_string(v.size()) +
                            " literals, expected 3"});
    inst.clauses.push_back({v[0], v[1], v[2]});
  }
  return inst;
}

/// Sidecar describing a generated control instance.
inline nlohmann::json layout_json(const ControlInstance &ci) {
  const ReductionLayout &L = ci.layout;
  nlohmann::json groups = nlohmann::json::array();
  for (std::size_t v = 0; v < L.groups.size(); ++v)
    groups.push_back({{"voter", v + 1},
                      {"group", L.groups[v].group},
                      {"index", L.groups[v].index}});
  return {{"target", ci.election.alternatives[L.target]},
          {"budget", L.budget},
          {"n", L.n},
          {"t", L.t},
          {"voters", ci.election.n()},
          {"groups", std::move(groups)}};
}

} // namespace relctl
