/// @file   election.hpp
/// @brief  Elections, their file format, and the dominance pipeline
///
/// Voters are numbered 1..n in file order after expanding multiplicities.
/// Internally voter i sits at index i-1 of `Election::voters` and at element
/// i-1 of the carrier N. Public functions taking voter sets use the 1-based
/// numbers.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "relctl/relation.hpp"

namespace relctl {

/// Bad election data or a reference to a voter or alternative that does not
/// exist.
class election_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed election text; `line()` is 1-based.
class parse_error : public election_error {
public:
  parse_error(std::size_t line, const std::string &msg)
      : election_error("line " + std::to_string(line) + ": " + msg),
        line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

enum class Rule { condorcet, uncovered };

inline std::string to_string(Rule r) {
  return r == Rule::condorcet ? "condorcet" : "uncovered";
}

inline Rule parse_rule(std::string_view s) {
  if (s == "condorcet")
    return Rule::condorcet;
  if (s == "uncovered")
    return Rule::uncovered;
  throw election_error("unknown rule '" + std::string(s) +
                       "' (expected condorcet or uncovered)");
}

/// A ballot. `tiers` lists alternative indices best first; a tier of size
/// greater than one is a tie. Strict ballots have one alternative per tier
/// and mention every alternative.
struct VoterOrder {
  std::vector<std::vector<std::size_t>> tiers;
  /// rank[a] is the tier of alternative a, or -1 when a is unranked
  std::vector<int> rank;

  static VoterOrder from_tiers(std::vector<std::vector<std::size_t>> tiers,
                               std::size_t m) {
    VoterOrder v;
    v.rank.assign(m, -1);
    for (std::size_t t = 0; t < tiers.size(); ++t)
      for (auto a : tiers[t])
        v.rank.at(a) = static_cast<int>(t);
    v.tiers = std::move(tiers);
    return v;
  }

  static VoterOrder linear(const std::vector<std::size_t> &ranking,
                           std::size_t m) {
    std::vector<std::vector<std::size_t>> tiers;
    for (auto a : ranking)
      tiers.push_back({a});
    return from_tiers(std::move(tiers), m);
  }

  /// Strictly prefers a to b.
  [[nodiscard]] bool prefers(std::size_t a, std::size_t b) const {
    return rank[a] >= 0 && rank[b] >= 0 && rank[a] < rank[b];
  }

  [[nodiscard]] bool is_linear() const {
    return std::all_of(tiers.begin(), tiers.end(),
                       [](const auto &t) { return t.size() == 1; }) &&
           std::none_of(rank.begin(), rank.end(), [](int r) { return r < 0; });
  }

  friend bool operator==(const VoterOrder &, const VoterOrder &) = default;
};

struct Election {
  std::vector<std::string> alternatives;
  std::vector<VoterOrder> voters;

  [[nodiscard]] std::size_t n() const noexcept { return voters.size(); }
  [[nodiscard]] std::size_t m() const noexcept { return alternatives.size(); }

  [[nodiscard]] std::optional<std::size_t>
  find(std::string_view name) const {
    for (std::size_t a = 0; a < alternatives.size(); ++a)
      if (alternatives[a] == name)
        return a;
    return std::nullopt;
  }

  [[nodiscard]] std::size_t index_of(std::string_view name) const {
    if (auto a = find(name))
      return *a;
    throw election_error("unknown alternative '" + std::string(name) + "'");
  }

  friend bool operator==(const Election &, const Election &) = default;
};

// -- file format -------------------------------------------------------------

enum class ParseMode {
  strict,
  /// ties written "{b c}" and omitted alternatives are accepted; the ballot
  /// is then an irreflexive transitive order, not necessarily linear
  permissive
};

namespace detail {

inline bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::vector<std::string> split_ballot(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty())
      out.push_back(std::move(cur));
    cur.clear();
  };
  for (char c : s) {
    if (c == '{' || c == '}') {
      flush();
      out.emplace_back(1, c);
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

} // namespace detail

inline Election parse_election(std::string_view text,
                               ParseMode mode = ParseMode::strict) {
  Election e;
  bool have_header = false;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string_view::npos)
      line = line.substr(0, h);
    line = detail::trim(line);
    if (line.empty())
      continue;

    if (!have_header) {
      constexpr std::string_view key = "alternatives:";
      if (line.substr(0, key.size()) != key)
        throw parse_error(lineno, "expected 'alternatives:' header");
      std::istringstream is{std::string(line.substr(key.size()))};
      for (std::string name; is >> name;) {
        if (!detail::valid_name(name))
          throw parse_error(lineno, "invalid alternative name '" + name + "'");
        if (e.find(name))
          throw parse_error(lineno, "duplicate alternative '" + name + "'");
        e.alternatives.push_back(name);
      }
      if (e.alternatives.empty())
        throw parse_error(lineno, "empty alternative list");
      have_header = true;
      continue;
    }

    long count = 1;
    if (auto c = line.find(':'); c != std::string_view::npos) {
      const std::string_view num = detail::trim(line.substr(0, c));
      if (num.empty() || !std::all_of(num.begin(), num.end(), [](char ch) {
            return ch == '-' || std::isdigit(static_cast<unsigned char>(ch));
          }))
        throw parse_error(lineno, "bad voter count '" + std::string(num) + "'");
      try {
        count = std::stol(std::string(num));
      } catch (const std::exception &) {
        throw parse_error(lineno, "bad voter count '" + std::string(num) + "'");
      }
      if (count < 1)
        throw parse_error(lineno, "voter count must be at least 1");
      line = line.substr(c + 1);
    }

    const std::size_t m = e.m();
    std::vector<std::vector<std::size_t>> tiers;
    std::vector<bool> seen(m, false);
    bool in_tie = false;
    for (const std::string &tok : detail::split_ballot(line)) {
      if (tok == "{" || tok == "}") {
        if (mode == ParseMode::strict)
          throw parse_error(lineno, "ties are only accepted in permissive mode");
        if ((tok == "{") == in_tie)
          throw parse_error(lineno, "unbalanced '" + tok + "'");
        in_tie = tok == "{";
        if (in_tie)
          tiers.emplace_back();
        else if (tiers.back().empty())
          throw parse_error(lineno, "empty tie group");
        continue;
      }
      auto a = e.find(tok);
      if (!a)
        throw parse_error(lineno, "unknown alternative '" + tok + "'");
      if (seen[*a])
        throw parse_error(lineno, "ranking is not a permutation: '" + tok +
                                      "' repeated");
      seen[*a] = true;
      if (in_tie)
        tiers.back().push_back(*a);
      else
        tiers.push_back({*a});
    }
    if (in_tie)
      throw parse_error(lineno, "unterminated tie group");
    if (mode == ParseMode::strict &&
        std::find(seen.begin(), seen.end(), false) != seen.end())
      throw parse_error(lineno, "ranking is not a permutation: " +
                                    std::to_string(tiers.size()) + " of " +
                                    std::to_string(m) + " alternatives");
    if (tiers.empty())
      throw parse_error(lineno, "empty ranking");
    const VoterOrder v = VoterOrder::from_tiers(std::move(tiers), m);
    for (long k = 0; k < count; ++k)
      e.voters.push_back(v);
  }
  if (!have_header)
    throw parse_error(lineno, "missing 'alternatives:' header");
  return e;
}

/// Canonical text form; runs of identical ballots collapse into one counted
/// line.
inline std::string write_election(const Election &e) {
  std::ostringstream os;
  os << "alternatives:";
  for (const auto &a : e.alternatives)
    os << ' ' << a;
  os << '\n';
  for (std::size_t i = 0; i < e.n();) {
    std::size_t j = i;
    while (j < e.n() && e.voters[j] == e.voters[i])
      ++j;
    if (j - i > 1)
      os << j - i << ": ";
    bool first = true;
    for (const auto &tier : e.voters[i].tiers) {
      if (!first)
        os << ' ';
      first = false;
      if (tier.size() > 1)
        os << '{';
      for (std::size_t k = 0; k < tier.size(); ++k)
        os << (k ? " " : "") << e.alternatives[tier[k]];
      if (tier.size() > 1)
        os << '}';
    }
    os << '\n';
    i = j;
  }
  return os.str();
}

// -- relational model ------------------------------------------------------------

/// N (voters), A (alternatives), A*A, and pow N for one election.
struct ElectionCarriers {
  Carrier N, A, A2, PN;

  explicit ElectionCarriers(const Election &e) {
    std::vector<std::string> vl;
    for (std::size_t i = 1; i <= e.n(); ++i)
      vl.push_back(std::to_string(i));
    N = Carrier::base("N", e.n(), std::move(vl));
    A = Carrier::base("A", e.m(), e.alternatives);
    A2 = Carrier::product(A, A);
    PN = Carrier::powerset(N);
  }
};

/// P : N <-> A*A with P_{i,(a,b)} iff voter i ranks a above b.
inline Relation build_P(Context &ctx, const Election &e) {
  const ElectionCarriers c(e);
  bdd::Manager &mgr = ctx.manager();
  std::vector<bdd::BoolFn> pair_fn(e.m() * e.m());
  for (std::size_t k = 0; k < pair_fn.size(); ++k)
    pair_fn[k] = ctx.element(c.A2, Slot::target, k);
  bdd::BoolFn f = mgr.constant(false);
  for (std::size_t i = 0; i < e.n(); ++i) {
    bdd::BoolFn row = mgr.constant(false);
    for (std::size_t a = 0; a < e.m(); ++a)
      for (std::size_t b = 0; b < e.m(); ++b)
        if (e.voters[i].prefers(a, b))
          row = row | pair_fn[a * e.m() + b];
    f = f | (ctx.element(c.N, Slot::source, i) & row);
  }
  return {ctx, c.N, c.A2, f};
}

using MarginMatrix = std::vector<std::vector<int>>;

/// margin(a, b) = #voters preferring a to b minus #voters preferring b to a,
/// counted over the voters i with keep[i] (0-based). Empty keep means all.
inline MarginMatrix margins(const Election &e,
                            const std::vector<bool> &keep = {}) {
  MarginMatrix mm(e.m(), std::vector<int>(e.m(), 0));
  for (std::size_t i = 0; i < e.n(); ++i) {
    if (!keep.empty() && !keep[i])
      continue;
    for (std::size_t a = 0; a < e.m(); ++a)
      for (std::size_t b = 0; b < e.m(); ++b)
        if (e.voters[i].prefers(a, b)) {
          ++mm[a][b];
          --mm[b][a];
        }
  }
  return mm;
}

struct DominanceView {
  Relation C;
  MarginMatrix margins;
};

/// C : A <-> A from P by the symmetric-quotient construction:
/// E = syq(P, eps), F = syq(P.[rho,pi], eps), C = rel((E & F.(Om & -Om^)).L).
inline Relation dominance_relation(const Relation &P) {
  Context &ctx = P.context();
  const Carrier &N = P.source();
  const Carrier &A2 = P.target();
  if (!A2.is_product() || !(A2.left() == A2.right()))
    throw type_error("dominance: P must have type N <-> A*A, got " +
                     P.type_string());
  const Relation e = eps(ctx, N);
  const Relation E = syq(P, e);
  const Relation swap = pairing(rho(ctx, A2), pi(ctx, A2));
  const Relation F = syq(P * swap, e);
  const Relation &strict = strict_omega(ctx, N);
  const Relation L = universal(ctx, Carrier::powerset(N), Carrier::unit());
  return rel_of((E & (F * strict)) * L);
}

inline DominanceView dominance(const Election &e, const Relation &P) {
  return {dominance_relation(P), margins(e)};
}

/// Alternatives that dominate every other one.
inline std::vector<std::uint64_t> condorcet_winners(const Relation &C) {
  Context &ctx = C.context();
  const Carrier &A = C.source();
  const Relation L = universal(ctx, A, Carrier::unit());
  return members(~((~C & ~identity(ctx, A)) * L));
}

/// G = C & -(C^ . -C): a covers b iff a dominates b and everything dominating
/// a also dominates b.
inline Relation covering(const Relation &C) {
  return C & ~(transpose(C) * ~C);
}

/// Alternatives not covered by any other: -(G^ . L).
inline std::vector<std::uint64_t> uncovered(const Relation &G) {
  Context &ctx = G.context();
  return members(~(transpose(G) * universal(ctx, G.source(), Carrier::unit())));
}

// -- deletion checks -----------------------------------------------------------

/// Outcome of removing a set of voters.
struct DeletionReport {
  bool wins = false;
  std::vector<bool> keep;
  MarginMatrix margins;
  Relation C, G;
  std::vector<std::uint64_t> uncovered;
};

/// 0-based keep mask from 1-based deleted voter numbers.
inline std::vector<bool> keep_mask(const Election &e,
                                   const std::vector<std::size_t> &deleted) {
  std::vector<bool> keep(e.n(), true);
  for (auto v : deleted) {
    if (v < 1 || v > e.n())
      throw election_error("unknown voter " + std::to_string(v) + " (voters are 1.." +
                           std::to_string(e.n()) + ")");
    keep[v - 1] = false;
  }
  return keep;
}

/// Re-checks a proposed deletion: margins of the sub-election are counted
/// directly, covering and the uncovered set are then derived relationally.
inline DeletionReport check_deletion(Context &ctx, const Election &e,
                                     const std::vector<std::size_t> &deleted,
                                     std::size_t target, Rule rule) {
  if (target >= e.m())
    throw election_error("unknown alternative index " + std::to_string(target));
  const ElectionCarriers c(e);
  DeletionReport r{false, keep_mask(e, deleted), {}, empty(ctx, c.A, c.A),
                   empty(ctx, c.A, c.A), {}};
  r.margins = margins(e, r.keep);
  bdd::BoolFn f = ctx.manager().constant(false);
  for (std::size_t a = 0; a < e.m(); ++a)
    for (std::size_t b = 0; b < e.m(); ++b)
      if (r.margins[a][b] > 0)
        f = f | (ctx.element(c.A, Slot::source, a) &
                 ctx.element(c.A, Slot::target, b));
  r.C = Relation(ctx, c.A, c.A, f);
  r.G = covering(r.C);
  r.uncovered = uncovered(r.G);
  if (rule == Rule::condorcet) {
    r.wins = true;
    for (std::size_t b = 0; b < e.m(); ++b)
      if (b != target && r.margins[target][b] <= 0)
        r.wins = false;
  } else {
    r.wins = std::find(r.uncovered.begin(), r.uncovered.end(), target) !=
             r.uncovered.end();
  }
  return r;
}

inline bool verify_deletion(const Election &e,
                            const std::vector<std::size_t> &deleted,
                            std::size_t target, Rule rule) {
  Context ctx;
  return check_deletion(ctx, e, deleted, target, rule).wins;
}

// -- JSON ------------------------------------------------------------------------

inline nlohmann::json matrix_json(const Relation &r) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::uint64_t i = 0; i < r.source().count(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::uint64_t j = 0; j < r.target().count(); ++j)
      row.push_back(contains(r, i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::json names_json(const Election &e,
                                 const std::vector<std::uint64_t> &idx) {
  nlohmann::json out = nlohmann::json::array();
  for (auto a : idx)
    out.push_back(e.alternatives[a]);
  return out;
}

/// {"winner", "dominance", "margins", "uncovered"} with rows and columns in
/// alternative order.
inline nlohmann::json dominance_json(const Election &e, const DominanceView &v,
                                     const std::vector<std::uint64_t> &unc) {
  const auto w = condorcet_winners(v.C);
  nlohmann::json j;
  j["winner"] = w.empty() ? nlohmann::json(nullptr)
                          : nlohmann::json(e.alternatives[w.front()]);
  j["dominance"] = matrix_json(v.C);
  j["margins"] = v.margins;
  j["uncovered"] = names_json(e, unc);
  return j;
}

} // namespace relctl
