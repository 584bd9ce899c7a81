/// @file   result.hpp
/// @brief  Answer to a control-by-deleting-voters question, shared by the
///         symbolic solver and the brute-force oracle

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relctl/election.hpp"

namespace relctl {

struct ControlResult {
  std::string target;
  Rule rule = Rule::condorcet;
  std::size_t n = 0;
  bool feasible = false;
  std::optional<std::size_t> min_deletions;
  BigInt num_optimal = 0;
  /// Optimal keep-sets as ascending 1-based voter numbers, lexicographic by
  /// membership vector (voter 1 first, absent before present).
  std::vector<std::vector<std::size_t>> keeps;
  bool truncated = false;
  std::string backend;

  [[nodiscard]] std::vector<std::size_t>
  deleted(const std::vector<std::size_t> &keep) const {
    std::vector<std::size_t> d;
    for (std::size_t v = 1; v <= n; ++v)
      if (!std::binary_search(keep.begin(), keep.end(), v))
        d.push_back(v);
    return d;
  }
};

/// Membership vector of a keep-set; its lexicographic order is the
/// enumeration order of solutions.
inline std::vector<bool> membership(const std::vector<std::size_t> &keep,
                                    std::size_t n) {
  std::vector<bool> bits(n, false);
  for (auto v : keep)
    bits[v - 1] = true;
  return bits;
}

inline nlohmann::json to_json(const ControlResult &r) {
  nlohmann::json j;
  j["target"] = r.target;
  j["rule"] = to_string(r.rule);
  j["feasible"] = r.feasible;
  j["min_deletions"] = r.min_deletions ? nlohmann::json(*r.min_deletions)
                                       : nlohmann::json(nullptr);
  j["num_optimal"] = r.num_optimal.str();
  nlohmann::json sols = nlohmann::json::array();
  for (const auto &k : r.keeps)
    sols.push_back({{"keep", k}, {"delete", r.deleted(k)}});
  j["solutions"] = std::move(sols);
  j["truncated"] = r.truncated;
  j["backend"] = r.backend;
  return j;
}

} // namespace relctl
