/// @file   bdd.hpp
/// @brief  Reduced ordered binary decision diagrams
///
/// A `Manager` owns a canonical node store (unique table) and a memo table for
/// the recursive operations. Functions are handled through `BoolFn`, a thin
/// value handle pairing a manager with a node id. Variable order equals
/// variable index order and never changes; new variables may only be appended
/// below the existing ones.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace relctl {

/// Arbitrary-precision integer used for all model and entry counts.
using BigInt = boost::multiprecision::cpp_int;

} // namespace relctl

namespace relctl::bdd {

using node_id = std::uint32_t;
using var_t = std::uint32_t;

inline constexpr node_id false_id = 0;
inline constexpr node_id true_id = 1;
inline constexpr var_t terminal_var = std::numeric_limits<var_t>::max();

/// A run of `width` variables starting at `offset`, `stride` apart.
struct VarBlock {
  var_t offset = 0;
  var_t width = 0;
  var_t stride = 1;

  [[nodiscard]] constexpr var_t at(var_t i) const noexcept {
    return offset + i * stride;
  }
  [[nodiscard]] constexpr bool empty() const noexcept { return width == 0; }
};

class Manager;

/// Immutable handle to a Boolean function stored in a `Manager`.
class BoolFn {
public:
  BoolFn() = default;
  BoolFn(Manager *m, node_id id) noexcept : m_(m), id_(id) {}

  [[nodiscard]] node_id id() const noexcept { return id_; }
  [[nodiscard]] Manager *manager() const noexcept { return m_; }
  [[nodiscard]] bool valid() const noexcept { return m_ != nullptr; }
  [[nodiscard]] bool is_false() const noexcept { return id_ == false_id; }
  [[nodiscard]] bool is_true() const noexcept { return id_ == true_id; }
  [[nodiscard]] bool is_const() const noexcept { return id_ <= true_id; }

  friend bool operator==(const BoolFn &a, const BoolFn &b) noexcept {
    return a.m_ == b.m_ && a.id_ == b.id_;
  }

  inline BoolFn operator~() const;
  friend inline BoolFn operator&(const BoolFn &a, const BoolFn &b);
  friend inline BoolFn operator|(const BoolFn &a, const BoolFn &b);
  friend inline BoolFn operator^(const BoolFn &a, const BoolFn &b);

private:
  Manager *m_ = nullptr;
  node_id id_ = false_id;
};

enum class BinOp : std::uint8_t { conj, disj, exor };

class Manager {
public:
  explicit Manager(var_t variable_count = 0) : var_count_(variable_count) {
    nodes_.push_back({terminal_var, false_id, false_id});
    nodes_.push_back({terminal_var, true_id, true_id});
    unique_.assign(1u << 12, 0);
    cache_.assign(1u << 14, CacheEntry{});
  }

  Manager(const Manager &) = delete;
  Manager &operator=(const Manager &) = delete;
  Manager(Manager &&) = delete;
  Manager &operator=(Manager &&) = delete;

  [[nodiscard]] var_t variable_count() const noexcept { return var_count_; }

  /// Appends variables at the bottom of the order; existing functions are
  /// unaffected.
  void extend_variables(var_t count) {
    if (count > var_count_)
      var_count_ = count;
  }

  /// Total number of stored nodes including the two terminals.
  [[nodiscard]] std::size_t node_store_size() const noexcept {
    return nodes_.size();
  }

  // -- construction --------------------------------------------------------

  [[nodiscard]] BoolFn constant(bool b) { return {this, b ? true_id : false_id}; }

  [[nodiscard]] BoolFn var(var_t v) {
    check_var(v);
    return {this, mk(v, false_id, true_id)};
  }

  [[nodiscard]] BoolFn nvar(var_t v) {
    check_var(v);
    return {this, mk(v, true_id, false_id)};
  }

  /// Conjunction of positive literals over the given blocks.
  [[nodiscard]] BoolFn cube(std::span<const VarBlock> blocks) {
    auto vs = flatten(blocks);
    node_id r = true_id;
    for (auto it = vs.rbegin(); it != vs.rend(); ++it)
      r = mk(*it, false_id, r);
    return {this, r};
  }

  /// Conjunction of literals: variable `vars[i]` has value `values[i]`.
  [[nodiscard]] BoolFn minterm(std::span<const var_t> vars,
                               const std::vector<bool> &values) {
    if (vars.size() != values.size())
      throw std::invalid_argument("minterm: size mismatch");
    std::vector<std::pair<var_t, bool>> lits;
    lits.reserve(vars.size());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      check_var(vars[i]);
      lits.emplace_back(vars[i], values[i]);
    }
    std::sort(lits.begin(), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
      if (lits[i].first == lits[i - 1].first)
        throw std::invalid_argument("minterm: repeated variable");
    node_id r = true_id;
    for (auto it = lits.rbegin(); it != lits.rend(); ++it)
      r = it->second ? mk(it->first, false_id, r) : mk(it->first, r, false_id);
    return {this, r};
  }

  /// Builds a node directly. Requires `v` above the top variables of both
  /// children.
  [[nodiscard]] BoolFn make_node(var_t v, const BoolFn &lo, const BoolFn &hi) {
    own(lo);
    own(hi);
    check_var(v);
    if (top(lo.id()) <= v || top(hi.id()) <= v)
      throw std::invalid_argument("make_node: variable order violated");
    return {this, mk(v, lo.id(), hi.id())};
  }

  // -- Boolean operations --------------------------------------------------

  [[nodiscard]] BoolFn apply(BinOp op, const BoolFn &f, const BoolFn &g) {
    own(f);
    own(g);
    return {this, apply_rec(op, f.id(), g.id())};
  }

  [[nodiscard]] BoolFn negate(const BoolFn &f) {
    own(f);
    return {this, not_rec(f.id())};
  }

  [[nodiscard]] BoolFn ite(const BoolFn &f, const BoolFn &g, const BoolFn &h) {
    own(f);
    own(g);
    own(h);
    return {this, ite_rec(f.id(), g.id(), h.id())};
  }

  // -- quantification ------------------------------------------------------

  [[nodiscard]] BoolFn exists(const BoolFn &f, std::span<const VarBlock> vars) {
    own(f);
    BoolFn c = cube(vars);
    return {this, exists_rec(f.id(), c.id())};
  }
  [[nodiscard]] BoolFn exists(const BoolFn &f, const VarBlock &vars) {
    return exists(f, std::span<const VarBlock>(&vars, 1));
  }

  [[nodiscard]] BoolFn forall(const BoolFn &f, std::span<const VarBlock> vars) {
    return negate(exists(negate(f), vars));
  }

  /// `exists vars. f & g` without building the conjunction first.
  [[nodiscard]] BoolFn and_exists(const BoolFn &f, const BoolFn &g,
                                  std::span<const VarBlock> vars) {
    own(f);
    own(g);
    BoolFn c = cube(vars);
    return {this, and_exists_rec(f.id(), g.id(), c.id())};
  }

  // -- renaming ------------------------------------------------------------

  /// Substitutes variable `from.at(i)` by `to.at(i)`. Variables of `to` that
  /// are not in `from` must not occur in `f`.
  [[nodiscard]] BoolFn rename(const BoolFn &f, const VarBlock &from,
                              const VarBlock &to) {
    if (from.width != to.width)
      throw std::invalid_argument("rename: block width mismatch");
    std::vector<std::pair<var_t, var_t>> pairs;
    pairs.reserve(from.width);
    for (var_t i = 0; i < from.width; ++i)
      pairs.emplace_back(from.at(i), to.at(i));
    return substitute(f, pairs);
  }

  /// Simultaneous variable substitution. Each source variable appears at most
  /// once; a target variable already in the support of `f` must itself be a
  /// source.
  [[nodiscard]] BoolFn substitute(const BoolFn &f,
                                  std::span<const std::pair<var_t, var_t>> pairs) {
    own(f);
    std::unordered_map<var_t, var_t> map;
    std::unordered_set<var_t> targets;
    for (auto [a, b] : pairs) {
      check_var(a);
      check_var(b);
      if (!map.emplace(a, b).second)
        throw std::invalid_argument("rename: variable renamed twice");
      if (!targets.insert(b).second)
        throw std::invalid_argument("rename: two variables renamed onto one");
    }
    auto sup = support(f);
    std::vector<var_t> image;
    image.reserve(sup.size());
    for (var_t v : sup) {
      auto it = map.find(v);
      if (it == map.end()) {
        if (targets.contains(v))
          throw std::invalid_argument(
              "rename: target variable overlaps support of the function");
        image.push_back(v);
      } else {
        image.push_back(it->second);
      }
    }
    // Order-preserving renamings only relabel nodes.
    const bool monotone = std::is_sorted(image.begin(), image.end());
    std::vector<var_t> table(var_count_);
    for (var_t v = 0; v < var_count_; ++v)
      table[v] = v;
    for (auto [a, b] : map)
      table[a] = b;
    std::unordered_map<node_id, node_id> memo;
    node_id r = monotone ? relabel_rec(f.id(), table, memo)
                         : permute_rec(f.id(), table, memo);
    return {this, r};
  }

  // -- inspection ----------------------------------------------------------

  [[nodiscard]] std::vector<var_t> support(const BoolFn &f) {
    own(f);
    std::unordered_set<node_id> seen;
    std::unordered_set<var_t> vars;
    std::vector<node_id> stack{f.id()};
    while (!stack.empty()) {
      node_id n = stack.back();
      stack.pop_back();
      if (n <= true_id || !seen.insert(n).second)
        continue;
      vars.insert(nodes_[n].var);
      stack.push_back(nodes_[n].lo);
      stack.push_back(nodes_[n].hi);
    }
    std::vector<var_t> out(vars.begin(), vars.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Number of internal nodes reachable from `f`.
  [[nodiscard]] std::size_t node_count(const BoolFn &f) {
    own(f);
    std::unordered_set<node_id> seen;
    std::vector<node_id> stack{f.id()};
    while (!stack.empty()) {
      node_id n = stack.back();
      stack.pop_back();
      if (n <= true_id || !seen.insert(n).second)
        continue;
      stack.push_back(nodes_[n].lo);
      stack.push_back(nodes_[n].hi);
    }
    return seen.size();
  }

  /// Evaluates `f`; `value(v)` gives the value of variable `v`.
  [[nodiscard]] bool evaluate(const BoolFn &f,
                              const std::function<bool(var_t)> &value) const {
    if (f.manager() != this)
      throw std::invalid_argument("evaluate: manager mismatch");
    node_id n = f.id();
    while (n > true_id)
      n = value(nodes_[n].var) ? nodes_[n].hi : nodes_[n].lo;
    return n == true_id;
  }

  /// Number of assignments to exactly the listed variables that satisfy `f`.
  [[nodiscard]] BigInt sat_count(const BoolFn &f,
                                 std::span<const VarBlock> support_blocks) {
    own(f);
    auto vars = flatten(support_blocks);
    auto level = level_map(f, vars);
    const std::size_t k = vars.size();
    std::unordered_map<node_id, BigInt> memo;
    auto lvl = [&](node_id n) -> std::size_t {
      return n <= true_id ? k : level.at(nodes_[n].var);
    };
    std::function<BigInt(node_id)> rec = [&](node_id n) -> BigInt {
      if (n == false_id)
        return 0;
      if (n == true_id)
        return 1;
      if (auto it = memo.find(n); it != memo.end())
        return it->second;
      const Node nd = nodes_[n];
      const std::size_t l = lvl(n);
      BigInt lo = rec(nd.lo) << static_cast<unsigned>(lvl(nd.lo) - l - 1);
      BigInt hi = rec(nd.hi) << static_cast<unsigned>(lvl(nd.hi) - l - 1);
      BigInt r = lo + hi;
      memo.emplace(n, r);
      return r;
    };
    return rec(f.id()) << static_cast<unsigned>(lvl(f.id()));
  }
  [[nodiscard]] BigInt sat_count(const BoolFn &f, const VarBlock &block) {
    return sat_count(f, std::span<const VarBlock>(&block, 1));
  }

  /// Calls `visit` for satisfying assignments over the listed variables in
  /// ascending lexicographic order (variables in ascending index order, 0
  /// before 1). Stops after `limit` models or when `visit` returns false.
  /// Values are reported in ascending variable order.
  std::size_t for_each_model(
      const BoolFn &f, std::span<const VarBlock> support_blocks,
      std::size_t limit,
      const std::function<bool(const std::vector<bool> &)> &visit) {
    own(f);
    auto vars = flatten(support_blocks);
    (void)level_map(f, vars);
    std::vector<bool> current(vars.size(), false);
    std::size_t produced = 0;
    bool stop = false;
    std::function<void(node_id, std::size_t)> rec = [&](node_id n,
                                                         std::size_t k) {
      if (stop || n == false_id)
        return;
      if (k == vars.size()) {
        ++produced;
        if (!visit(current) || produced >= limit)
          stop = true;
        return;
      }
      const Node nd = nodes_[n];
      if (n > true_id && nd.var == vars[k]) {
        current[k] = false;
        rec(nd.lo, k + 1);
        current[k] = true;
        rec(nd.hi, k + 1);
      } else {
        current[k] = false;
        rec(n, k + 1);
        current[k] = true;
        rec(n, k + 1);
      }
      current[k] = false;
    };
    if (limit > 0)
      rec(f.id(), 0);
    return produced;
  }

  [[nodiscard]] std::vector<std::vector<bool>>
  enumerate_models(const BoolFn &f, std::span<const VarBlock> support_blocks,
                   std::size_t limit) {
    std::vector<std::vector<bool>> out;
    for_each_model(f, support_blocks, limit, [&](const std::vector<bool> &m) {
      out.push_back(m);
      return true;
    });
    return out;
  }

  /// Lexicographically least satisfying assignment, if any.
  [[nodiscard]] std::optional<std::vector<bool>>
  pick_model(const BoolFn &f, std::span<const VarBlock> support_blocks) {
    auto models = enumerate_models(f, support_blocks, 1);
    if (models.empty())
      return std::nullopt;
    return std::move(models.front());
  }

  /// Graphviz rendering of the diagram rooted at `f`.
  void write_dot(std::ostream &os, const BoolFn &f) {
    own(f);
    os << "digraph bdd {\n";
    os << "  f0 [shape=box,label=\"0\"];\n  f1 [shape=box,label=\"1\"];\n";
    std::unordered_set<node_id> seen;
    std::vector<node_id> stack{f.id()};
    while (!stack.empty()) {
      node_id n = stack.back();
      stack.pop_back();
      if (n <= true_id || !seen.insert(n).second)
        continue;
      const Node nd = nodes_[n];
      os << "  f" << n << " [label=\"x" << nd.var << "\"];\n";
      os << "  f" << n << " -> f" << nd.lo << " [style=dashed];\n";
      os << "  f" << n << " -> f" << nd.hi << ";\n";
      stack.push_back(nd.lo);
      stack.push_back(nd.hi);
    }
    os << "}\n";
  }

  /// Top variable of `f`, `terminal_var` for constants.
  [[nodiscard]] var_t top_var(const BoolFn &f) const noexcept {
    return top(f.id());
  }
  [[nodiscard]] BoolFn low(const BoolFn &f) const noexcept {
    return {const_cast<Manager *>(this), nodes_[f.id()].lo};
  }
  [[nodiscard]] BoolFn high(const BoolFn &f) const noexcept {
    return {const_cast<Manager *>(this), nodes_[f.id()].hi};
  }

private:
  struct Node {
    var_t var;
    node_id lo;
    node_id hi;
  };

  enum class OpCode : std::uint32_t {
    none = 0,
    conj,
    disj,
    exor,
    negate,
    ite,
    exists,
    and_exists,
  };

  struct CacheEntry {
    OpCode op = OpCode::none;
    node_id a = 0, b = 0, c = 0;
    node_id result = 0;
  };

  var_t var_count_;
  std::vector<Node> nodes_;
  std::vector<node_id> unique_; // open addressing, 0 marks an empty bucket
  std::size_t unique_used_ = 0;
  std::vector<CacheEntry> cache_;

  void check_var(var_t v) const {
    if (v >= var_count_)
      throw std::out_of_range("variable index " + std::to_string(v) +
                              " exceeds variable count " +
                              std::to_string(var_count_));
  }

  void own(const BoolFn &f) const {
    if (f.manager() != this)
      throw std::invalid_argument("bdd: function belongs to another manager");
  }

  [[nodiscard]] var_t top(node_id n) const noexcept { return nodes_[n].var; }

  static std::size_t hash3(std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) noexcept {
    std::uint64_t h = a * 0x9e3779b97f4a7c15ULL;
    h ^= b + 0x7f4a7c159e3779b9ULL + (h << 6) + (h >> 2);
    h ^= c * 0xc2b2ae3d27d4eb4fULL + (h << 7) + (h >> 3);
    h ^= h >> 29;
    return static_cast<std::size_t>(h);
  }

  node_id mk(var_t v, node_id lo, node_id hi) {
    if (lo == hi)
      return lo;
    std::size_t mask = unique_.size() - 1;
    std::size_t i = hash3(v, lo, hi) & mask;
    while (node_id n = unique_[i]) {
      const Node &nd = nodes_[n];
      if (nd.var == v && nd.lo == lo && nd.hi == hi)
        return n;
      i = (i + 1) & mask;
    }
    if (nodes_.size() >= std::numeric_limits<node_id>::max() - 1)
      throw std::length_error("bdd: node store exhausted");
    const auto id = static_cast<node_id>(nodes_.size());
    nodes_.push_back({v, lo, hi});
    unique_[i] = id;
    if (++unique_used_ * 2 > unique_.size())
      grow_unique();
    if (nodes_.size() > cache_.size() * 2 && cache_.size() < (1u << 22))
      cache_.assign(cache_.size() * 2, CacheEntry{});
    return id;
  }

  void grow_unique() {
    std::vector<node_id> next(unique_.size() * 2, 0);
    std::size_t mask = next.size() - 1;
    for (node_id n : unique_) {
      if (!n)
        continue;
      const Node &nd = nodes_[n];
      std::size_t i = hash3(nd.var, nd.lo, nd.hi) & mask;
      while (next[i])
        i = (i + 1) & mask;
      next[i] = n;
    }
    unique_.swap(next);
  }

  CacheEntry &slot(OpCode op, node_id a, node_id b, node_id c) {
    std::size_t h = hash3((static_cast<std::uint64_t>(op) << 32) | a, b, c);
    return cache_[h & (cache_.size() - 1)];
  }

  std::optional<node_id> lookup(OpCode op, node_id a, node_id b, node_id c) {
    const CacheEntry &e = slot(op, a, b, c);
    if (e.op == op && e.a == a && e.b == b && e.c == c)
      return e.result;
    return std::nullopt;
  }

  void store(OpCode op, node_id a, node_id b, node_id c, node_id r) {
    slot(op, a, b, c) = CacheEntry{op, a, b, c, r};
  }

  node_id apply_rec(BinOp op, node_id f, node_id g) {
    switch (op) {
    case BinOp::conj:
      if (f == false_id || g == false_id)
        return false_id;
      if (f == true_id)
        return g;
      if (g == true_id || f == g)
        return f;
      break;
    case BinOp::disj:
      if (f == true_id || g == true_id)
        return true_id;
      if (f == false_id)
        return g;
      if (g == false_id || f == g)
        return f;
      break;
    case BinOp::exor:
      if (f == g)
        return false_id;
      if (f == false_id)
        return g;
      if (g == false_id)
        return f;
      if (f == true_id)
        return not_rec(g);
      if (g == true_id)
        return not_rec(f);
      break;
    }
    if (f > g)
      std::swap(f, g);
    const OpCode code = op == BinOp::conj   ? OpCode::conj
                        : op == BinOp::disj ? OpCode::disj
                                            : OpCode::exor;
    if (auto r = lookup(code, f, g, 0))
      return *r;
    const Node nf = nodes_[f];
    const Node ng = nodes_[g];
    const var_t v = std::min(nf.var, ng.var);
    const node_id f0 = nf.var == v ? nf.lo : f, f1 = nf.var == v ? nf.hi : f;
    const node_id g0 = ng.var == v ? ng.lo : g, g1 = ng.var == v ? ng.hi : g;
    const node_id lo = apply_rec(op, f0, g0);
    const node_id hi = apply_rec(op, f1, g1);
    const node_id r = mk(v, lo, hi);
    store(code, f, g, 0, r);
    return r;
  }

  node_id not_rec(node_id f) {
    if (f <= true_id)
      return f ^ 1u;
    if (auto r = lookup(OpCode::negate, f, 0, 0))
      return *r;
    const Node nf = nodes_[f];
    const node_id r = mk(nf.var, not_rec(nf.lo), not_rec(nf.hi));
    store(OpCode::negate, f, 0, 0, r);
    return r;
  }

  node_id ite_rec(node_id f, node_id g, node_id h) {
    if (f == true_id)
      return g;
    if (f == false_id)
      return h;
    if (g == h)
      return g;
    if (g == true_id && h == false_id)
      return f;
    if (g == false_id && h == true_id)
      return not_rec(f);
    if (g == true_id)
      return apply_rec(BinOp::disj, f, h);
    if (h == false_id)
      return apply_rec(BinOp::conj, f, g);
    if (auto r = lookup(OpCode::ite, f, g, h))
      return *r;
    const Node nf = nodes_[f], ng = nodes_[g], nh = nodes_[h];
    const var_t v = std::min({nf.var, ng.var, nh.var});
    auto lo_of = [v](node_id n, const Node &nd) { return nd.var == v ? nd.lo : n; };
    auto hi_of = [v](node_id n, const Node &nd) { return nd.var == v ? nd.hi : n; };
    const node_id lo = ite_rec(lo_of(f, nf), lo_of(g, ng), lo_of(h, nh));
    const node_id hi = ite_rec(hi_of(f, nf), hi_of(g, ng), hi_of(h, nh));
    const node_id r = mk(v, lo, hi);
    store(OpCode::ite, f, g, h, r);
    return r;
  }

  node_id exists_rec(node_id f, node_id cube) {
    if (f <= true_id)
      return f;
    const var_t v = nodes_[f].var;
    while (cube != true_id && nodes_[cube].var < v)
      cube = nodes_[cube].hi;
    if (cube == true_id)
      return f;
    if (auto r = lookup(OpCode::exists, f, cube, 0))
      return *r;
    const Node nf = nodes_[f];
    node_id r;
    if (nodes_[cube].var == v) {
      const node_id rest = nodes_[cube].hi;
      const node_id lo = exists_rec(nf.lo, rest);
      r = lo == true_id ? true_id
                        : apply_rec(BinOp::disj, lo, exists_rec(nf.hi, rest));
    } else {
      const node_id lo = exists_rec(nf.lo, cube);
      const node_id hi = exists_rec(nf.hi, cube);
      r = mk(v, lo, hi);
    }
    store(OpCode::exists, f, cube, 0, r);
    return r;
  }

  node_id and_exists_rec(node_id f, node_id g, node_id cube) {
    if (f == false_id || g == false_id)
      return false_id;
    if (f == true_id && g == true_id)
      return true_id;
    if (f == true_id)
      return exists_rec(g, cube);
    if (g == true_id || f == g)
      return exists_rec(f, cube);
    if (f > g)
      std::swap(f, g);
    const Node nf = nodes_[f];
    const Node ng = nodes_[g];
    const var_t v = std::min(nf.var, ng.var);
    while (cube != true_id && nodes_[cube].var < v)
      cube = nodes_[cube].hi;
    if (cube == true_id)
      return apply_rec(BinOp::conj, f, g);
    if (auto r = lookup(OpCode::and_exists, f, g, cube))
      return *r;
    const node_id f0 = nf.var == v ? nf.lo : f, f1 = nf.var == v ? nf.hi : f;
    const node_id g0 = ng.var == v ? ng.lo : g, g1 = ng.var == v ? ng.hi : g;
    node_id r;
    if (nodes_[cube].var == v) {
      const node_id rest = nodes_[cube].hi;
      const node_id lo = and_exists_rec(f0, g0, rest);
      r = lo == true_id ? true_id
                        : apply_rec(BinOp::disj, lo, and_exists_rec(f1, g1, rest));
    } else {
      r = mk(v, and_exists_rec(f0, g0, cube), and_exists_rec(f1, g1, cube));
    }
    store(OpCode::and_exists, f, g, cube, r);
    return r;
  }

  node_id relabel_rec(node_id f, const std::vector<var_t> &table,
                      std::unordered_map<node_id, node_id> &memo) {
    if (f <= true_id)
      return f;
    if (auto it = memo.find(f); it != memo.end())
      return it->second;
    const Node nf = nodes_[f];
    const node_id lo = relabel_rec(nf.lo, table, memo);
    const node_id hi = relabel_rec(nf.hi, table, memo);
    const node_id r = mk(table[nf.var], lo, hi);
    memo.emplace(f, r);
    return r;
  }

  node_id permute_rec(node_id f, const std::vector<var_t> &table,
                      std::unordered_map<node_id, node_id> &memo) {
    if (f <= true_id)
      return f;
    if (auto it = memo.find(f); it != memo.end())
      return it->second;
    const Node nf = nodes_[f];
    const node_id lo = permute_rec(nf.lo, table, memo);
    const node_id hi = permute_rec(nf.hi, table, memo);
    const node_id x = mk(table[nf.var], false_id, true_id);
    const node_id r = ite_rec(x, hi, lo);
    memo.emplace(f, r);
    return r;
  }

  std::vector<var_t> flatten(std::span<const VarBlock> blocks) const {
    std::vector<var_t> vs;
    for (const auto &b : blocks)
      for (var_t i = 0; i < b.width; ++i) {
        check_var(b.at(i));
        vs.push_back(b.at(i));
      }
    std::sort(vs.begin(), vs.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
      throw std::invalid_argument("bdd: variable listed twice in support");
    return vs;
  }

  std::unordered_map<var_t, std::size_t>
  level_map(const BoolFn &f, const std::vector<var_t> &vars) {
    std::unordered_map<var_t, std::size_t> level;
    for (std::size_t i = 0; i < vars.size(); ++i)
      level.emplace(vars[i], i);
    for (var_t v : support(f))
      if (!level.contains(v))
        throw std::invalid_argument("bdd: support list misses variable x" +
                                    std::to_string(v));
    return level;
  }
};

inline BoolFn BoolFn::operator~() const { return m_->negate(*this); }

inline BoolFn operator&(const BoolFn &a, const BoolFn &b) {
  return a.m_->apply(BinOp::conj, a, b);
}
inline BoolFn operator|(const BoolFn &a, const BoolFn &b) {
  return a.m_->apply(BinOp::disj, a, b);
}
inline BoolFn operator^(const BoolFn &a, const BoolFn &b) {
  return a.m_->apply(BinOp::exor, a, b);
}

} // namespace relctl::bdd
