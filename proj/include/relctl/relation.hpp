/// @file   relation.hpp
/// @brief  Typed heterogeneous relations over decision diagrams
///
/// A relation R : X <-> Y is stored as the characteristic function of its
/// entries over the encoding bits of X (source) and Y (target). All relations
/// of one `Context` share a single manager and a fixed variable layout: bit
/// position p of a carrier placed in slot s is variable 3p + s, with slot 0
/// for sources, slot 1 for targets and slot 2 for the hidden middle carrier
/// of a composition. Bits of equal position thus sit next to each other,
/// which keeps equality-like relations (identity, membership, size
/// comparison) linear in the carrier width.

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relctl/bdd.hpp"
#include "relctl/carrier.hpp"

namespace relctl {

/// Raised when operands of a relation operation have incompatible types.
class type_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

enum class Slot : bdd::var_t { source = 0, target = 1, middle = 2 };

class Relation;

/// Owns the decision-diagram manager and per-carrier caches shared by all
/// relations built in it. Relations keep a pointer to their context, so the
/// context must outlive them and must not move.
class Context {
public:
  static constexpr bdd::var_t slot_count = 3;

  Context() = default;
  Context(const Context &) = delete;
  Context &operator=(const Context &) = delete;

  [[nodiscard]] bdd::Manager &manager() noexcept { return mgr_; }

  [[nodiscard]] bdd::var_t var(Slot s, std::size_t pos) {
    const auto v = static_cast<bdd::var_t>(pos * slot_count +
                                           static_cast<bdd::var_t>(s));
    mgr_.extend_variables(v + 1);
    return v;
  }

  [[nodiscard]] bdd::VarBlock block(Slot s, std::size_t offset,
                                    std::size_t width) {
    if (width > 0)
      (void)var(s, offset + width - 1);
    return {static_cast<bdd::var_t>(offset * slot_count +
                                    static_cast<bdd::var_t>(s)),
            static_cast<bdd::var_t>(width), slot_count};
  }

  /// Predicate "bits encode an element of c" for c placed at `offset`.
  [[nodiscard]] bdd::BoolFn care(const Carrier &c, Slot s,
                                 std::size_t offset = 0) {
    if (!c.has_gaps())
      return mgr_.constant(true);
    std::string key = c.key() + "@" +
                      std::to_string(static_cast<unsigned>(s)) + ":" +
                      std::to_string(offset);
    if (auto it = care_.find(key); it != care_.end())
      return it->second;
    bdd::BoolFn r = build_care(c, s, offset);
    care_.emplace(std::move(key), r);
    return r;
  }

  /// Cube selecting element `index` of c placed at `offset`.
  [[nodiscard]] bdd::BoolFn element(const Carrier &c, Slot s,
                                    std::uint64_t index,
                                    std::size_t offset = 0) {
    const auto bits = c.encode(index);
    std::vector<bdd::var_t> vars(bits.size());
    for (std::size_t j = 0; j < bits.size(); ++j)
      vars[j] = var(s, offset + j);
    return mgr_.minterm(vars, bits);
  }

  /// Bitwise equality of two equally wide bit runs.
  [[nodiscard]] bdd::BoolFn equal_bits(Slot a, std::size_t off_a, Slot b,
                                       std::size_t off_b, std::size_t width) {
    bdd::BoolFn r = mgr_.constant(true);
    for (std::size_t j = width; j-- > 0;) {
      bdd::BoolFn x = mgr_.var(var(a, off_a + j));
      bdd::BoolFn y = mgr_.var(var(b, off_b + j));
      r = r & ~(x ^ y);
    }
    return r;
  }

  /// Memo for derived relations keyed by a caller-chosen string (for example
  /// the strict size comparison on a powerset).
  [[nodiscard]] const Relation *
  cached(const std::string &key) const;
  const Relation &remember(const std::string &key, Relation r);

private:
  bdd::Manager mgr_;
  std::unordered_map<std::string, bdd::BoolFn> care_;
  std::unordered_map<std::string, std::shared_ptr<const Relation>> derived_;

  bdd::BoolFn build_care(const Carrier &c, Slot s, std::size_t offset) {
    switch (c.kind()) {
    case Carrier::Kind::unit:
    case Carrier::Kind::powerset:
      return mgr_.constant(true);
    case Carrier::Kind::product:
      return care(c.left(), s, offset) &
             care(c.right(), s, offset + c.left().width());
    case Carrier::Kind::base:
      break;
    }
    // x < m over w bits, most significant bit first
    const std::uint64_t m = c.count();
    const std::size_t w = c.width();
    if (m == 0)
      return mgr_.constant(false);
    bdd::BoolFn lt = mgr_.constant(false);
    for (std::size_t j = w; j-- > 0;) {
      const bool mbit = (m >> (w - 1 - j)) & 1u;
      bdd::BoolFn x = mgr_.var(var(s, offset + j));
      lt = mbit ? mgr_.ite(x, lt, mgr_.constant(true))
                : mgr_.ite(x, mgr_.constant(false), lt);
    }
    return lt;
  }
};

/// Immutable relation `source <-> target`.
class Relation {
public:
  Relation(Context &ctx, Carrier source, Carrier target, bdd::BoolFn fn)
      : ctx_(&ctx), source_(std::move(source)), target_(std::move(target)),
        fn_(fn) {}

  [[nodiscard]] Context &context() const noexcept { return *ctx_; }
  [[nodiscard]] const Carrier &source() const noexcept { return source_; }
  [[nodiscard]] const Carrier &target() const noexcept { return target_; }
  [[nodiscard]] const bdd::BoolFn &fn() const noexcept { return fn_; }

  [[nodiscard]] bool is_vector() const noexcept { return target_.is_unit(); }
  [[nodiscard]] bool is_empty() const noexcept { return fn_.is_false(); }

  [[nodiscard]] std::string type_string() const {
    return source_.to_string() + " <-> " + target_.to_string();
  }

  /// Same type and same entries. Decision diagrams are canonical, so this is
  /// a handle comparison.
  friend bool operator==(const Relation &a, const Relation &b) noexcept {
    return a.ctx_ == b.ctx_ && a.source_ == b.source_ &&
           a.target_ == b.target_ && a.fn_ == b.fn_;
  }

  [[nodiscard]] bdd::VarBlock source_block() const {
    return ctx_->block(Slot::source, 0, source_.width());
  }
  [[nodiscard]] bdd::VarBlock target_block() const {
    return ctx_->block(Slot::target, 0, target_.width());
  }

private:
  Context *ctx_;
  Carrier source_;
  Carrier target_;
  bdd::BoolFn fn_;
};

inline const Relation *Context::cached(const std::string &key) const {
  auto it = derived_.find(key);
  return it == derived_.end() ? nullptr : it->second.get();
}

inline const Relation &Context::remember(const std::string &key, Relation r) {
  auto [it, inserted] =
      derived_.emplace(key, std::make_shared<const Relation>(std::move(r)));
  return *it->second;
}

namespace detail {

inline void same_context(const Relation &a, const Relation &b) {
  if (&a.context() != &b.context())
    throw std::invalid_argument("relations belong to different contexts");
}

inline void same_type(const char *op, const Relation &a, const Relation &b) {
  same_context(a, b);
  if (!(a.source() == b.source()) || !(a.target() == b.target()))
    throw type_error(std::string(op) + ": type mismatch between " +
                     a.type_string() + " and " + b.type_string());
}

inline bdd::BoolFn care_pair(Context &ctx, const Carrier &s, const Carrier &t) {
  return ctx.care(s, Slot::source) & ctx.care(t, Slot::target);
}

/// Moves bits [from_off, from_off + width) of slot `from` to
/// [to_off, to_off + width) of slot `to`.
struct Move {
  Slot from;
  std::size_t from_off;
  Slot to;
  std::size_t to_off;
  std::size_t width;
};

inline bdd::BoolFn move_bits(Context &ctx, const bdd::BoolFn &f,
                             std::initializer_list<Move> moves) {
  std::vector<std::pair<bdd::var_t, bdd::var_t>> pairs;
  for (const Move &m : moves)
    for (std::size_t j = 0; j < m.width; ++j) {
      auto a = ctx.var(m.from, m.from_off + j);
      auto b = ctx.var(m.to, m.to_off + j);
      if (a != b)
        pairs.emplace_back(a, b);
    }
  if (pairs.empty())
    return f;
  return ctx.manager().substitute(f, pairs);
}

} // namespace detail

// -- constants ---------------------------------------------------------------

/// O : source <-> target.
inline Relation empty(Context &ctx, const Carrier &source,
                      const Carrier &target) {
  return {ctx, source, target, ctx.manager().constant(false)};
}

/// L : source <-> target (every pair of elements).
inline Relation universal(Context &ctx, const Carrier &source,
                          const Carrier &target) {
  return {ctx, source, target, detail::care_pair(ctx, source, target)};
}

/// I : c <-> c.
inline Relation identity(Context &ctx, const Carrier &c) {
  bdd::BoolFn eq = ctx.equal_bits(Slot::source, 0, Slot::target, 0, c.width());
  return {ctx, c, c, eq & detail::care_pair(ctx, c, c)};
}

inline Relation identity(Context &ctx, const Carrier &source,
                         const Carrier &target) {
  if (!(source == target))
    throw type_error("identity needs equal carriers, got " +
                     source.to_string() + " and " + target.to_string());
  return identity(ctx, source);
}

// -- Boolean lattice ---------------------------------------------------------

/// Complement relative to the entries of L.
inline Relation complement(const Relation &r) {
  Context &ctx = r.context();
  return {ctx, r.source(), r.target(),
          ~r.fn() & detail::care_pair(ctx, r.source(), r.target())};
}

inline Relation unite(const Relation &a, const Relation &b) {
  detail::same_type("union", a, b);
  return {a.context(), a.source(), a.target(), a.fn() | b.fn()};
}

inline Relation intersect(const Relation &a, const Relation &b) {
  detail::same_type("intersection", a, b);
  return {a.context(), a.source(), a.target(), a.fn() & b.fn()};
}

inline Relation operator~(const Relation &r) { return complement(r); }
inline Relation operator|(const Relation &a, const Relation &b) {
  return unite(a, b);
}
inline Relation operator&(const Relation &a, const Relation &b) {
  return intersect(a, b);
}

inline bool is_included(const Relation &a, const Relation &b) {
  detail::same_type("inclusion", a, b);
  return (a.fn() & ~b.fn()).is_false();
}

inline bool is_equal(const Relation &a, const Relation &b) {
  detail::same_type("equality", a, b);
  return a.fn() == b.fn();
}

// -- transposition and composition ------------------------------------------

inline Relation transpose(const Relation &r) {
  Context &ctx = r.context();
  const std::size_t ws = r.source().width(), wt = r.target().width();
  bdd::BoolFn f = detail::move_bits(
      ctx, r.fn(),
      {{Slot::source, 0, Slot::target, 0, ws},
       {Slot::target, 0, Slot::source, 0, wt}});
  return {ctx, r.target(), r.source(), f};
}

/// R . S with R : X <-> Y and S : Y <-> Z.
///
/// Placed as X (slot 0), Y (slot 1), Z (slot 2) every bit keeps its relative
/// order, so only order-preserving relabelings are needed around the
/// quantification of Y.
inline Relation compose(const Relation &r, const Relation &s) {
  detail::same_context(r, s);
  if (!(r.target() == s.source()))
    throw type_error("composition: target of " + r.type_string() +
                     " differs from source of " + s.type_string());
  Context &ctx = r.context();
  const std::size_t wm = r.target().width(), wt = s.target().width();
  bdd::BoolFn sf = detail::move_bits(
      ctx, s.fn(),
      {{Slot::source, 0, Slot::target, 0, wm},
       {Slot::target, 0, Slot::middle, 0, wt}});
  bdd::VarBlock mid = ctx.block(Slot::target, 0, wm);
  bdd::BoolFn joined = ctx.manager().and_exists(
      r.fn(), sf, std::span<const bdd::VarBlock>(&mid, 1));
  bdd::BoolFn out =
      detail::move_bits(ctx, joined, {{Slot::middle, 0, Slot::target, 0, wt}});
  return {ctx, r.source(), s.target(), out};
}

inline Relation operator*(const Relation &r, const Relation &s) {
  return compose(r, s);
}

/// Symmetric quotient: syq(R, S)_{y,z} iff R_{x,y} <-> S_{x,z} for all x.
inline Relation syq(const Relation &r, const Relation &s) {
  detail::same_context(r, s);
  if (!(r.source() == s.source()))
    throw type_error("syq: sources differ in " + r.type_string() + " and " +
                     s.type_string());
  const Relation rt = transpose(r);
  return ~(rt * ~s) & ~(transpose(~r) * s);
}

// -- products ----------------------------------------------------------------

namespace detail {
inline void require_product(const char *op, const Carrier &c) {
  if (!c.is_product())
    throw type_error(std::string(op) + " needs a product carrier, got " +
                     c.to_string());
}
} // namespace detail

/// First projection pi : X*Y <-> X.
inline Relation pi(Context &ctx, const Carrier &prod) {
  detail::require_product("pi", prod);
  const Carrier x = prod.left();
  bdd::BoolFn f = ctx.equal_bits(Slot::source, 0, Slot::target, 0, x.width());
  return {ctx, prod, x, f & detail::care_pair(ctx, prod, x)};
}

/// Second projection rho : X*Y <-> Y.
inline Relation rho(Context &ctx, const Carrier &prod) {
  detail::require_product("rho", prod);
  const Carrier x = prod.left(), y = prod.right();
  bdd::BoolFn f =
      ctx.equal_bits(Slot::source, x.width(), Slot::target, 0, y.width());
  return {ctx, prod, y, f & detail::care_pair(ctx, prod, y)};
}

/// Pairing [R, S] : Z <-> X*Y of R : Z <-> X and S : Z <-> Y.
inline Relation pairing(const Relation &r, const Relation &s) {
  detail::same_context(r, s);
  if (!(r.source() == s.source()))
    throw type_error("pairing: sources differ in " + r.type_string() + " and " +
                     s.type_string());
  Context &ctx = r.context();
  const std::size_t wx = r.target().width(), wy = s.target().width();
  bdd::BoolFn sf = detail::move_bits(ctx, s.fn(),
                                     {{Slot::target, 0, Slot::target, wx, wy}});
  return {ctx, r.source(), Carrier::product(r.target(), s.target()),
          r.fn() & sf};
}

/// Exchange [rho, pi] : X*X <-> X*X relating (a, b) with (b, a).
inline Relation exchange(Context &ctx, const Carrier &square) {
  detail::require_product("exchange", square);
  if (!(square.left() == square.right()))
    throw type_error("exchange needs a product X*X, got " + square.to_string());
  return pairing(rho(ctx, square), pi(ctx, square));
}

/// vec(R) : X*Y <-> unit with vec(R)_{(x,y)} iff R_{x,y}.
inline Relation vec(const Relation &r) {
  Context &ctx = r.context();
  const std::size_t ws = r.source().width(), wt = r.target().width();
  bdd::BoolFn f = detail::move_bits(ctx, r.fn(),
                                    {{Slot::target, 0, Slot::source, ws, wt}});
  return {ctx, Carrier::product(r.source(), r.target()), Carrier::unit(), f};
}

/// rel(v) : X <-> Y of a vector v : X*Y <-> unit.
inline Relation rel_of(const Relation &v) {
  if (!v.is_vector())
    throw type_error("rel: argument must be a vector, got " + v.type_string());
  detail::require_product("rel", v.source());
  Context &ctx = v.context();
  const Carrier x = v.source().left(), y = v.source().right();
  bdd::BoolFn f = detail::move_bits(
      ctx, v.fn(), {{Slot::source, x.width(), Slot::target, 0, y.width()}});
  return {ctx, x, y, f};
}

// -- powersets ---------------------------------------------------------------

/// Membership eps : X <-> pow X.
inline Relation eps(Context &ctx, const Carrier &inner) {
  const Carrier pw = Carrier::powerset(inner);
  const std::uint64_t m = inner.count();
  bdd::Manager &mgr = ctx.manager();
  bdd::BoolFn f = mgr.constant(false);
  for (std::uint64_t j = 0; j < m; ++j)
    f = f | (ctx.element(inner, Slot::source, j) &
             mgr.var(ctx.var(Slot::target, j)));
  return {ctx, inner, pw, f};
}

/// Size comparison omega : pow X <-> pow X with omega_{Y,Z} iff |Y| <= |Z|,
/// built as a running comparator of the two characteristic vectors.
inline Relation omega(Context &ctx, const Carrier &inner) {
  const Carrier pw = Carrier::powerset(inner);
  const std::size_t m = pw.width();
  bdd::Manager &mgr = ctx.manager();
  (void)ctx.block(Slot::target, 0, m);
  // level[d + m] is the function of bits p.. given |Z| - |Y| = d so far
  std::vector<bdd::BoolFn> level(2 * m + 1);
  for (std::size_t k = 0; k < level.size(); ++k)
    level[k] = mgr.constant(k >= m);
  for (std::size_t p = m; p-- > 0;) {
    std::vector<bdd::BoolFn> next(2 * m + 1, mgr.constant(false));
    const bdd::var_t vy = ctx.var(Slot::source, p);
    const bdd::var_t vz = ctx.var(Slot::target, p);
    for (std::size_t k = 0; k < level.size(); ++k) {
      auto at = [&](std::ptrdiff_t kk) {
        kk = std::clamp<std::ptrdiff_t>(kk, 0,
                                        static_cast<std::ptrdiff_t>(2 * m));
        return level[static_cast<std::size_t>(kk)];
      };
      const auto kk = static_cast<std::ptrdiff_t>(k);
      bdd::BoolFn y0 = mgr.make_node(vz, at(kk), at(kk + 1));
      bdd::BoolFn y1 = mgr.make_node(vz, at(kk - 1), at(kk));
      next[k] = mgr.make_node(vy, y0, y1);
    }
    level = std::move(next);
  }
  return {ctx, pw, pw, level[m]};
}

/// Strict size comparison omega & -omega^ (|Y| < |Z|), cached per carrier.
inline const Relation &strict_omega(Context &ctx, const Carrier &inner) {
  const std::string key = "strict-omega:" + inner.key();
  if (const Relation *r = ctx.cached(key))
    return *r;
  const Relation om = omega(ctx, inner);
  return ctx.remember(key, om & ~transpose(om));
}

// -- vectors and points ------------------------------------------------------

/// Point describing element `index` of c.
inline Relation point_of(Context &ctx, const Carrier &c, std::uint64_t index) {
  if (index >= c.count())
    throw std::out_of_range("point: index " + std::to_string(index) +
                            " outside carrier " + c.to_string());
  return {ctx, c, Carrier::unit(), ctx.element(c, Slot::source, index)};
}

/// Indices of the elements a vector describes, ascending.
inline std::vector<std::uint64_t> members(const Relation &v,
                                          std::size_t limit = SIZE_MAX) {
  if (!v.is_vector())
    throw type_error("members: argument must be a vector, got " +
                     v.type_string());
  Context &ctx = v.context();
  std::vector<std::uint64_t> out;
  bdd::VarBlock sb = v.source_block();
  ctx.manager().for_each_model(
      v.fn(), std::span<const bdd::VarBlock>(&sb, 1), limit,
      [&](const std::vector<bool> &bits) {
        if (auto idx = v.source().decode(bits))
          out.push_back(*idx);
        return true;
      });
  return out;
}

/// Embedding inj(r) : Y <-> X of the subset Y described by r : X <-> unit.
/// Y is a fresh base carrier whose elements are the members of r in index
/// order.
inline Relation inj(const Relation &r, const std::string &name = "sub") {
  if (!r.is_vector())
    throw type_error("inj: argument must be a vector, got " + r.type_string());
  Context &ctx = r.context();
  const Carrier x = r.source();
  const auto elems = members(r);
  std::vector<std::string> labels;
  labels.reserve(elems.size());
  for (auto e : elems)
    labels.push_back(x.label(e));
  const Carrier y = Carrier::base(name, elems.size(), std::move(labels));
  bdd::BoolFn f = ctx.manager().constant(false);
  for (std::size_t k = 0; k < elems.size(); ++k)
    f = f | (ctx.element(y, Slot::source, k) &
             ctx.element(x, Slot::target, elems[k]));
  return {ctx, y, x, f};
}

/// Column-wise enumeration eps . inj(r)^ of the family described by
/// r : pow X <-> unit.
inline Relation column_enum(const Relation &r, const std::string &name = "sub") {
  if (!r.source().is_powerset())
    throw type_error("column enumeration needs a vector over a powerset, got " +
                     r.type_string());
  return eps(r.context(), r.source().inner()) * transpose(inj(r, name));
}

// -- inspection --------------------------------------------------------------

inline BigInt entry_count(const Relation &r) {
  const std::array<bdd::VarBlock, 2> blocks{r.source_block(),
                                            r.target_block()};
  return r.context().manager().sat_count(r.fn(), blocks);
}

inline bool contains(const Relation &r, std::uint64_t i, std::uint64_t j) {
  const auto sb = r.source().encode(i);
  const auto tb = r.target().encode(j);
  return r.context().manager().evaluate(r.fn(), [&](bdd::var_t v) {
    const std::size_t pos = v / Context::slot_count;
    switch (v % Context::slot_count) {
    case 0:
      return pos < sb.size() && sb[pos];
    case 1:
      return pos < tb.size() && tb[pos];
    default:
      return false;
    }
  });
}

/// Boolean-matrix rendering: a column legend, then one line per row with the
/// row label and one '1' or '.' per column.
inline std::string to_matrix_string(const Relation &r) {
  const std::uint64_t rows = r.source().count(), cols = r.target().count();
  std::vector<std::string> rl(rows);
  std::size_t w = 0;
  for (std::uint64_t i = 0; i < rows; ++i) {
    rl[i] = r.source().label(i);
    w = std::max(w, rl[i].size());
  }
  std::ostringstream os;
  os << "# columns:";
  for (std::uint64_t j = 0; j < cols; ++j)
    os << ' ' << r.target().label(j);
  os << '\n';
  for (std::uint64_t i = 0; i < rows; ++i) {
    os << rl[i] << std::string(w - rl[i].size() + 1, ' ');
    for (std::uint64_t j = 0; j < cols; ++j)
      os << (contains(r, i, j) ? '1' : '.');
    os << '\n';
  }
  return os.str();
}

} // namespace relctl
