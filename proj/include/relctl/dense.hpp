/// @file   dense.hpp
/// @brief  Explicit Boolean-matrix relations, used to cross-check the
///         decision-diagram backend
///
/// Every operation here is written entry by entry from its point-wise
/// definition and shares no code with relation.hpp beyond the element
/// numbering of carriers.

#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "relctl/carrier.hpp"
#include "relctl/relation.hpp"

namespace relctl {

/// Row-major bit matrix with at most 2^24 entries.
class DenseRelation {
public:
  static constexpr std::uint64_t max_entries = std::uint64_t{1} << 24;

  DenseRelation() = default;
  DenseRelation(std::uint64_t rows, std::uint64_t cols)
      : rows_(rows), cols_(cols) {
    if (cols != 0 && rows > max_entries / cols)
      throw std::length_error("dense relation " + std::to_string(rows) + "x" +
                              std::to_string(cols) + " exceeds 2^24 entries");
    bits_.assign((rows * cols + 63) / 64, 0);
  }

  [[nodiscard]] std::uint64_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::uint64_t cols() const noexcept { return cols_; }

  [[nodiscard]] bool get(std::uint64_t i, std::uint64_t j) const {
    const std::uint64_t k = index(i, j);
    return (bits_[k / 64] >> (k % 64)) & 1u;
  }

  void set(std::uint64_t i, std::uint64_t j, bool v = true) {
    const std::uint64_t k = index(i, j);
    if (v)
      bits_[k / 64] |= std::uint64_t{1} << (k % 64);
    else
      bits_[k / 64] &= ~(std::uint64_t{1} << (k % 64));
  }

  [[nodiscard]] std::uint64_t count() const noexcept {
    std::uint64_t c = 0;
    for (auto w : bits_)
      c += static_cast<std::uint64_t>(std::popcount(w));
    return c;
  }

  friend bool operator==(const DenseRelation &a,
                         const DenseRelation &b) = default;

private:
  std::uint64_t rows_ = 0, cols_ = 0;
  std::vector<std::uint64_t> bits_;

  [[nodiscard]] std::uint64_t index(std::uint64_t i, std::uint64_t j) const {
    if (i >= rows_ || j >= cols_)
      throw std::out_of_range("dense relation index out of range");
    return i * cols_ + j;
  }
};

namespace dense {

inline DenseRelation universal(std::uint64_t rows, std::uint64_t cols) {
  DenseRelation r(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j)
      r.set(i, j);
  return r;
}

inline DenseRelation identity(std::uint64_t n) {
  DenseRelation r(n, n);
  for (std::uint64_t i = 0; i < n; ++i)
    r.set(i, i);
  return r;
}

inline DenseRelation complement(const DenseRelation &a) {
  DenseRelation r(a.rows(), a.cols());
  for (std::uint64_t i = 0; i < a.rows(); ++i)
    for (std::uint64_t j = 0; j < a.cols(); ++j)
      r.set(i, j, !a.get(i, j));
  return r;
}

inline DenseRelation transpose(const DenseRelation &a) {
  DenseRelation r(a.cols(), a.rows());
  for (std::uint64_t i = 0; i < a.rows(); ++i)
    for (std::uint64_t j = 0; j < a.cols(); ++j)
      r.set(j, i, a.get(i, j));
  return r;
}

inline DenseRelation unite(const DenseRelation &a, const DenseRelation &b) {
  DenseRelation r(a.rows(), a.cols());
  for (std::uint64_t i = 0; i < a.rows(); ++i)
    for (std::uint64_t j = 0; j < a.cols(); ++j)
      r.set(i, j, a.get(i, j) || b.get(i, j));
  return r;
}

inline DenseRelation intersect(const DenseRelation &a, const DenseRelation &b) {
  DenseRelation r(a.rows(), a.cols());
  for (std::uint64_t i = 0; i < a.rows(); ++i)
    for (std::uint64_t j = 0; j < a.cols(); ++j)
      r.set(i, j, a.get(i, j) && b.get(i, j));
  return r;
}

/// Boolean matrix product.
inline DenseRelation compose(const DenseRelation &a, const DenseRelation &b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("dense compose: inner dimensions differ");
  DenseRelation r(a.rows(), b.cols());
  for (std::uint64_t i = 0; i < a.rows(); ++i)
    for (std::uint64_t k = 0; k < a.cols(); ++k)
      if (a.get(i, k))
        for (std::uint64_t j = 0; j < b.cols(); ++j)
          if (b.get(k, j))
            r.set(i, j);
  return r;
}

/// syq(R, S)_{y,z} iff for all x: R_{x,y} <-> S_{x,z}.
inline DenseRelation syq(const DenseRelation &a, const DenseRelation &b) {
  DenseRelation r(a.cols(), b.cols());
  for (std::uint64_t y = 0; y < a.cols(); ++y)
    for (std::uint64_t z = 0; z < b.cols(); ++z) {
      bool all = true;
      for (std::uint64_t x = 0; x < a.rows() && all; ++x)
        all = a.get(x, y) == b.get(x, z);
      r.set(y, z, all);
    }
  return r;
}

/// pi : X*Y <-> X, with (x, y) numbered x * ny + y.
inline DenseRelation pi(std::uint64_t nx, std::uint64_t ny) {
  DenseRelation r(nx * ny, nx);
  for (std::uint64_t x = 0; x < nx; ++x)
    for (std::uint64_t y = 0; y < ny; ++y)
      r.set(x * ny + y, x);
  return r;
}

inline DenseRelation rho(std::uint64_t nx, std::uint64_t ny) {
  DenseRelation r(nx * ny, ny);
  for (std::uint64_t x = 0; x < nx; ++x)
    for (std::uint64_t y = 0; y < ny; ++y)
      r.set(x * ny + y, y);
  return r;
}

/// [R, S]_{z,(x,y)} iff R_{z,x} and S_{z,y}.
inline DenseRelation pairing(const DenseRelation &a, const DenseRelation &b) {
  DenseRelation r(a.rows(), a.cols() * b.cols());
  for (std::uint64_t z = 0; z < a.rows(); ++z)
    for (std::uint64_t x = 0; x < a.cols(); ++x)
      for (std::uint64_t y = 0; y < b.cols(); ++y)
        r.set(z, x * b.cols() + y, a.get(z, x) && b.get(z, y));
  return r;
}

inline DenseRelation exchange(std::uint64_t n) {
  DenseRelation r(n * n, n * n);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = 0; b < n; ++b)
      r.set(a * n + b, b * n + a);
  return r;
}

inline DenseRelation vec(const DenseRelation &a) {
  DenseRelation r(a.rows() * a.cols(), 1);
  for (std::uint64_t x = 0; x < a.rows(); ++x)
    for (std::uint64_t y = 0; y < a.cols(); ++y)
      r.set(x * a.cols() + y, 0, a.get(x, y));
  return r;
}

inline DenseRelation rel_of(const DenseRelation &v, std::uint64_t nx,
                            std::uint64_t ny) {
  DenseRelation r(nx, ny);
  for (std::uint64_t x = 0; x < nx; ++x)
    for (std::uint64_t y = 0; y < ny; ++y)
      r.set(x, y, v.get(x * ny + y, 0));
  return r;
}

/// Whether element j of an m-element set belongs to subset number `set`.
inline bool has_member(std::uint64_t set, std::uint64_t j, std::uint64_t m) {
  return (set >> (m - 1 - j)) & 1u;
}

inline DenseRelation eps(std::uint64_t m) {
  DenseRelation r(m, std::uint64_t{1} << m);
  for (std::uint64_t x = 0; x < m; ++x)
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << m); ++s)
      r.set(x, s, has_member(s, x, m));
  return r;
}

inline DenseRelation omega(std::uint64_t m) {
  const std::uint64_t n = std::uint64_t{1} << m;
  DenseRelation r(n, n);
  for (std::uint64_t y = 0; y < n; ++y)
    for (std::uint64_t z = 0; z < n; ++z)
      r.set(y, z, std::popcount(y) <= std::popcount(z));
  return r;
}

inline DenseRelation point(std::uint64_t n, std::uint64_t i) {
  DenseRelation r(n, 1);
  r.set(i, 0);
  return r;
}

/// inj(r)_{k,x} iff x is the k-th member of r.
inline DenseRelation inj(const DenseRelation &v) {
  std::vector<std::uint64_t> elems;
  for (std::uint64_t x = 0; x < v.rows(); ++x)
    if (v.get(x, 0))
      elems.push_back(x);
  DenseRelation r(elems.size(), v.rows());
  for (std::uint64_t k = 0; k < elems.size(); ++k)
    r.set(k, elems[k]);
  return r;
}

} // namespace dense

/// Entry-exact copy of a symbolic relation.
inline DenseRelation to_dense(const Relation &r) {
  const std::uint64_t rows = r.source().count(), cols = r.target().count();
  DenseRelation d(rows, cols);
  for (std::uint64_t i = 0; i < rows; ++i)
    for (std::uint64_t j = 0; j < cols; ++j)
      if (contains(r, i, j))
        d.set(i, j);
  return d;
}

inline Relation from_dense(Context &ctx, const Carrier &source,
                           const Carrier &target, const DenseRelation &d) {
  if (d.rows() != source.count() || d.cols() != target.count())
    throw type_error("from_dense: matrix shape does not match " +
                     source.to_string() + " <-> " + target.to_string());
  bdd::Manager &m = ctx.manager();
  std::vector<bdd::BoolFn> cols(d.cols());
  for (std::uint64_t j = 0; j < d.cols(); ++j)
    cols[j] = ctx.element(target, Slot::target, j);
  bdd::BoolFn f = m.constant(false);
  for (std::uint64_t i = 0; i < d.rows(); ++i) {
    bdd::BoolFn row = m.constant(false);
    for (std::uint64_t j = 0; j < d.cols(); ++j)
      if (d.get(i, j))
        row = row | cols[j];
    if (!row.is_false())
      f = f | (ctx.element(source, Slot::source, i) & row);
  }
  return {ctx, source, target, f};
}

} // namespace relctl
