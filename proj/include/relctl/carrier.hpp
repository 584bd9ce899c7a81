/// @file   carrier.hpp
/// @brief  Finite typed domains and their bit encodings

#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "relctl/bdd.hpp"

namespace relctl {

/// A finite set used as source or target of a relation.
///
/// Carriers are structural values: two carriers denote the same type iff
/// their shapes agree recursively (base carriers compare by name and size;
/// element labels are presentation only). Every carrier owns a fixed-width
/// bit encoding of its elements:
///   - unit: no bits
///   - base of size m: ceil(log2 m) bits, most significant first; patterns
///     >= m are outside the carrier
///   - product: left bits followed by right bits
///   - powerset of an m-element carrier: m bits, bit j set iff element j is a
///     member
///
/// Element indices run from 0 to size-1. For products the index of (l, r) is
/// l * |right| + r; for powersets element j contributes 2^(m-1-j), so index
/// order and lexicographic bit order coincide.
class Carrier {
public:
  enum class Kind { unit, base, product, powerset };

  Carrier() : node_(unit_node()) {}

  static Carrier unit() { return Carrier(); }

  static Carrier base(std::string name, std::uint64_t size,
                      std::vector<std::string> labels = {}) {
    if (!labels.empty() && labels.size() != size)
      throw std::invalid_argument("carrier " + name +
                                  ": label count differs from size");
    auto n = std::make_shared<Node>();
    n->kind = Kind::base;
    n->size = size;
    n->width = size <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(size - 1));
    n->key = name + ":" + std::to_string(size);
    n->display = name;
    n->name = std::move(name);
    n->labels = std::move(labels);
    return Carrier(std::move(n));
  }

  static Carrier product(const Carrier &left, const Carrier &right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::product;
    n->left = left.node_;
    n->right = right.node_;
    n->width = left.width() + right.width();
    n->key = "(" + left.key() + "*" + right.key() + ")";
    n->display = wrap(left) + "*" + wrap(right);
    return Carrier(std::move(n));
  }

  static Carrier powerset(const Carrier &inner) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::powerset;
    n->left = inner.node_;
    n->width = static_cast<std::size_t>(inner.count());
    n->key = "pow(" + inner.key() + ")";
    n->display = "pow " + wrap(inner);
    return Carrier(std::move(n));
  }

  [[nodiscard]] Kind kind() const noexcept { return node_->kind; }
  [[nodiscard]] bool is_unit() const noexcept { return kind() == Kind::unit; }
  [[nodiscard]] bool is_product() const noexcept {
    return kind() == Kind::product;
  }
  [[nodiscard]] bool is_powerset() const noexcept {
    return kind() == Kind::powerset;
  }

  /// Name of a base carrier; empty for the other shapes.
  [[nodiscard]] const std::string &name() const noexcept { return node_->name; }

  [[nodiscard]] Carrier left() const {
    require(Kind::product, "left");
    return Carrier(node_->left);
  }
  [[nodiscard]] Carrier right() const {
    require(Kind::product, "right");
    return Carrier(node_->right);
  }
  [[nodiscard]] Carrier inner() const {
    require(Kind::powerset, "inner");
    return Carrier(node_->left);
  }

  /// Number of bits of the encoding.
  [[nodiscard]] std::size_t width() const noexcept { return node_->width; }

  /// Exact number of elements.
  [[nodiscard]] BigInt size() const {
    switch (kind()) {
    case Kind::unit:
      return 1;
    case Kind::base:
      return node_->size;
    case Kind::product:
      return left().size() * right().size();
    case Kind::powerset:
      return BigInt(1) << static_cast<unsigned>(width());
    }
    return 0;
  }

  /// Number of elements as a machine word; throws when it does not fit.
  [[nodiscard]] std::uint64_t count() const {
    BigInt s = size();
    if (s > BigInt(std::uint64_t{1} << 62))
      throw std::length_error("carrier " + to_string() + " is too large");
    return static_cast<std::uint64_t>(s);
  }

  /// True when some bit patterns do not encode an element.
  [[nodiscard]] bool has_gaps() const {
    switch (kind()) {
    case Kind::unit:
    case Kind::powerset:
      return false;
    case Kind::base:
      return node_->size != (std::uint64_t{1} << node_->width);
    case Kind::product:
      return left().has_gaps() || right().has_gaps();
    }
    return false;
  }

  [[nodiscard]] const std::string &key() const noexcept { return node_->key; }
  [[nodiscard]] const std::string &to_string() const noexcept {
    return node_->display;
  }

  [[nodiscard]] std::vector<bool> encode(std::uint64_t index) const {
    if (index >= count())
      throw std::out_of_range("element index " + std::to_string(index) +
                              " outside carrier " + to_string());
    std::vector<bool> bits;
    bits.reserve(width());
    encode_into(index, bits);
    return bits;
  }

  /// Element index of a bit pattern, or nothing if the pattern is a gap.
  [[nodiscard]] std::optional<std::uint64_t>
  decode(const std::vector<bool> &bits) const {
    if (bits.size() != width())
      throw std::invalid_argument("decode: wrong number of bits");
    return decode_at(bits, 0);
  }

  /// Human-readable name of an element.
  [[nodiscard]] std::string label(std::uint64_t index) const {
    switch (kind()) {
    case Kind::unit:
      return "()";
    case Kind::base:
      if (index >= node_->size)
        throw std::out_of_range("label: index outside carrier");
      return node_->labels.empty() ? std::to_string(index)
                                   : node_->labels[index];
    case Kind::product: {
      const Carrier l = left(), r = right();
      const std::uint64_t rc = r.count();
      return "(" + l.label(index / rc) + "," + r.label(index % rc) + ")";
    }
    case Kind::powerset: {
      const Carrier in = inner();
      const std::size_t m = width();
      std::string s = "{";
      bool first = true;
      for (std::size_t j = 0; j < m; ++j)
        if ((index >> (m - 1 - j)) & 1u) {
          if (!first)
            s += ",";
          s += in.label(j);
          first = false;
        }
      return s + "}";
    }
    }
    return {};
  }

  friend bool operator==(const Carrier &a, const Carrier &b) noexcept {
    return a.node_ == b.node_ || a.node_->key == b.node_->key;
  }

private:
  struct Node {
    Kind kind = Kind::unit;
    std::string name;
    std::uint64_t size = 1;
    std::vector<std::string> labels;
    std::shared_ptr<const Node> left, right;
    std::size_t width = 0;
    std::string key = "1";
    std::string display = "unit";
  };

  explicit Carrier(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static std::shared_ptr<const Node> unit_node() {
    static const auto n = std::make_shared<const Node>();
    return n;
  }

  static std::string wrap(const Carrier &c) {
    return c.kind() == Kind::product ? "(" + c.to_string() + ")" : c.to_string();
  }

  void require(Kind k, const char *what) const {
    if (kind() != k)
      throw std::invalid_argument(std::string("carrier ") + to_string() +
                                  " has no " + what + " component");
  }

  std::optional<std::uint64_t> decode_at(const std::vector<bool> &bits,
                                         std::size_t off) const {
    switch (kind()) {
    case Kind::unit:
      return 0;
    case Kind::base:
    case Kind::powerset: {
      std::uint64_t v = 0;
      for (std::size_t j = 0; j < width(); ++j)
        v = (v << 1) | (bits[off + j] ? 1u : 0u);
      if (kind() == Kind::base && v >= node_->size)
        return std::nullopt;
      return v;
    }
    case Kind::product: {
      const Carrier l = left(), r = right();
      auto a = l.decode_at(bits, off);
      auto b = r.decode_at(bits, off + l.width());
      if (!a || !b)
        return std::nullopt;
      return *a * r.count() + *b;
    }
    }
    return std::nullopt;
  }

  void encode_into(std::uint64_t index, std::vector<bool> &bits) const {
    switch (kind()) {
    case Kind::unit:
      return;
    case Kind::base:
    case Kind::powerset:
      for (std::size_t j = width(); j-- > 0;)
        bits.push_back((index >> j) & 1u);
      return;
    case Kind::product: {
      const Carrier r = right();
      const std::uint64_t rc = r.count();
      left().encode_into(index / rc, bits);
      r.encode_into(index % rc, bits);
      return;
    }
    }
  }

  std::shared_ptr<const Node> node_;
};

} // namespace relctl
