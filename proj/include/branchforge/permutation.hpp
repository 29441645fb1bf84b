#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace branchforge {

using Point = std::uint32_t;

/// A bijection of {0, ..., degree-1}. Points are 0-based internally and
/// 1-based in cycle notation.
class Permutation {
 public:
  Permutation() : images_{0} {}
  explicit Permutation(std::size_t degree);
  explicit Permutation(std::vector<Point> images);

  static Permutation identity(std::size_t degree) { return Permutation(degree); }

  /// Skips the bijection check; callers guarantee `images` is a bijection.
  static Permutation unchecked(std::vector<Point> images) {
    Permutation p;
    p.images_ = std::move(images);
    return p;
  }

  /// Builds a permutation of `degree` points from 0-based cycles.
  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<Point>>& cycles);

  /// Parses "(1 2 3)(4 5)" style text. "()" is the identity. Points are
  /// 1-based; any point above `degree` is a domain error.
  static Permutation parse(std::string_view text, std::size_t degree);

  std::size_t degree() const noexcept { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  Point operator[](Point x) const { return images_[x]; }
  std::span<const Point> images() const noexcept { return images_; }

  bool is_identity() const noexcept;
  Permutation inverse() const;
  /// Zero-padded extension to a larger degree (new points fixed).
  Permutation extended(std::size_t degree) const;

  /// Cycle lengths including fixed points, in order of smallest element.
  std::vector<std::size_t> cycle_type() const;
  std::vector<std::vector<Point>> cycles() const;  // nontrivial only
  std::uint64_t order() const;
  bool is_even() const;

  Permutation pow(long long exponent) const;

  /// 1-based disjoint cycle notation, "()" for the identity.
  std::string to_string() const;

  std::size_t hash() const noexcept;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) {
    return a.images_ <=> b.images_;
  }

 private:
  std::vector<Point> images_;
};

/// compose(p, q) applies q first: compose(p, q)(x) == p(q(x)).
Permutation compose(const Permutation& p, const Permutation& q);

inline Permutation operator*(const Permutation& p, const Permutation& q) {
  return compose(p, q);
}

/// p * q * p^-1
Permutation conjugate(const Permutation& p, const Permutation& q);

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b);

}  // namespace branchforge

template <>
struct std::hash<branchforge::Permutation> {
  std::size_t operator()(const branchforge::Permutation& p) const noexcept {
    return p.hash();
  }
};
