#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "branchforge/permutation.hpp"

namespace branchforge {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::size_t kDefaultDegreeCap = 200000;

/// One level of a base and strong generating set. The orbit of `base` under
/// `generators` is stored as a Schreier vector: for an orbit point x other
/// than the base, generators[label[x]] maps some earlier orbit point to x.
struct ChainLevel {
  Point base = 0;
  std::vector<Permutation> generators;
  std::vector<Permutation> inverses;
  std::vector<std::int32_t> label;  // -1: not in orbit, -2: the base point
  std::vector<Point> orbit;         // breadth-first order

  bool in_orbit(Point x) const { return label[x] != -1; }
  /// u with u(base) == x
  Permutation transversal(Point x) const;
  /// u^-1 * h where u(base) == h(base)
  Permutation strip(const Permutation& h, Point x) const;
};

/// Deterministic Schreier-Sims. New base points are the smallest point
/// moved by the element that forces them; an optional base prefix is
/// installed first.
class StabilizerChain {
 public:
  StabilizerChain(std::size_t degree, std::span<const Permutation> generators,
                  std::span<const Point> base_prefix = {});

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<ChainLevel>& levels() const noexcept { return levels_; }
  std::vector<Point> base() const;
  BigInt order() const;

  /// Residue of sifting `g`, and the level index where sifting stopped
  /// (levels().size() when it passed every level).
  std::pair<Permutation, std::size_t> sift(const Permutation& g) const;
  bool contains(const Permutation& g) const;

 private:
  void add_level(Point base);
  void rebuild_orbit(ChainLevel& level) const;
  void add_generator(std::size_t level, const Permutation& g);

  std::size_t degree_;
  std::vector<ChainLevel> levels_;
};

/// Finite permutation group given by generators. The stabilizer chain is
/// computed on first use and shared between copies; concurrent callers
/// observe either no chain or a complete one.
class PermGroup {
 public:
  PermGroup(std::size_t degree, std::vector<Permutation> generators,
            std::size_t degree_cap = kDefaultDegreeCap);

  static PermGroup trivial(std::size_t degree) {
    return PermGroup(degree, {Permutation(degree)});
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<Permutation>& generators() const noexcept { return generators_; }

  const StabilizerChain& chain() const;
  bool has_cached_chain() const;
  BigInt order() const { return chain().order(); }
  bool contains(const Permutation& g) const { return chain().contains(g); }

 private:
  struct Cache {
    std::once_flag once;
    std::optional<StabilizerChain> chain;
  };

  std::size_t degree_;
  std::vector<Permutation> generators_;
  std::shared_ptr<Cache> cache_;
};

/// Orbit of `point`, ascending.
std::vector<Point> orbit(const PermGroup& group, Point point);
BigInt group_order(const PermGroup& group);
bool is_transitive(const PermGroup& group);
/// True iff <gens> is Alt(n). Every generator must be even.
bool generates_alternating(std::span<const Permutation> gens, std::size_t n);
/// Point stabilizer, generated by the sifted Schreier generators that
/// survive in a chain whose first base point is `point`.
PermGroup stabilizer_gens(const PermGroup& group, Point point);

struct MaxOrderOptions {
  std::size_t element_cap = 1000000;
};
/// Exact maximum element order. Alt(n) and Sym(n) in their natural action are
/// recognised by order and handled through cycle types; anything else is
/// enumerated up to `element_cap` elements.
std::uint64_t max_element_order(const PermGroup& group, const MaxOrderOptions& opts = {});

/// Every element, breadth-first from the identity using generators in order.
std::vector<Permutation> enumerate_elements(const PermGroup& group, std::size_t cap);

/// Normal closure of the commutators of the generators.
PermGroup derived_subgroup(const PermGroup& group);

BigInt factorial(unsigned n);
/// |Alt(n)|, with |Alt(0)| = |Alt(1)| = 1.
BigInt alternating_order(unsigned n);

/// Partitions of n in non-increasing order.
std::vector<std::vector<unsigned>> partitions(unsigned n);
/// Cycle types of Alt(n): partitions with an even number of even parts.
std::vector<std::vector<unsigned>> even_cycle_types(unsigned n);
std::uint64_t max_order_alternating(unsigned n);
std::uint64_t exponent_alternating(unsigned n);

/// Standard generators of Alt(n) on points 0..n-1: (0 1 2) together with an
/// (n-1)- or n-cycle fixing parity. Alt(1), Alt(2) yield the identity.
std::vector<Permutation> alternating_generators(unsigned n);

}  // namespace branchforge
