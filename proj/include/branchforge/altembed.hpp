#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "branchforge/perm_group.hpp"
#include "branchforge/permutation.hpp"

namespace branchforge {

/// A word in the generators of G: entries are +(k+1) for generator k and
/// -(k+1) for its inverse. Always freely reduced.
class GWord {
 public:
  GWord() = default;
  explicit GWord(std::vector<int> letters);

  static GWord generator(std::size_t k, bool inverse = false);

  const std::vector<int>& letters() const noexcept { return letters_; }
  bool empty() const noexcept { return letters_.empty(); }

  GWord inverse() const;
  GWord pow(long long k) const;
  friend GWord operator*(const GWord& a, const GWord& b);

  friend bool operator==(const GWord&, const GWord&) = default;
  friend auto operator<=>(const GWord&, const GWord&) = default;

 private:
  std::vector<int> letters_;
};

/// Cayley table of a finite group. Element 0 is the identity.
struct FiniteGroupTable {
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint32_t>> table;  // table[a][b] = a*b
  std::vector<std::uint32_t> generators;
  /// A word in `generators` (indices into `generators`) for every element,
  /// when the table came from generator images.
  std::vector<GWord> words;

  std::size_t order() const noexcept { return table.size(); }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const { return table[a][b]; }
  std::uint32_t inverse(std::uint32_t a) const;

  /// Checks closure, identity at index 0, associativity, inverses, and that
  /// the generators generate. Throws PreconditionError.
  void validate() const;

  /// Group generated by permutation images, enumerated breadth-first from
  /// the identity with generators in declaration order.
  static FiniteGroupTable from_generator_images(const std::vector<std::string>& names,
                                                const std::vector<Permutation>& images,
                                                std::size_t degree);
  static FiniteGroupTable cyclic(std::size_t n);
  static FiniteGroupTable klein_four();
};

/// Free action of F on {3}∪{6..n+4} and diagonally on {4}∪{n+5..2n+3}
/// (1-based) through the left-regular representation. Returns one
/// permutation of degree 2n+3 per element of F.
std::vector<Permutation> embed_finite_group(const FiniteGroupTable& group);

/// Whether the F-conjugates of Alt(5) on points 1..5 generate Alt(2n+3).
bool verify_altalt(const std::vector<Permutation>& images, std::size_t n);

/// Standard generators of Q = Alt(5): (1 2 3) and (1 2 3 4 5).
const std::vector<Permutation>& q_generators();
const std::vector<std::string>& q_generator_names();
inline constexpr std::uint64_t kQExponent = 30;

struct Quotient {
  std::size_t degree = 1;
  std::vector<Permutation> images;  // aligned with GroupChainSpec::generators
};

/// The residually finite group G, described through finite quotients
/// G/N_1, G/N_2, ... given as permutation images of the generators. Level i
/// uses quotient min(i, size) (1-based). The condition that the N_i
/// intersect trivially cannot be checked from finite data and is the
/// caller's responsibility.
struct GroupChainSpec {
  std::vector<std::string> generators;
  std::vector<Quotient> quotients;
  /// Index of a quotient the user declares faithful, making G finite.
  std::optional<std::size_t> faithful_quotient;

  static GroupChainSpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
  void validate() const;

  std::size_t quotient_index_for_level(int level) const;
  std::optional<std::size_t> generator_index(const std::string& name) const;
};

/// X = Alt(2n+3)/<σ> with σ = (1 2 3). A coset h<σ> is stored as the
/// arrangement (h(0), ..., h(N-1)) with its first three entries rotated so
/// the smallest comes first; arrangements are packed 4 bits per point.
class CosetSpace {
 public:
  CosetSpace(std::size_t alt_degree, const std::vector<Permutation>& generators,
             std::size_t degree_cap);

  std::size_t alt_degree() const noexcept { return alt_degree_; }
  std::size_t size() const noexcept { return keys_.size(); }
  std::uint64_t key(Point coset) const { return keys_[coset]; }
  std::vector<Point> arrangement(Point coset) const;
  /// a · (h<σ>) = (a h)<σ>
  Point act(const Permutation& a, Point coset) const;
  Permutation action(const Permutation& a) const;
  /// σ-conjugate generating the stabilizer: the 3-cycle on h(0), h(1), h(2).
  Permutation stabilizer_generator(Point coset) const;
  const std::vector<Permutation>& generator_actions() const noexcept { return gen_actions_; }

 private:
  std::uint64_t canonical(std::uint64_t key) const;
  std::size_t alt_degree_;
  std::vector<std::uint64_t> keys_;
  std::unordered_map<std::uint64_t, Point> index_;
  std::vector<Permutation> gen_actions_;
};

/// Data for one level: A_j = Alt(2n_j+3) acting on X_j = A_j/<σ_j>.
class LevelData {
 public:
  enum class PointClass : std::uint8_t { O, Y, YPrime };

  int index() const noexcept { return j_; }
  std::size_t quotient_order() const noexcept { return core_->n; }
  std::size_t alt_degree() const noexcept { return 2 * core_->n + 3; }
  std::size_t x_size() const noexcept { return core_->cosets.size(); }
  Point o() const noexcept { return 0; }
  const Permutation& sigma() const noexcept { return core_->sigma; }
  std::uint64_t max_element_order() const noexcept { return core_->m; }
  std::uint64_t exponent() const noexcept { return core_->exponent; }
  const std::vector<Point>& y() const noexcept { return core_->y; }
  const std::vector<Point>& y_prime() const noexcept { return core_->y_prime; }
  PointClass classify(Point x) const { return core_->classes[x]; }
  bool in_y(Point x) const { return x < x_size() && classify(x) == PointClass::Y; }
  bool in_y_prime(Point x) const { return x < x_size() && classify(x) == PointClass::YPrime; }
  const CosetSpace& cosets() const noexcept { return core_->cosets; }

  /// Generators of A_j on the natural 2n+3 points: Q generators, then the
  /// embedded images of the G generators.
  const std::vector<Permutation>& a_generators_natural() const noexcept {
    return core_->a_gens;
  }
  std::vector<std::string> a_generator_names() const { return core_->a_gen_names; }
  const FiniteGroupTable& quotient_group() const noexcept { return core_->table; }
  const std::vector<Permutation>& embedding() const noexcept { return core_->embedding; }

  /// Natural images of Q and G elements in A_j.
  Permutation q_natural(const Permutation& q5) const;
  Permutation g_natural(const GWord& g) const;
  /// Order of the image of g in this level's quotient.
  std::uint64_t g_order(const GWord& g) const;

  /// Coset action on X_j of an element of A_j, memoized.
  std::shared_ptr<const Permutation> on_x(const Permutation& natural) const;
  Point act(const Permutation& natural, Point x) const { return core_->cosets.act(natural, x); }

  /// The printed closed form (2n+3)!/3 - (2n)! for |Y|, reported beside the
  /// enumerated value.
  BigInt printed_y_formula() const;
  BigInt y_prime_formula() const;  // (2n)! - 1

  LevelData with_index(int j) const {
    LevelData copy = *this;
    copy.j_ = j;
    return copy;
  }

  nlohmann::json to_json(bool include_coset_table) const;

  friend LevelData build_level_data(const GroupChainSpec& spec, std::size_t quotient, int j,
                                    std::size_t degree_cap);

 private:
  struct Core {
    explicit Core(CosetSpace c) : cosets(std::move(c)) {}
    std::size_t n = 1;
    Permutation sigma;
    FiniteGroupTable table;
    std::vector<Permutation> embedding;
    std::vector<Permutation> g_gens;  // natural image of each G generator
    std::vector<Permutation> g_gens_inv;
    std::vector<Permutation> quotient_images;
    std::vector<Permutation> a_gens;
    std::vector<std::string> a_gen_names;
    CosetSpace cosets;
    std::vector<PointClass> classes;
    std::vector<Point> y, y_prime;
    std::uint64_t m = 1, exponent = 1;
    mutable std::mutex memo_mutex;
    mutable std::unordered_map<Permutation, std::shared_ptr<const Permutation>> memo;
  };

  int j_ = 1;
  std::shared_ptr<const Core> core_;
};

/// Builds and verifies the level data for quotient `quotient` of `spec`:
/// transitivity of A_j on X_j, A_j = <G-conjugates of Q> on the natural
/// points, Stab(o) = <σ> of order 3, the partition X = Y ⊔ Y' ⊔ {o} and
/// |Y'| = (2n)! - 1. Throws ResourceError naming the required cap when
/// |X_j| would exceed `degree_cap`.
LevelData build_level_data(const GroupChainSpec& spec, std::size_t quotient, int j,
                           std::size_t degree_cap = kDefaultDegreeCap);

}  // namespace branchforge
