#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "branchforge/altembed.hpp"
#include "branchforge/tree_aut.hpp"

namespace branchforge {

/// Element (q, g) of B = Q x G: q in Alt(5), g a word in G's generators.
struct BLetter {
  Permutation q = Permutation(5);
  GWord g;

  bool is_identity() const { return q.is_identity() && g.empty(); }
  bool pure_g() const { return q.is_identity() && !g.empty(); }
  BLetter inverse() const { return {q.inverse(), g.inverse()}; }
  friend BLetter operator*(const BLetter& a, const BLetter& b) {
    return {compose(a.q, b.q), a.g * b.g};
  }
  friend bool operator==(const BLetter&, const BLetter&) = default;
};

/// An A-letter is an element of A_j on its natural 2n_j+3 points.
using Letter = std::variant<Permutation, BLetter>;

/// (len_B, len_A), ordered lexicographically.
struct LenPair {
  std::size_t b = 0, a = 0;
  friend auto operator<=>(const LenPair&, const LenPair&) = default;
  std::string to_string() const;
};

inline constexpr LenPair kShortLength{1, 0};

/// Word of the free product A_j * B in alternating normal form.
class FPWord {
 public:
  FPWord() = default;
  FPWord(int level, std::size_t alt_degree) : level_(level), degree_(alt_degree) {}

  int level() const noexcept { return level_; }
  std::size_t alt_degree() const noexcept { return degree_; }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  bool empty() const noexcept { return letters_.empty(); }
  LenPair length() const;
  std::size_t len_b() const { return length().b; }

  FPWord inverse() const;
  FPWord power(long long k) const;
  friend FPWord operator*(const FPWord& u, const FPWord& v);
  friend bool operator==(const FPWord&, const FPWord&) = default;

  /// True when every letter is a B-letter with trivial Q part.
  bool only_g_letters() const;

  std::string to_dsl(const std::vector<std::string>& g_names) const;

 private:
  friend FPWord normal_form(int level, std::size_t alt_degree, std::vector<Letter> raw);
  int level_ = 1;
  std::size_t degree_ = 5;
  std::vector<Letter> letters_;
};

/// Multiplies adjacent letters of the same kind and drops identities.
FPWord normal_form(int level, std::size_t alt_degree, std::vector<Letter> raw);

/// w = ^{a_1}b_1 ... ^{a_n}b_n a with a_i the product of the A-letters
/// preceding b_i and a the product of all A-letters.
struct ConjugateForm {
  std::vector<std::pair<Permutation, BLetter>> terms;
  std::vector<Permutation> prefix_inverses;  // a_i^-1
  Permutation a;
  Permutation a_inverse;
};
ConjugateForm conjugate_form(const FPWord& w);

/// Where each B-letter is read in a (stabilized) section: term index i and
/// the point y of X_j at which b_i is sectioned, in product order.
using Positions = std::vector<std::pair<std::size_t, Point>>;

/// Positions for w|_x: y_i = a_i^-1 a x.
Positions section_positions(const ConjugateForm& cf, const LevelData& level, Point x);
/// Positions for w||_x: for k = 0..l-1 and each i, y = a_i^-1 a^-k x, where
/// l is the orbit length of x under a.
Positions stabilized_positions(const ConjugateForm& cf, const LevelData& level, Point x);

/// Next-level word from positions: b_i contributes (q_i, g_i) at o, the
/// rooted q_i at alpha, the rooted g_i at beta, nothing elsewhere.
FPWord assemble_section(const ConjugateForm& cf, const Positions& positions, Point alpha,
                        Point beta, const LevelData& next);

/// Word representing evaluate(w)|_x.
FPWord section_word(const FPWord& w, Point x, const TreeShape& shape, const SpinePair& spine);
/// Word representing evaluate(w)||_u, one letter of u at a time.
FPWord stabilized_section_word(const FPWord& w, const Vertex& u, const TreeShape& shape,
                               const SpinePair& spine);

/// A-letters to rooted automorphisms, B-letters to directed(q) directed(g).
TreeAut evaluate(const FPWord& w, TreeContext& ctx);

/// Parses `A(<cycles>) B(q=<cycles>, g=<word>)` tokens with optional `^k`
/// suffixes. A-cycles use the natural points of A_level; `g=1` is the
/// identity of G.
FPWord parse_word(std::string_view text, int level, std::size_t alt_degree,
                  const std::vector<std::string>& g_names);
FPWord parse_word(std::string_view text, int level, const TreeShape& shape,
                  const std::vector<std::string>& g_names);

GWord parse_g_word(std::string_view text, const std::vector<std::string>& g_names);
std::string render_g_word(const GWord& g, const std::vector<std::string>& g_names);

}  // namespace branchforge
