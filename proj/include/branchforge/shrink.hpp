#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "branchforge/fp_word.hpp"
#include "branchforge/perm_group.hpp"

namespace branchforge {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Z-sets

/// A spine choice (s, t) in Y_j x Y'_j under which w fails to shrink at
/// level j, with the first vertex x (ascending) that shows it.
struct ZSetMember {
  Point s = 0, t = 0;
  Point witness = 0;
  LenPair length;  // length of w||_x under (s, t)
};

enum class ZSetMode {
  Exhaustive,  // every (s, t) and every x
  Reduced,     // per x, only the classes of (s, t) that the positions can tell apart
};

struct ZSet {
  int level = 1;
  FPWord word;
  std::vector<ZSetMember> members;  // sorted by (s, t)
  std::uint64_t bound = 0;          // len_B(w) * m_j * (|Y_j| + |Y'_j|)

  std::size_t size() const noexcept { return members.size(); }
  bool contains(Point s, Point t) const;
  nlohmann::json to_json(const std::vector<std::string>& g_names) const;
};

/// Exact Z_j(w). A pair is a member when some x in X_j has
/// len_B(w||_x) = len_B(w) (len_B(w) > 1) or len(w||_x) > (1,0)
/// (len_B(w) = 1). Throws DomainError for len(w) <= (1,0) and
/// VerificationError if the size bound is ever exceeded.
ZSet z_set(const FPWord& w, const LevelData& level, const LevelData& next,
           ZSetMode mode = ZSetMode::Reduced);

/// Re-checks one member's witness.
bool witness_holds(const ZSet& z, const ZSetMember& member, const LevelData& level,
                   const LevelData& next);

// ---------------------------------------------------------------------------
// Landau's function and the counting estimates

/// Maximal element order in Sym(n), by dynamic programming over prime powers.
BigInt landau(unsigned n);

struct LandauRow {
  unsigned n = 0;
  BigInt g;
  Rational estimate;  // n! / 2^(n-1)
  bool holds = false;
};
LandauRow landau_bound_check(unsigned n);

struct HypothesisRatio {
  int level = 1;
  std::size_t n = 1;
  std::size_t y_size = 0, y_prime_size = 0;
  std::uint64_t m = 1;
  Rational ratio;  // |Y||Y'| / (m (|Y| + |Y'|))
  Rational bound;  // 19 * 2^(2n+1) / (20 (2n+3)(2n+2)(2n+1))
  bool ratio_at_least_bound() const { return ratio >= bound; }
  /// Strict counting inequality |Y||Y'| > k m (|Y| + |Y'|).
  bool supports(std::size_t len_b) const { return ratio > Rational(len_b); }
  nlohmann::json to_json() const;
};
HypothesisRatio hypothesis_ratio(const LevelData& level);

std::string rational_string(const Rational& r);

// ---------------------------------------------------------------------------
// Greedy shrinking prefix

struct ShrinkOptions {
  std::string scenario_id;
  ZSetMode mode = ZSetMode::Reduced;
};

struct ShrinkLevelRecord {
  int level = 1;
  Point alpha = 0, beta = 0;
  std::size_t active_words = 0;
  std::size_t max_len_b = 0;
  std::size_t union_size = 0;
  std::size_t pair_count = 0;
  bool guaranteed = true;  // counting inequality holds for max_len_b
};

struct TrackedWord {
  FPWord word;
  std::optional<int> shrink_depth;
  std::vector<std::size_t> max_len_b;  // over stabilized sections, per depth
};

struct ShrinkCertificate {
  std::string scenario_id;
  int budget = 0;
  SpinePair prefix;
  std::vector<TrackedWord> words;
  std::vector<ZSet> zsets;
  std::vector<ShrinkLevelRecord> levels;
  std::vector<FPWord> surviving;  // long stabilized sections left at the budget
  bool complete = false;

  nlohmann::json to_json(const std::vector<std::string>& g_names) const;
};

/// Chooses (alpha_j, beta_j) level by level as the smallest pair outside the
/// union of the Z-sets of every long stabilized section. After all words
/// are short the remaining levels take the smallest admissible pair.
/// Throws VerificationError ("cannot guarantee choice") if the union
/// covers Y_j x Y'_j, ConfigError if budget + 1 exceeds the horizon.
ShrinkCertificate greedy_shrinking_prefix(const std::vector<FPWord>& words,
                                          const TreeShape& shape, int budget,
                                          const ShrinkOptions& options = {});

struct ReplayReport {
  bool ok = true;
  std::vector<std::string> mismatches;
};

/// Recomputes every recorded quantity of a certificate from its JSON and
/// the tree shape, and re-runs the search to compare the JSON bytes.
ReplayReport replay_certificate(const nlohmann::json& certificate, const TreeShape& shape,
                                const std::vector<std::string>& g_names);

}  // namespace branchforge
