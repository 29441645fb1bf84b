#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include "branchforge/error.hpp"
#include "branchforge/shrink.hpp"

namespace branchforge {

namespace {

// Spine value that no position can equal.
constexpr Point kNowhere = std::numeric_limits<Point>::max();

bool fails_to_shrink(const LenPair& section, std::size_t word_len_b) {
  if (word_len_b > 1) return section.b == word_len_b;
  return section > kShortLength;
}

using PairKey = std::pair<Point, Point>;

}  // namespace

bool ZSet::contains(Point s, Point t) const {
  auto it = std::lower_bound(members.begin(), members.end(), PairKey{s, t},
                             [](const ZSetMember& m, const PairKey& k) {
                               return PairKey{m.s, m.t} < k;
                             });
  return it != members.end() && it->s == s && it->t == t;
}

nlohmann::json ZSet::to_json(const std::vector<std::string>& g_names) const {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& m : members)
    pairs.push_back({{"s", m.s}, {"t", m.t}, {"witness", m.witness},
                     {"length", {m.length.b, m.length.a}}});
  return {{"level", level}, {"word", word.to_dsl(g_names)}, {"size", size()},
          {"bound", bound}, {"members", std::move(pairs)}};
}

ZSet z_set(const FPWord& w, const LevelData& level, const LevelData& next, ZSetMode mode) {
  if (w.level() != level.index() || next.index() != level.index() + 1)
    throw DomainError("z_set: word at level " + std::to_string(w.level()) +
                      " used with levels " + std::to_string(level.index()) + "/" +
                      std::to_string(next.index()));
  const LenPair len = w.length();
  if (len <= kShortLength)
    throw DomainError("z_set needs len(w) > (1,0), got " + len.to_string());

  ZSet z;
  z.level = level.index();
  z.word = w;
  z.bound = static_cast<std::uint64_t>(len.b) * level.max_element_order() *
            (level.y().size() + level.y_prime().size());

  const auto cf = conjugate_form(w);
  std::map<PairKey, ZSetMember> found;
  auto record = [&](Point s, Point t, Point x, LenPair l) {
    found.try_emplace(PairKey{s, t}, ZSetMember{s, t, x, l});
  };

  if (mode == ZSetMode::Exhaustive) {
    std::vector<Positions> positions(level.x_size());
    for (Point x = 0; x < level.x_size(); ++x) positions[x] = stabilized_positions(cf, level, x);
    for (Point s : level.y())
      for (Point t : level.y_prime())
        for (Point x = 0; x < level.x_size(); ++x) {
          const LenPair l = assemble_section(cf, positions[x], s, t, next).length();
          if (fails_to_shrink(l, len.b)) {
            record(s, t, x, l);
            break;
          }
        }
  } else {
    for (Point x = 0; x < level.x_size(); ++x) {
      const Positions pos = stabilized_positions(cf, level, x);
      // without a position at o the section has no B-letter at all
      if (std::none_of(pos.begin(), pos.end(), [](const auto& p) { return p.second == 0; }))
        continue;
      std::set<Point> s_hits, t_hits;
      for (const auto& [i, y] : pos) {
        if (level.in_y(y)) s_hits.insert(y);
        if (level.in_y_prime(y)) t_hits.insert(y);
      }
      std::vector<Point> s_classes(s_hits.begin(), s_hits.end());
      std::vector<Point> t_classes(t_hits.begin(), t_hits.end());
      s_classes.push_back(kNowhere);
      t_classes.push_back(kNowhere);
      for (Point s : s_classes)
        for (Point t : t_classes) {
          const LenPair l = assemble_section(cf, pos, s, t, next).length();
          if (!fails_to_shrink(l, len.b)) continue;
          auto expand = [&](Point cls, const std::vector<Point>& all, const std::set<Point>& hits) {
            if (cls != kNowhere) return std::vector<Point>{cls};
            std::vector<Point> rest;
            for (Point p : all)
              if (!hits.count(p)) rest.push_back(p);
            return rest;
          };
          for (Point ss : expand(s, level.y(), s_hits))
            for (Point tt : expand(t, level.y_prime(), t_hits)) record(ss, tt, x, l);
        }
    }
  }

  z.members.reserve(found.size());
  for (auto& [key, member] : found) z.members.push_back(member);
  if (z.size() > z.bound)
    throw VerificationError("Z-set of " + std::to_string(z.size()) + " pairs exceeds the bound " +
                            std::to_string(z.bound) + " at level " + std::to_string(z.level));
  return z;
}

bool witness_holds(const ZSet& z, const ZSetMember& member, const LevelData& level,
                   const LevelData& next) {
  if (!level.in_y(member.s) || !level.in_y_prime(member.t)) return false;
  const auto cf = conjugate_form(z.word);
  const auto l =
      assemble_section(cf, stabilized_positions(cf, level, member.witness), member.s, member.t,
                       next)
          .length();
  return l == member.length && fails_to_shrink(l, z.word.len_b());
}

// ---------------------------------------------------------------------------

BigInt landau(unsigned n) {
  // best[k]: largest lcm of a partition of at most k; parts are powers of
  // distinct primes, padded with 1s
  std::vector<BigInt> best(n + 1, BigInt(1));
  std::vector<bool> composite(n + 1, false);
  for (unsigned p = 2; p <= n; ++p) {
    if (composite[p]) continue;
    for (unsigned q = 2 * p; q <= n; q += p) composite[q] = true;
    for (unsigned k = n; k >= p; --k)
      for (unsigned pe = p; pe <= k; pe *= p) {
        const BigInt candidate = best[k - pe] * pe;
        if (candidate > best[k]) best[k] = candidate;
        if (pe > n / p) break;
      }
  }
  return best[n];
}

LandauRow landau_bound_check(unsigned n) {
  if (n == 0) throw DomainError("landau is defined for n >= 1");
  LandauRow row;
  row.n = n;
  row.g = landau(n);
  BigInt factorial = 1;
  for (unsigned k = 2; k <= n; ++k) factorial *= k;
  row.estimate = Rational(factorial, BigInt(1) << (n - 1));
  row.holds = Rational(row.g) <= row.estimate;
  return row;
}

std::string rational_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

HypothesisRatio hypothesis_ratio(const LevelData& level) {
  HypothesisRatio h;
  h.level = level.index();
  h.n = level.quotient_order();
  h.y_size = level.y().size();
  h.y_prime_size = level.y_prime().size();
  h.m = level.max_element_order();
  const BigInt y = h.y_size, yp = h.y_prime_size;
  h.ratio = Rational(y * yp, BigInt(h.m) * (y + yp));
  const BigInt two_n = 2 * BigInt(h.n);
  h.bound = Rational(19 * (BigInt(1) << (2 * h.n + 1)),
                     20 * (two_n + 3) * (two_n + 2) * (two_n + 1));
  return h;
}

nlohmann::json HypothesisRatio::to_json() const {
  return {{"level", level},
          {"n", n},
          {"y_size", y_size},
          {"y_prime_size", y_prime_size},
          {"m", m},
          {"ratio", rational_string(ratio)},
          {"bound", rational_string(bound)},
          {"ratio_at_least_bound", ratio_at_least_bound()}};
}

}  // namespace branchforge
