#include "branchforge/perm_group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "branchforge/error.hpp"

namespace branchforge {

Permutation ChainLevel::transversal(Point x) const {
  Permutation result(label.size());
  for (Point y = x; label[y] != -2;) {
    const Permutation& g = generators[static_cast<std::size_t>(label[y])];
    result = compose(result, g);
    y = inverses[static_cast<std::size_t>(label[y])](y);
  }
  return result;
}

Permutation ChainLevel::strip(const Permutation& h, Point x) const {
  std::vector<Point> images(h.images().begin(), h.images().end());
  for (Point y = x; label[y] != -2;) {
    const Permutation& ginv = inverses[static_cast<std::size_t>(label[y])];
    for (auto& v : images) v = ginv(v);
    y = ginv(y);
  }
  return Permutation::unchecked(std::move(images));
}

namespace {

Point smallest_moved_point(const Permutation& g) {
  for (Point x = 0; x < g.degree(); ++x)
    if (g(x) != x) return x;
  return static_cast<Point>(g.degree());
}

}  // namespace

StabilizerChain::StabilizerChain(std::size_t degree, std::span<const Permutation> generators,
                                 std::span<const Point> base_prefix)
    : degree_(degree) {
  for (Point b : base_prefix) {
    if (b >= degree) throw DomainError("base point out of range");
    add_level(b);
  }
  for (const auto& g : generators) {
    if (g.degree() != degree) throw DomainError("generator degree mismatch");
    if (g.is_identity()) continue;
    auto [residue, stop] = sift(g);
    if (residue.is_identity()) continue;
    add_generator(0, g);
  }

  // Each level checks its Schreier generators, restarting at the deepest
  // level touched whenever a sift leaves a nontrivial residue.
  std::vector<std::vector<std::vector<char>>> checked;
  auto ensure_checked = [&](std::size_t level) {
    if (checked.size() < levels_.size()) checked.resize(levels_.size());
    auto& c = checked[level];
    if (c.size() < levels_[level].generators.size())
      c.resize(levels_[level].generators.size(), std::vector<char>(degree_, 0));
  };

  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(levels_.size()) - 1;
  while (i >= 0) {
    const auto li = static_cast<std::size_t>(i);
    ensure_checked(li);
    bool restarted = false;
    for (std::size_t oi = 0; oi < levels_[li].orbit.size() && !restarted; ++oi) {
      for (std::size_t si = 0; si < levels_[li].generators.size(); ++si) {
        ensure_checked(li);
        const ChainLevel& level = levels_[li];
        Point beta = level.orbit[oi];
        if (checked[li][si][beta]) continue;
        checked[li][si][beta] = 1;
        const Permutation& s = level.generators[si];
        Permutation h = level.strip(compose(s, level.transversal(beta)), s(beta));
        // sift through deeper levels only
        std::size_t stop = li + 1;
        while (stop < levels_.size()) {
          const ChainLevel& next = levels_[stop];
          Point b = h(next.base);
          if (!next.in_orbit(b)) break;
          h = next.strip(h, b);
          ++stop;
        }
        if (h.is_identity()) continue;
        add_generator(li + 1, h);
        i = static_cast<std::ptrdiff_t>(std::min(stop, levels_.size() - 1));
        restarted = true;
        break;
      }
    }
    if (!restarted) --i;
  }
}

void StabilizerChain::add_level(Point base) {
  ChainLevel level;
  level.base = base;
  level.label.assign(degree_, -1);
  level.label[base] = -2;
  level.orbit.push_back(base);
  levels_.push_back(std::move(level));
}

void StabilizerChain::rebuild_orbit(ChainLevel& level) const {
  for (std::size_t k = 0; k < level.orbit.size(); ++k) {
    Point x = level.orbit[k];
    for (std::size_t gi = 0; gi < level.generators.size(); ++gi) {
      Point y = level.generators[gi](x);
      if (level.label[y] == -1) {
        level.label[y] = static_cast<std::int32_t>(gi);
        level.orbit.push_back(y);
      }
    }
  }
}

void StabilizerChain::add_generator(std::size_t from, const Permutation& g) {
  // g fixes the base points of levels < from; it joins every level from
  // `from` down to the first level whose base point it moves.
  std::size_t l = from;
  for (;; ++l) {
    if (l == levels_.size()) add_level(smallest_moved_point(g));
    ChainLevel& level = levels_[l];
    level.generators.push_back(g);
    level.inverses.push_back(g.inverse());
    rebuild_orbit(level);
    if (g(level.base) != level.base) break;
  }
}

std::vector<Point> StabilizerChain::base() const {
  std::vector<Point> out;
  for (const auto& l : levels_) out.push_back(l.base);
  return out;
}

BigInt StabilizerChain::order() const {
  BigInt result = 1;
  for (const auto& l : levels_) result *= l.orbit.size();
  return result;
}

std::pair<Permutation, std::size_t> StabilizerChain::sift(const Permutation& g) const {
  Permutation h = g;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    Point b = h(levels_[i].base);
    if (!levels_[i].in_orbit(b)) return {h, i};
    h = levels_[i].strip(h, b);
  }
  return {h, levels_.size()};
}

bool StabilizerChain::contains(const Permutation& g) const {
  if (g.degree() != degree_) return false;
  auto [residue, stop] = sift(g);
  return stop == levels_.size() && residue.is_identity();
}

PermGroup::PermGroup(std::size_t degree, std::vector<Permutation> generators,
                     std::size_t degree_cap)
    : degree_(degree), generators_(std::move(generators)), cache_(std::make_shared<Cache>()) {
  if (degree == 0) throw DomainError("group degree must be positive");
  if (degree > degree_cap)
    throw ResourceError("degree " + std::to_string(degree) + " exceeds cap " +
                        std::to_string(degree_cap));
  for (const auto& g : generators_)
    if (g.degree() != degree) throw DomainError("generator degree mismatch");
  if (generators_.empty()) generators_.emplace_back(degree);
}

const StabilizerChain& PermGroup::chain() const {
  std::call_once(cache_->once, [this] { cache_->chain.emplace(degree_, generators_); });
  return *cache_->chain;
}

bool PermGroup::has_cached_chain() const { return cache_->chain.has_value(); }

std::vector<Point> orbit(const PermGroup& group, Point point) {
  if (point >= group.degree())
    throw DomainError("point " + std::to_string(point) + " outside domain of size " +
                      std::to_string(group.degree()));
  std::vector<char> seen(group.degree(), 0);
  std::vector<Point> out{point};
  seen[point] = 1;
  for (std::size_t k = 0; k < out.size(); ++k)
    for (const auto& g : group.generators()) {
      Point y = g(out[k]);
      if (!seen[y]) {
        seen[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

BigInt group_order(const PermGroup& group) { return group.order(); }

bool is_transitive(const PermGroup& group) {
  return orbit(group, 0).size() == group.degree();
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

BigInt alternating_order(unsigned n) { return n < 2 ? BigInt(1) : factorial(n) / 2; }

bool generates_alternating(std::span<const Permutation> gens, std::size_t n) {
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].degree() != n)
      throw PreconditionError("generator " + std::to_string(i) + " has degree " +
                              std::to_string(gens[i].degree()) + ", expected " +
                              std::to_string(n));
    if (!gens[i].is_even())
      throw PreconditionError("generator " + std::to_string(i) + " " + gens[i].to_string() +
                              " is odd");
  }
  PermGroup g(n, std::vector<Permutation>(gens.begin(), gens.end()));
  return g.order() == alternating_order(static_cast<unsigned>(n));
}

PermGroup stabilizer_gens(const PermGroup& group, Point point) {
  if (point >= group.degree()) throw DomainError("stabilizer point out of range");
  const Point prefix[] = {point};
  StabilizerChain chain(group.degree(), group.generators(), prefix);
  std::vector<Permutation> gens;
  if (chain.levels().size() > 1) gens = chain.levels()[1].generators;
  return PermGroup(group.degree(), std::move(gens));
}

std::vector<Permutation> enumerate_elements(const PermGroup& group, std::size_t cap) {
  std::vector<Permutation> out{Permutation(group.degree())};
  std::unordered_set<Permutation> seen{out.front()};
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (const auto& g : group.generators()) {
      Permutation h = compose(g, out[k]);
      if (seen.insert(h).second) {
        if (out.size() >= cap)
          throw ResourceError("group has more than " + std::to_string(cap) + " elements");
        out.push_back(std::move(h));
      }
    }
  }
  return out;
}

std::vector<std::vector<unsigned>> partitions(unsigned n) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> current;
  auto rec = [&](auto&& self, unsigned remaining, unsigned max_part) -> void {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (unsigned p = std::min(remaining, max_part); p >= 1; --p) {
      current.push_back(p);
      self(self, remaining - p, p);
      current.pop_back();
    }
  };
  rec(rec, n, n);
  return out;
}

std::vector<std::vector<unsigned>> even_cycle_types(unsigned n) {
  std::vector<std::vector<unsigned>> out;
  for (auto& p : partitions(n)) {
    unsigned even_parts = 0;
    for (unsigned part : p) even_parts += (part % 2 == 0);
    if (even_parts % 2 == 0) out.push_back(std::move(p));
  }
  return out;
}

namespace {

std::uint64_t lcm_of(const std::vector<unsigned>& parts) {
  std::uint64_t r = 1;
  for (unsigned p : parts) r = lcm_u64(r, p);
  return r;
}

}  // namespace

std::uint64_t max_order_alternating(unsigned n) {
  std::uint64_t best = 1;
  for (const auto& t : even_cycle_types(n)) best = std::max(best, lcm_of(t));
  return best;
}

std::uint64_t exponent_alternating(unsigned n) {
  std::uint64_t e = 1;
  for (const auto& t : even_cycle_types(n)) e = lcm_u64(e, lcm_of(t));
  return e;
}

std::uint64_t max_element_order(const PermGroup& group, const MaxOrderOptions& opts) {
  const auto n = static_cast<unsigned>(group.degree());
  const BigInt order = group.order();
  if (n >= 2 && order == alternating_order(n)) return max_order_alternating(n);
  if (n >= 2 && order == factorial(n)) {
    std::uint64_t best = 1;
    for (const auto& p : partitions(n)) best = std::max(best, lcm_of(p));
    return best;
  }
  if (order > opts.element_cap)
    throw ResourceError("group of order " + order.str() +
                        " is not a natural Alt/Sym and exceeds the element cap " +
                        std::to_string(opts.element_cap));
  std::uint64_t best = 1;
  for (const auto& g : enumerate_elements(group, opts.element_cap))
    best = std::max(best, g.order());
  return best;
}

PermGroup derived_subgroup(const PermGroup& group) {
  const auto& gens = group.generators();
  std::vector<Permutation> normal_gens;
  for (const auto& a : gens)
    for (const auto& b : gens) {
      Permutation c = compose(compose(a.inverse(), b.inverse()), compose(a, b));
      if (!c.is_identity()) normal_gens.push_back(std::move(c));
    }
  if (normal_gens.empty()) return PermGroup::trivial(group.degree());
  // normal closure: add conjugates until the subgroup is stable
  for (;;) {
    PermGroup current(group.degree(), normal_gens);
    const auto& chain = current.chain();
    std::vector<Permutation> added;
    for (const auto& g : gens)
      for (const auto& c : current.generators()) {
        Permutation d = conjugate(g, c);
        if (!chain.contains(d)) {
          added.push_back(std::move(d));
          break;
        }
      }
    if (added.empty()) return current;
    for (auto& d : added) normal_gens.push_back(std::move(d));
  }
}

std::vector<Permutation> alternating_generators(unsigned n) {
  if (n < 3) return {Permutation(std::max(n, 1u))};
  std::vector<Point> three{0, 1, 2};
  std::vector<Point> long_cycle;
  for (Point x = (n % 2 == 1) ? 0 : 1; x < n; ++x) long_cycle.push_back(x);
  return {Permutation::from_cycles(n, {three}), Permutation::from_cycles(n, {long_cycle})};
}

}  // namespace branchforge
