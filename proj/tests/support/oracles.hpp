#pragma once

#include <cstdint>
#include <numeric>

namespace bftest {

/// Largest lcm over all partitions of n, by direct enumeration of the
/// partitions (parts non-increasing).
inline std::uint64_t landau_brute_force(unsigned n) {
  std::uint64_t best = 1;
  auto walk = [&](auto&& self, unsigned left, unsigned max_part, std::uint64_t l) -> void {
    if (left == 0) {
      best = std::max(best, l);
      return;
    }
    for (unsigned part = std::min(left, max_part); part >= 1; --part)
      self(self, left - part, part, std::lcm(l, static_cast<std::uint64_t>(part)));
  };
  walk(walk, n, n, 1);
  return best;
}

}  // namespace bftest
