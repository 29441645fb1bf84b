#include "branchforge/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "branchforge/error.hpp"

namespace branchforge {

Permutation::Permutation(std::size_t degree) : images_(degree) {
  if (degree == 0) throw DomainError("permutation degree must be positive");
  std::iota(images_.begin(), images_.end(), Point{0});
}

Permutation::Permutation(std::vector<Point> images) : images_(std::move(images)) {
  if (images_.empty()) throw DomainError("permutation degree must be positive");
  std::vector<bool> seen(images_.size(), false);
  for (Point y : images_) {
    if (y >= images_.size() || seen[y])
      throw DomainError("image list is not a bijection");
    seen[y] = true;
  }
}

Permutation Permutation::from_cycles(std::size_t degree,
                                     const std::vector<std::vector<Point>>& cycles) {
  std::vector<Point> images(degree);
  std::iota(images.begin(), images.end(), Point{0});
  std::vector<bool> touched(degree, false);
  for (const auto& cycle : cycles) {
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      Point x = cycle[i];
      if (x >= degree) throw DomainError("cycle point out of range");
      if (touched[x]) throw DomainError("cycles are not disjoint");
      touched[x] = true;
      images[x] = cycle[(i + 1) % cycle.size()];
    }
  }
  return Permutation(std::move(images));
}

Permutation Permutation::parse(std::string_view text, std::size_t degree) {
  std::vector<std::vector<Point>> cycles;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  if (i == text.size()) throw DomainError("empty permutation text");
  while (i < text.size()) {
    if (text[i] != '(')
      throw DomainError("expected '(' in permutation \"" + std::string(text) + "\"");
    ++i;
    std::vector<Point> cycle;
    for (;;) {
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i >= text.size())
        throw DomainError("unterminated cycle in \"" + std::string(text) + "\"");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw DomainError("unexpected character in \"" + std::string(text) + "\"");
      std::size_t value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + static_cast<std::size_t>(text[i] - '0');
        if (value > (std::size_t{1} << 31)) throw DomainError("point too large");
        ++i;
      }
      if (value == 0 || value > degree)
        throw DomainError("point " + std::to_string(value) + " outside 1.." +
                          std::to_string(degree));
      cycle.push_back(static_cast<Point>(value - 1));
    }
    if (cycle.size() > 1) cycles.push_back(std::move(cycle));
    skip_ws();
  }
  return from_cycles(degree, cycles);
}

bool Permutation::is_identity() const noexcept {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<Point> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
  return unchecked(std::move(inv));
}

Permutation Permutation::extended(std::size_t degree) const {
  if (degree < images_.size()) throw DomainError("cannot shrink a permutation");
  std::vector<Point> images(degree);
  std::iota(images.begin(), images.end(), Point{0});
  std::copy(images_.begin(), images_.end(), images.begin());
  return unchecked(std::move(images));
}

std::vector<std::size_t> Permutation::cycle_type() const {
  std::vector<std::size_t> lengths;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t start = 0; start < images_.size(); ++start) {
    if (seen[start]) continue;
    std::size_t len = 0;
    for (Point x = static_cast<Point>(start); !seen[x]; x = images_[x]) {
      seen[x] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  return lengths;
}

std::vector<std::vector<Point>> Permutation::cycles() const {
  std::vector<std::vector<Point>> out;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t start = 0; start < images_.size(); ++start) {
    if (seen[start] || images_[start] == start) continue;
    std::vector<Point> cycle;
    for (Point x = static_cast<Point>(start); !seen[x]; x = images_[x]) {
      seen[x] = true;
      cycle.push_back(x);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  std::uint64_t g = std::gcd(a, b);
  std::uint64_t q = a / g;
  if (q > UINT64_MAX / b) throw ResourceError("lcm overflows 64 bits");
  return q * b;
}

std::uint64_t Permutation::order() const {
  std::uint64_t result = 1;
  for (std::size_t len : cycle_type()) result = lcm_u64(result, len);
  return result;
}

bool Permutation::is_even() const {
  std::size_t transpositions = 0;
  for (std::size_t len : cycle_type()) transpositions += len - 1;
  return transpositions % 2 == 0;
}

Permutation Permutation::pow(long long exponent) const {
  Permutation base = exponent < 0 ? inverse() : *this;
  unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-exponent)
                                      : static_cast<unsigned long long>(exponent);
  e %= order();
  Permutation result(images_.size());
  while (e > 0) {
    if (e & 1u) result = compose(result, base);
    base = compose(base, base);
    e >>= 1u;
  }
  return result;
}

std::string Permutation::to_string() const {
  auto cs = cycles();
  if (cs.empty()) return "()";
  std::string out;
  for (const auto& cycle : cs) {
    out += '(';
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(cycle[i] + 1);
    }
    out += ')';
  }
  return out;
}

std::size_t Permutation::hash() const noexcept {
  // FNV-1a over the image array
  std::uint64_t h = 1469598103934665603ull;
  for (Point y : images_) {
    h ^= y;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

Permutation compose(const Permutation& p, const Permutation& q) {
  if (p.degree() != q.degree()) throw DomainError("degree mismatch in compose");
  std::vector<Point> images(p.degree());
  for (std::size_t x = 0; x < images.size(); ++x) images[x] = p(q(static_cast<Point>(x)));
  return Permutation::unchecked(std::move(images));
}

Permutation conjugate(const Permutation& p, const Permutation& q) {
  return compose(compose(p, q), p.inverse());
}

}  // namespace branchforge
