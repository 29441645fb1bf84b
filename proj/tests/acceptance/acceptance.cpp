// Acceptance run: one PASS/FAIL line per criterion, with timings.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "branchforge/error.hpp"
#include "branchforge/gamma.hpp"
#include "oracles.hpp"
#include "random_words.hpp"
#include "scenarios.hpp"

using namespace branchforge;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const std::string& title, double limit_s, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    v.pass = false;
    v.detail += "; over the " + std::to_string(static_cast<int>(limit_s)) + " s limit";
  }
  if (!v.pass) ++failures;
  char time[32];
  std::snprintf(time, sizeof time, "%.2f s", secs);
  std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << "  " << title << " ("
            << time << ")  " << v.detail << std::endl;
}

std::string fixture(const std::string& name) { return std::string(BRANCHFORGE_FIXTURES) + "/" + name; }

GroupChainSpec fixture_group(const std::string& name) {
  return GroupChainSpec::from_json(read_json_file(fixture(name)));
}

// Points of the two F-blocks of Alt(2n+3), 0-based: {2} u {5..n+3} and {3} u {n+4..2n+2}.
std::vector<std::vector<Point>> blocks(std::size_t n) {
  std::vector<Point> first{2}, second{3};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    first.push_back(static_cast<Point>(5 + i));
    second.push_back(static_cast<Point>(n + 4 + i));
  }
  return {first, second};
}

Verdict embeddings() {
  const std::vector<std::pair<std::string, FiniteGroupTable>> groups{
      {"C1", FiniteGroupTable::cyclic(1)},
      {"C2", FiniteGroupTable::cyclic(2)},
      {"C3", FiniteGroupTable::cyclic(3)},
      {"C2xC2", FiniteGroupTable::klein_four()}};
  std::ostringstream out;
  bool all = true;
  for (const auto& [name, table] : groups) {
    const auto images = embed_finite_group(table);
    const std::size_t n = table.order();
    bool even = images.size() == n, free = true;
    for (const auto& p : images) even = even && p.is_even() && p.degree() == 2 * n + 3;
    // free: each block is one regular orbit, and non-identity elements fix no block point
    for (const auto& block : blocks(n)) {
      std::set<Point> orbit;
      for (const auto& p : images) orbit.insert(p(block.front()));
      free = free && orbit == std::set<Point>(block.begin(), block.end());
      for (std::size_t f = 1; f < n; ++f)
        for (Point x : block) free = free && images[f](x) != x;
    }
    // faithful: the image map is a homomorphism with trivial kernel
    bool faithful = std::set<Permutation>(images.begin(), images.end()).size() == n;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        faithful = faithful && compose(images[a], images[b]) == images[table.multiply(
                                                                    static_cast<std::uint32_t>(a),
                                                                    static_cast<std::uint32_t>(b))];
    const bool alt = verify_altalt(images, n);
    const bool ok = even && free && faithful && alt;
    all = all && ok;
    out << name << (ok ? " ok" : " BAD") << "; ";
  }
  return {all, out.str()};
}

Verdict level_data() {
  const auto one = build_level_data(fixture_group("trivial.json"), 0, 1);
  const auto two = build_level_data(fixture_group("c2.json"), 0, 1);
  const bool ok = one.x_size() == 20 && one.y_prime().size() == 1 && one.y().size() == 18 &&
                  one.sigma().order() == 3 && two.x_size() == 840 && two.y_prime().size() == 23 &&
                  BigInt(one.y_prime().size()) == one.y_prime_formula() &&
                  BigInt(two.y_prime().size()) == two.y_prime_formula();
  std::ostringstream out;
  out << "n=1: |X|=" << one.x_size() << " |Y|=" << one.y().size()
      << " |Y'|=" << one.y_prime().size() << " |St(o)|=" << one.sigma().order()
      << "; n=2: |X|=" << two.x_size() << " |Y|=" << two.y().size()
      << " |Y'|=" << two.y_prime().size() << "; printed |Y| formula gives "
      << one.printed_y_formula() << " and " << two.printed_y_formula()
      << " against enumerated " << one.y().size() << " and " << two.y().size();
  return {ok, out.str()};
}

Verdict section_calculus() {
  auto ctx = bftest::make_context(fixture_group("trivial.json"), 6);
  std::mt19937_64 rng(2024);
  constexpr int kWords = 500, kDepth = 3;
  int bad = 0;
  for (int trial = 0; trial < kWords; ++trial) {
    const auto g = bftest::random_tree_word(*ctx, 1, rng, 6);
    const auto h = bftest::random_tree_word(*ctx, 1, rng, 6);
    // h(uv) = h(u) h|_u(v) on vertices of length kDepth + 1
    const auto v = bftest::random_vertex(ctx->shape(), 1, kDepth + 1, rng);
    const auto image = ctx->apply(g, v);
    for (std::size_t cut = 1; cut < v.size(); ++cut) {
      Vertex u(v.begin(), v.begin() + static_cast<long>(cut));
      Vertex rest(v.begin() + static_cast<long>(cut), v.end());
      auto lhs = ctx->apply(g, u);
      const auto tail = ctx->apply(ctx->section(g, u), rest);
      lhs.insert(lhs.end(), tail.begin(), tail.end());
      bad += lhs != image;
    }
    // (gh)|_u = g|_{h(u)} h|_u
    const auto u = bftest::random_vertex(ctx->shape(), 1, 1 + rng() % 2, rng);
    bad += !ctx->equal_up_to_depth(
        ctx->section(ctx->compose(g, h), u),
        ctx->compose(ctx->section(g, ctx->apply(h, u)), ctx->section(h, u)), kDepth);
    // (h g h^-1)|_x = h|_{g h^-1 x} g|_{h^-1 x} h^-1|_x
    const Point x = static_cast<Point>(rng() % ctx->shape().level(1).x_size());
    const auto hinv = ctx->inverse(h);
    const Point hx = ctx->apply_root(hinv, x);
    const Point ghx = ctx->apply_root(g, hx);
    bad += !ctx->equal_up_to_depth(
        ctx->section(ctx->compose(ctx->compose(h, g), hinv), x),
        ctx->compose(ctx->compose(ctx->section(h, ghx), ctx->section(g, hx)), ctx->section(hinv, x)),
        kDepth);
    // g||_u||_v = g||_{uv}
    const auto uv = bftest::random_vertex(ctx->shape(), 1, 2, rng);
    const auto nested = ctx->stabilized_section(ctx->stabilized_section(g, {uv[0]}), {uv[1]});
    bad += !ctx->equal_up_to_depth(nested, ctx->stabilized_section(g, uv), kDepth);
  }
  return {bad == 0, std::to_string(kWords) + " word pairs at depth 3, " +
                             std::to_string(bad) + " failures"};
}

Verdict length_bookkeeping() {
  auto s = make_scenario(fixture_group("trivial.json"), 3);
  const auto& level = s.shape().level(1);
  std::mt19937_64 rng(7);
  int bad = 0;
  constexpr int kWords = 1000;
  for (int trial = 0; trial < kWords; ++trial) {
    const auto w = bftest::random_word(rng, level, rng() % 5);
    std::size_t total = 0;
    for (Point x = 0; x < level.x_size(); ++x) {
      total += section_word(w, x, s.shape(), s.spine()).len_b();
      bad += stabilized_section_word(w, {x}, s.shape(), s.spine()).len_b() > w.len_b();
    }
    bad += total > w.len_b();
  }
  return {bad == 0, std::to_string(kWords) + " words, " + std::to_string(bad) +
                             " violations"};
}

Verdict zset_bound() {
  auto s = make_scenario(fixture_group("trivial.json"), 2);
  const auto& level = s.shape().level(1);
  const auto& next = s.shape().level(2);
  std::mt19937_64 rng(11);
  int words = 0, violations = 0;
  std::size_t largest = 0;
  while (words < 200) {
    const auto w = bftest::random_word(rng, level, 1 + rng() % 3);
    if (w.length() <= kShortLength) continue;
    const auto z = z_set(w, level, next, ZSetMode::Exhaustive);
    const std::size_t bound = w.len_b() * 5 * (18 + 1);
    violations += z.size() > bound || z.bound != bound;
    largest = std::max(largest, z.size());
    ++words;
  }
  return {violations == 0, std::to_string(words) + " words over 18 pairs x 20 vertices, largest |Z| = " +
                               std::to_string(largest) + ", " + std::to_string(violations) +
                               " violations"};
}

Verdict landau_check() {
  std::ostringstream out;
  bool match = true;
  for (unsigned n = 1; n <= 20; ++n) match = match && landau(n) == bftest::landau_brute_force(n);
  out << "g(n) = brute force for n <= 20: " << (match ? "yes" : "NO");
  std::vector<unsigned> bad;
  for (unsigned n = 1; n <= 12; ++n) {
    // n! / 2^(n-1) compared exactly as g(n) * 2^(n-1) <= n!
    BigInt fact = 1;
    for (unsigned k = 2; k <= n; ++k) fact *= k;
    const bool holds = BigInt(bftest::landau_brute_force(n)) * (BigInt(1) << (n - 1)) <= fact;
    if (holds != landau_bound_check(n).holds) match = false;
    if (!holds) bad.push_back(n);
  }
  out << "; g(n) <= n!/2^(n-1) fails for n =";
  for (std::size_t i = 0; i < bad.size(); ++i) out << (i ? ", " : " ") << bad[i];
  if (bad.empty()) out << " none";
  for (unsigned n : bad) {
    const auto row = landau_bound_check(n);
    out << "; g(" << n << ") = " << row.g << " > " << rational_string(row.estimate);
  }
  return {match && bad.empty(), out.str()};
}

Verdict ratio_check() {
  const auto level = build_level_data(fixture_group("trivial.json"), 0, 1);
  const auto h = hypothesis_ratio(level);
  // |Y||Y'| / (m (|Y| + |Y'|)) and 19 * 2^(2n+1) / (20 (2n+3)(2n+2)(2n+1)) at n = 1
  const Rational expected_ratio(18 * 1, 5 * (18 + 1));
  const Rational expected_bound(19 * 8, 20 * 5 * 4 * 3);
  const bool ok = h.ratio == expected_ratio && h.bound == expected_bound && h.ratio >= h.bound &&
                  rational_string(h.ratio) == "18/95" && rational_string(h.bound) == "19/150";
  return {ok, "ratio " + rational_string(h.ratio) + " >= bound " + rational_string(h.bound)};
}

Verdict shrinking_search() {
  auto s = make_scenario(fixture_group("mixed.json"), 6, std::nullopt, "mixed");
  std::mt19937_64 rng(5);
  std::vector<FPWord> words;
  while (words.size() < 10) words.push_back(bftest::random_word(rng, s.shape().level(1), 1 + rng() % 2));
  ShrinkOptions options;
  options.scenario_id = s.id;
  const auto cert = greedy_shrinking_prefix(words, s.shape(), 5, options);
  const auto dump = cert.to_json(s.g_names()).dump();
  const auto again = greedy_shrinking_prefix(words, s.shape(), 5, options).to_json(s.g_names()).dump();
  const auto replay = replay_certificate(nlohmann::json::parse(dump), s.shape(), s.g_names());
  std::string detail = std::string(cert.complete ? "complete" : "incomplete") + ", replay " +
                       (replay.ok ? "ok" : "MISMATCH") + ", rerun " +
                       (dump == again ? "identical" : "DIFFERS");
  for (const auto& m : replay.mismatches) detail += "; " + m;
  return {cert.complete && replay.ok && dump == again, detail};
}

Verdict wreath_identities() {
  auto s = make_scenario(fixture_group("trivial.json"), 4);
  const auto report = verify_wreath_identities(s, 1, 3);
  std::string detail;
  for (const auto& c : report.checks) detail += c.name + (c.pass ? " ok; " : " FAILED; ");
  return {report.checks.size() == 4 && report.all_pass(), detail};
}

Verdict torsion() {
  const auto group = fixture_group("c2.json");
  constexpr int kBudget = 6, kDepth = 4, kWords = 50;
  auto base = make_scenario(group, kBudget + 1);
  std::mt19937_64 rng(31);
  std::vector<FPWord> words;
  while (words.size() < kWords) words.push_back(bftest::random_word(rng, base.shape().level(1), rng() % 4));

  // the spine comes from a shrinking certificate for these words
  ShrinkOptions options;
  options.scenario_id = "c2";
  const auto shrink = greedy_shrinking_prefix(words, base.shape(), kBudget, options);
  nlohmann::json doc{{"id", "c2-certified"},
                     {"group", group.to_json()},
                     {"horizon", kBudget + 1},
                     {"certificate", shrink.to_json(base.g_names())}};
  auto s = load_scenario(doc);

  int complete = 0, verified = 0;
  std::set<std::string> orders;
  for (const auto& w : words) {
    const auto cert = certify_finite_order(w, s, kBudget, kDepth);
    complete += cert.complete;
    verified += cert.complete && cert.verified;
    if (cert.complete) orders.insert(cert.truncated_order.str());
  }
  std::string detail = "shrink certificate " + std::string(shrink.complete ? "complete" : "incomplete") +
                       ", " + std::to_string(complete) + "/" + std::to_string(kWords) +
                       " complete, " + std::to_string(verified) + " with w^N trivial to depth 4; orders seen:";
  for (const auto& o : orders) detail += " " + o;
  return {shrink.complete && complete == kWords && verified == kWords, detail};
}

}  // namespace

int main() {
  report(1, "embedding of C1, C2, C3, C2xC2 into Alt(2n+3)", 60, embeddings);
  report(2, "level data for n = 1, 2", 10, level_data);
  report(3, "section calculus", 120, section_calculus);
  report(4, "length bookkeeping of sections", 0, length_bookkeeping);
  report(5, "Z-set bound, exhaustive", 60, zset_bound);
  report(6, "Landau function and the estimate n!/2^(n-1)", 0, landau_check);
  report(7, "counting ratio at n = 1", 0, ratio_check);
  report(8, "greedy shrinking prefix, mixed scenario", 0, shrinking_search);
  report(9, "wreath identities at depth 3, n = 1", 0, wreath_identities);
  report(10, "order certificates for G = C2", 600, torsion);
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
