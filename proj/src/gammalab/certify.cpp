#include <algorithm>
#include <boost/integer/common_factor.hpp>
#include <limits>

#include "branchforge/error.hpp"
#include "branchforge/gamma.hpp"

namespace branchforge {

// ---------------------------------------------------------------------------
// Wreath identities

bool WreathReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.pass; });
}

nlohmann::json WreathReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks)
    list.push_back({{"identity", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"level", level}, {"depth", depth}, {"pass", all_pass()}, {"checks", std::move(list)}};
}

namespace {

TreeAut commutator(TreeContext& ctx, const TreeAut& x, const TreeAut& y) {
  return ctx.compose(ctx.compose(ctx.inverse(x), ctx.inverse(y)), ctx.compose(x, y));
}

TreeAut conjugate_by(TreeContext& ctx, const TreeAut& a, const TreeAut& x) {
  return ctx.compose(ctx.compose(a, x), ctx.inverse(a));
}

}  // namespace

WreathReport verify_wreath_identities(GammaScenario& s, int j, int depth) {
  auto& ctx = *s.ctx;
  if (depth < 1 || j + depth > s.horizon)
    throw ConfigError("wreath check at level " + std::to_string(j) + " to depth " +
                      std::to_string(depth) + " needs horizon " + std::to_string(j + depth));
  const auto& level = s.shape().level(j);
  const auto& next = s.shape().level(j + 1);
  const Point alpha = s.spine().alpha[j - 1];
  const Point beta = s.spine().beta[j - 1];
  WreathReport report;
  report.level = j;
  report.depth = depth;

  // (i) St(o) = <sigma>; search it for an element moving alpha
  std::optional<Permutation> a;
  for (Permutation cand = level.sigma(); !cand.is_identity(); cand = compose(cand, level.sigma()))
    if (level.act(cand, alpha) != alpha) {
      a = cand;
      break;
    }
  if (!a)
    throw PreconditionError("no element of St(o) moves alpha_" + std::to_string(j) + " = " +
                            std::to_string(alpha) + "; o and alpha share a stabilizer");
  report.checks.push_back({"stabilizer_moves_alpha", true,
                           {{"a", a->to_string()},
                            {"alpha", alpha},
                            {"a_alpha", level.act(*a, alpha)}}});

  const TreeAut a_tree = ctx.rooted(*a, j);
  const auto& qs = q_generators();

  // (ii) commutator trick, every ordered pair of Q generators
  {
    bool pass = true;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& p : qs)
      for (const auto& q : qs) {
        const auto lhs = commutator(ctx, conjugate_by(ctx, a_tree, ctx.directed_q(p, j)),
                                    ctx.directed_q(q, j));
        const auto rhs =
            ctx.embed(j, level.o(),
                      commutator(ctx, ctx.directed_q(p, j + 1), ctx.directed_q(q, j + 1)));
        const bool ok = ctx.equal_up_to_depth(lhs, rhs, depth);
        pass = pass && ok;
        pairs.push_back({{"p", p.to_string()}, {"q", q.to_string()}, {"pass", ok}});
      }
    report.checks.push_back({"commutator_at_o", pass, {{"pairs", std::move(pairs)}}});
  }

  // (iii) q~_j (q~_{j+1} at o)^-1 lives on the alpha subtree only
  {
    bool pass = true;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& q : qs) {
      const auto lhs = ctx.compose(ctx.directed_q(q, j),
                                   ctx.inverse(ctx.embed(j, level.o(), ctx.directed_q(q, j + 1))));
      const auto rhs = ctx.embed(j, alpha, ctx.rooted(next.q_natural(q), j + 1));
      const bool ok = ctx.equal_up_to_depth(lhs, rhs, depth);
      std::vector<Point> support;
      for (Point x : ctx.support(lhs))
        if (!ctx.is_identity_up_to_depth(ctx.section(lhs, x), depth - 1)) support.push_back(x);
      const bool single = support.size() == 1 && support.front() == alpha;
      pass = pass && ok && single;
      rows.push_back({{"q", q.to_string()}, {"support", support}, {"pass", ok && single}});
    }
    report.checks.push_back({"rooted_q_at_alpha", pass, {{"generators", std::move(rows)}}});
  }

  // (iv) peel g~_j down to g~_{j+1} at o
  {
    bool pass = true;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t g = 0; g < s.group.generators.size(); ++g) {
      const GWord gw = GWord::generator(g);
      const auto k = ctx.embed(j, beta, ctx.rooted(next.g_natural(gw), j + 1));
      const auto lhs = ctx.compose(ctx.inverse(k), ctx.directed_g(gw, j));
      const auto rhs = ctx.embed(j, level.o(), ctx.directed_g(gw, j + 1));
      const bool ok = ctx.equal_up_to_depth(lhs, rhs, depth);
      pass = pass && ok;
      rows.push_back({{"g", s.group.generators[g]}, {"pass", ok}});
    }
    report.checks.push_back({"directed_g_at_o", pass, {{"generators", std::move(rows)}}});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Order certificates

namespace {

struct FrontierEntry {
  FPWord word;
  std::uint64_t orbit = 1;
  friend bool operator==(const FrontierEntry&, const FrontierEntry&) = default;
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    throw ResourceError("orbit length overflows 64 bits");
  return a * b;
}

/// Stabilized sections at every vertex one level down, tagged with the
/// accumulated orbit length; duplicates merged.
std::vector<FrontierEntry> descend(const std::vector<FrontierEntry>& frontier, int level,
                                   const TreeShape& shape, const SpinePair& spine) {
  const auto& data = shape.level(level);
  std::vector<FrontierEntry> out;
  for (const auto& [u, orbit] : frontier) {
    const auto root = data.on_x(conjugate_form(u).a);
    for (Point x = 0; x < data.x_size(); ++x) {
      std::uint64_t len = 1;
      for (Point y = (*root)(x); y != x; y = (*root)(y)) ++len;
      FrontierEntry e{stabilized_section_word(u, {x}, shape, spine), checked_mul(orbit, len)};
      if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
    }
  }
  return out;
}

std::uint64_t order_in_quotient(const GroupChainSpec& group, std::size_t quotient, const GWord& g) {
  const auto& q = group.quotients.at(quotient);
  Permutation p(q.degree);
  for (int l : g.letters()) {
    const auto& img = q.images.at(static_cast<std::size_t>(std::abs(l) - 1));
    p = compose(p, l > 0 ? img : img.inverse());
  }
  return p.order();
}

}  // namespace

nlohmann::json OrderCertificate::to_json(const std::vector<std::string>& g_names) const {
  nlohmann::json res = nlohmann::json::array();
  for (const auto& r : residuals)
    res.push_back({{"section", r.vertex_class},
                   {"orbit", r.orbit},
                   {"g", render_g_word(r.g, g_names)},
                   {"order", r.order}});
  nlohmann::json doc{{"word", word.to_dsl(g_names)},
                     {"complete", complete},
                     {"budget", budget},
                     {"finite_g", finite_g},
                     {"verification_depth", verification_depth},
                     {"verified", verified}};
  if (complete) {
    doc["level"] = level;
    doc["m"] = m.str();
    doc["e"] = e.str();
    doc["residuals"] = std::move(res);
    doc["order_multiple"] = order_multiple.str();
    doc["truncated_order"] = truncated_order.str();
  }
  return doc;
}

OrderCertificate certify_finite_order(const FPWord& w, GammaScenario& s, int budget,
                                      int verification_depth) {
  if (w.level() != 1) throw DomainError("order certificates are for words at level 1");
  if (budget < 0 || budget + 1 > s.horizon)
    throw ConfigError("budget " + std::to_string(budget) + " needs horizon " +
                      std::to_string(budget + 1));
  if (verification_depth < 0 || 1 + verification_depth > s.horizon)
    throw ConfigError("verification depth " + std::to_string(verification_depth) +
                      " exceeds the horizon");
  const auto& shape = s.shape();
  const auto& names = s.g_names();
  OrderCertificate cert;
  cert.word = w;
  cert.budget = budget;
  cert.finite_g = s.group.faithful_quotient.has_value();
  cert.verification_depth = verification_depth;

  std::vector<FrontierEntry> frontier{{w, 1}};
  auto all_short = [&] {
    return std::all_of(frontier.begin(), frontier.end(),
                       [](const FrontierEntry& f) { return f.word.length() <= kShortLength; });
  };
  int k = 0;
  while (!all_short()) {
    if (k == budget) return cert;
    frontier = descend(frontier, k + 1, shape, s.spine());
    ++k;
  }
  cert.complete = true;
  cert.level = k;

  std::uint64_t m = 1;
  for (const auto& f : frontier) m = boost::integer::lcm(m, f.orbit);
  cert.m = m;
  cert.e = boost::integer::lcm(kQExponent, shape.level(k + 1).exponent());
  const std::size_t quotient =
      cert.finite_g ? *s.group.faithful_quotient : s.group.quotient_index_for_level(k + 1);

  BigInt residual_lcm = 1;
  for (const auto& f : frontier) {
    const BigInt p = cert.m * cert.e / f.orbit;
    if (p > std::numeric_limits<long long>::max()) throw ResourceError("exponent overflow");
    const FPWord r = f.word.power(static_cast<long long>(p));
    if (!r.empty() && !r.only_g_letters())
      throw VerificationError("section " + f.word.to_dsl(names) + " raised to " + p.str() +
                              " is not a G-letter");
    ResidualLetter letter;
    letter.vertex_class = f.word.to_dsl(names);
    letter.orbit = f.orbit;
    if (!r.empty()) letter.g = std::get<BLetter>(r.letters().front()).g;
    letter.order = order_in_quotient(s.group, quotient, letter.g);
    residual_lcm = boost::integer::lcm(residual_lcm, BigInt(letter.order));
    cert.residuals.push_back(std::move(letter));
  }
  cert.order_multiple = cert.m * cert.e * residual_lcm;

  auto& ctx = *s.ctx;
  const TreeAut g = evaluate(w, ctx);
  cert.truncated_order = ctx.truncated_order(g, verification_depth);
  if (cert.finite_g) {
    if (cert.order_multiple > std::numeric_limits<long long>::max())
      throw ResourceError("order multiple " + cert.order_multiple.str() + " exceeds 64 bits");
    const auto n = static_cast<long long>(cert.order_multiple);
    cert.verified = ctx.is_identity_up_to_depth(ctx.power(g, n), verification_depth) &&
                    cert.order_multiple % cert.truncated_order == 0;
  } else {
    // w^(m e) fixes the first k levels; its sections there are G-letters
    const auto me = static_cast<long long>(cert.m * cert.e);
    cert.verified = k == 0 || ctx.is_identity_up_to_depth(ctx.power(g, me), k - 1);
  }
  return cert;
}

bool verify_order_certificate(const nlohmann::json& certificate, GammaScenario& s) {
  try {
    const auto w = parse_word(certificate.at("word").get<std::string>(), 1, s.shape(), s.g_names());
    const auto again = certify_finite_order(w, s, certificate.at("budget").get<int>(),
                                            certificate.at("verification_depth").get<int>());
    return again.verified && again.to_json(s.g_names()).dump() == certificate.dump();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed order certificate: ") + e.what());
  }
}

}  // namespace branchforge
