#include <gtest/gtest.h>

#include <random>

#include "branchforge/error.hpp"
#include "branchforge/fp_word.hpp"
#include "random_perm.hpp"
#include "random_words.hpp"
#include "scenarios.hpp"

using namespace branchforge;

namespace {

class FPWordTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { ctx_ = bftest::make_context(bftest::trivial_spec(), 5); }
  static void TearDownTestSuite() { ctx_.reset(); }

  TreeContext& ctx() { return *ctx_; }
  const TreeShape& shape() { return ctx_->shape(); }
  const LevelData& level1() { return shape().level(1); }
  Permutation a_letter(const char* cycles) { return Permutation::parse(cycles, 5); }
  FPWord word(std::vector<Letter> raw) { return normal_form(1, 5, std::move(raw)); }

  static std::shared_ptr<TreeContext> ctx_;
};

std::shared_ptr<TreeContext> FPWordTest::ctx_;

BLetter b_letter(const char* q, std::vector<int> g = {}) {
  return {Permutation::parse(q, 5), GWord(std::move(g))};
}

}  // namespace

TEST_F(FPWordTest, NormalFormExamples) {
  const auto a = a_letter("(1 2 3)");
  EXPECT_EQ(word({a, a.inverse()}).length(), (LenPair{0, 0}));
  EXPECT_TRUE(word({a, a.inverse()}).empty());

  const auto b1 = b_letter("(1 2 3)"), b2 = b_letter("(3 4 5)");
  const auto merged = word({b1, b2});
  EXPECT_EQ(merged.length(), (LenPair{1, 0}));
  EXPECT_EQ(std::get<BLetter>(merged.letters().front()), b1 * b2);

  const auto a2 = a_letter("(1 4)(2 5)");
  const auto w = word({a, b1, a2});
  EXPECT_EQ(w.length(), (LenPair{1, 2}));
  EXPECT_EQ(w.letters().size(), 3u);
}

TEST_F(FPWordTest, NormalFormIsIdempotentAndAlternating) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Letter> raw;
    for (int k = 0; k < 8; ++k) {
      if (rng() % 2)
        raw.emplace_back(bftest::random_even_permutation(rng, 5));
      else
        raw.emplace_back(bftest::random_b_letter(rng, 0));
    }
    const auto w = word(raw);
    EXPECT_EQ(word(w.letters()), w);
    for (std::size_t i = 1; i < w.letters().size(); ++i)
      EXPECT_NE(w.letters()[i].index(), w.letters()[i - 1].index());
    const auto len = w.length();
    EXPECT_LE(std::max(len.a, len.b) - std::min(len.a, len.b), 1u);
  }
}

TEST_F(FPWordTest, NormalFormRejectsWrongLevelLetters) {
  EXPECT_THROW(normal_form(1, 5, {Permutation::parse("(1 2 3)", 7)}), DomainError);
  EXPECT_THROW(normal_form(1, 5, {Permutation::parse("(1 2)", 5)}), DomainError);
  EXPECT_THROW(FPWord(1, 5) * FPWord(2, 7), DomainError);
}

TEST_F(FPWordTest, LengthExamples) {
  EXPECT_EQ(FPWord(1, 5).length(), (LenPair{0, 0}));
  EXPECT_EQ(word({a_letter("(1 2 3)")}).length(), (LenPair{0, 1}));

  // ^{a1}b1 ^{a2}b2 a: a1 b1 a1^-1 a2 b2 a2^-1 a collapses to three A-letters
  const auto a1 = a_letter("(1 2 3)"), a2 = a_letter("(2 4 5)"), a = a_letter("(1 5)(3 4)");
  const auto b1 = b_letter("(1 2 3 4 5)"), b2 = b_letter("(1 3)(2 4)");
  const auto w = word({a1, b1, a1.inverse(), a2, b2, a2.inverse(), a});
  EXPECT_EQ(w.length(), (LenPair{2, 3}));
}

TEST(LenPair, LexicographicOrder) {
  EXPECT_LT((LenPair{1, 5}), (LenPair{2, 0}));
  EXPECT_LT((LenPair{1, 0}), (LenPair{1, 1}));
  EXPECT_GT((LenPair{1, 1}), kShortLength);
  EXPECT_EQ((LenPair{2, 3}).to_string(), "(2,3)");
}

TEST_F(FPWordTest, LengthTriangleInequalities) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const auto w1 = bftest::random_word(rng, level1(), rng() % 5);
    const auto w2 = bftest::random_word(rng, level1(), rng() % 5);
    const auto l1 = w1.length(), l2 = w2.length(), l = (w1 * w2).length();
    auto diff = [](std::size_t x, std::size_t y) { return x > y ? x - y : y - x; };
    ASSERT_LE(diff(l1.b, l2.b), l.b);
    ASSERT_LE(diff(l1.a, l2.a), l.a);
    ASSERT_LE(l.b, l1.b + l2.b);
    ASSERT_LE(l.a, l1.a + l2.a);
    ASSERT_LE(l, (LenPair{l1.b + l2.b, l1.a + l2.a}));
  }
}

TEST_F(FPWordTest, GroupLaws) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = bftest::random_word(rng, level1(), rng() % 4);
    const auto v = bftest::random_word(rng, level1(), rng() % 4);
    const auto w = bftest::random_word(rng, level1(), rng() % 4);
    ASSERT_EQ((u * v) * w, u * (v * w));
    ASSERT_TRUE((u * u.inverse()).empty());
    ASSERT_EQ(u.power(3), u * u * u);
    ASSERT_EQ(u.power(-2), u.inverse() * u.inverse());
  }
}

TEST_F(FPWordTest, EvaluateExamples) {
  EXPECT_TRUE(ctx().is_identity_up_to_depth(evaluate(FPWord(1, 5), ctx()), 4));
  const auto a = a_letter("(1 2 3)");
  EXPECT_TRUE(ctx().equal_up_to_depth(evaluate(word({a}), ctx()), ctx().rooted(a, 1), 4));
  const auto q = Permutation::parse("(1 2 3 4 5)", 5);
  EXPECT_TRUE(ctx().equal_up_to_depth(evaluate(word({BLetter{q, {}}}), ctx()),
                                      ctx().directed_q(q, 1), 4));
}

TEST_F(FPWordTest, EvaluateIsHomomorphism) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 500; ++trial) {
    const auto u = bftest::random_word(rng, level1(), rng() % 3);
    const auto v = bftest::random_word(rng, level1(), rng() % 3);
    ASSERT_TRUE(ctx().equal_up_to_depth(evaluate(u * v, ctx()),
                                        ctx().compose(evaluate(u, ctx()), evaluate(v, ctx())), 4))
        << u.to_dsl({}) << " * " << v.to_dsl({});
  }
}

TEST_F(FPWordTest, SectionWordExamples) {
  const auto& spine = ctx().spine();
  for (Point x = 0; x < level1().x_size(); ++x)
    EXPECT_TRUE(section_word(word({a_letter("(1 2 3)")}), x, shape(), spine).empty());
  const auto b = b_letter("(1 2 3)");
  const auto s = section_word(word({b}), 0, shape(), spine);
  EXPECT_EQ(s.level(), 2);
  ASSERT_EQ(s.letters().size(), 1u);
  EXPECT_EQ(std::get<BLetter>(s.letters().front()), b);
}

TEST_F(FPWordTest, SectionWordsMatchTreeSections) {
  std::mt19937_64 rng(15);
  const auto& spine = ctx().spine();
  for (int trial = 0; trial < 150; ++trial) {
    const auto w = bftest::random_word(rng, level1(), 1 + rng() % 4);
    const auto g = evaluate(w, ctx());
    for (Point x = 0; x < level1().x_size(); ++x) {
      const auto s = section_word(w, x, shape(), spine);
      ASSERT_TRUE(ctx().equal_up_to_depth(evaluate(s, ctx()), ctx().section(g, x), 3))
          << w.to_dsl({}) << " at " << x;
    }
  }
}

TEST_F(FPWordTest, SectionLengthsSumBelowWordLength) {
  std::mt19937_64 rng(16);
  const auto& spine = ctx().spine();
  for (int trial = 0; trial < 1000; ++trial) {
    const auto w = bftest::random_word(rng, level1(), rng() % 5);
    std::size_t total = 0;
    for (Point x = 0; x < level1().x_size(); ++x) {
      total += section_word(w, x, shape(), spine).len_b();
      const auto st = stabilized_section_word(w, {x}, shape(), spine);
      ASSERT_LE(st.len_b(), w.len_b());
    }
    ASSERT_LE(total, w.len_b()) << w.to_dsl({});
  }
}

TEST_F(FPWordTest, StabilizedSectionOfRootedIsEmpty) {
  const auto w = word({a_letter("(1 2 3 4 5)")});
  for (Point x = 0; x < level1().x_size(); ++x)
    EXPECT_TRUE(stabilized_section_word(w, {x}, shape(), ctx().spine()).empty());
}

TEST_F(FPWordTest, StabilizedSectionRepeatsOrbitPasses) {
  // ^{a1}b1 ^{a2}b2 a: the positions come in blocks of two, one block per
  // step of the <a>-orbit of x
  const auto a1 = a_letter("(1 2 3)"), a2 = a_letter("(2 4 5)"), a = a_letter("(1 5)(3 4)");
  const auto w = word({a1, b_letter("(1 2 3 4 5)"), a1.inverse(), a2, b_letter("(1 3)(2 4)"),
                       a2.inverse(), a});
  const auto cf = conjugate_form(w);
  ASSERT_EQ(cf.terms.size(), 2u);
  for (Point x = 0; x < level1().x_size(); ++x) {
    const auto pos = stabilized_positions(cf, level1(), x);
    Point z = x;
    std::size_t orbit = 0;
    do {
      ++orbit;
      z = level1().act(cf.a, z);
    } while (z != x);
    ASSERT_EQ(pos.size(), 2 * orbit);
    Point y = x;
    for (std::size_t k = 0; k < orbit; ++k) {
      EXPECT_EQ(pos[2 * k].first, 0u);
      EXPECT_EQ(pos[2 * k + 1].first, 1u);
      EXPECT_EQ(pos[2 * k].second, level1().act(a1.inverse(), y));
      EXPECT_EQ(pos[2 * k + 1].second, level1().act(a2.inverse(), y));
      y = level1().act(cf.a_inverse, y);
    }
  }
}

TEST_F(FPWordTest, ShortStabilizedSectionsAwayFromSpine) {
  // ^{a1}b1 a: only x whose <a>-orbit meets a1 o picks up a B-letter
  const auto a1 = a_letter("(1 2 3)"), a = a_letter("(1 2)(4 5)");
  const auto w = word({a1, b_letter("(1 2 3)"), a1.inverse(), a});
  const auto& spine = ctx().spine();
  const Point o_image = level1().act(a1, 0);
  for (Point x = 0; x < level1().x_size(); ++x) {
    std::vector<Point> orbit;
    Point z = x;
    do {
      orbit.push_back(z);
      z = level1().act(a, z);
    } while (z != x);
    const auto st = stabilized_section_word(w, {x}, shape(), spine);
    EXPECT_LE(st.length(), kShortLength);
    const bool hits_o = std::find(orbit.begin(), orbit.end(), o_image) != orbit.end();
    EXPECT_EQ(st.len_b(), hits_o ? 1u : 0u) << x;
  }
}

TEST_F(FPWordTest, StabilizedSectionWordsMatchTree) {
  std::mt19937_64 rng(17);
  const auto& spine = ctx().spine();
  for (int trial = 0; trial < 150; ++trial) {
    const auto w = bftest::random_word(rng, level1(), 1 + rng() % 3);
    const auto g = evaluate(w, ctx());
    const auto u = bftest::random_vertex(shape(), 1, 1 + rng() % 2, rng);
    const auto st = stabilized_section_word(w, u, shape(), spine);
    ASSERT_EQ(st.level(), 1 + static_cast<int>(u.size()));
    ASSERT_LE(st.len_b(), w.len_b());
    ASSERT_TRUE(ctx().equal_up_to_depth(evaluate(st, ctx()), ctx().stabilized_section(g, u),
                                        4 - static_cast<int>(u.size())))
        << w.to_dsl({});
  }
}

TEST_F(FPWordTest, MissingSpineEntryIsConfigError) {
  SpinePair short_spine{{ctx().spine().alpha.front()}, {ctx().spine().beta.front()}};
  const auto w = word({b_letter("(1 2 3)")});
  const auto s = section_word(w, 0, shape(), short_spine);
  EXPECT_THROW(section_word(s, 0, shape(), short_spine), ConfigError);
}

TEST(FPWordDsl, RoundTrip) {
  const std::vector<std::string> names{"s", "t"};
  std::mt19937_64 rng(18);
  auto shape = build_tree_shape(bftest::trivial_spec(), 2);
  for (int trial = 0; trial < 200; ++trial) {
    auto w = bftest::random_word(rng, shape.level(1), rng() % 5);
    const auto text = w.to_dsl(names);
    EXPECT_EQ(parse_word(text, 1, shape, names), w) << text;
  }
}

TEST(FPWordDsl, ParsesExponentsAndIdentity) {
  const std::vector<std::string> names{"s"};
  const auto w = parse_word("A((1 2 3))^2 B(q=(1 2 3 4 5), g=s^-1)^-1 B(q=1, g=s s)", 1, 5, names);
  ASSERT_EQ(w.letters().size(), 2u);
  EXPECT_EQ(std::get<Permutation>(w.letters()[0]), Permutation::parse("(1 3 2)", 5));
  const auto& b = std::get<BLetter>(w.letters()[1]);
  EXPECT_EQ(b.q, Permutation::parse("(1 5 4 3 2)", 5));
  EXPECT_EQ(b.g, GWord({1, 1, 1}));
  EXPECT_TRUE(parse_word("1", 1, 5, names).empty());
  EXPECT_EQ(parse_word("A(1 2 3) A((1 3 2))", 1, 5, names).length(), (LenPair{0, 0}));
  EXPECT_EQ(parse_word("A((1 2 3)) B(q=(1 2 3 4 5), g=s s^-1)", 1, 5, names).length(),
            (LenPair{1, 1}));
}

TEST(FPWordDsl, Errors) {
  const std::vector<std::string> names{"s"};
  EXPECT_THROW(parse_word("A((1 2))", 1, 5, names), DomainError);
  EXPECT_THROW(parse_word("B(q=(1 2), g=1)", 1, 5, names), DomainError);
  EXPECT_THROW(parse_word("B(q=1, g=t)", 1, 5, names), DomainError);
  EXPECT_THROW(parse_word("C(1 2 3)", 1, 5, names), DomainError);
  EXPECT_THROW(parse_word("A(1 2 3", 1, 5, names), DomainError);
  EXPECT_THROW(parse_word("B(q=1, h=s)", 1, 5, names), DomainError);
}
