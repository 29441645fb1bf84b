#pragma once

#include <random>
#include <string>
#include <vector>

#include "branchforge/tree_aut.hpp"

namespace bftest {

inline branchforge::GroupChainSpec trivial_spec() {
  return branchforge::GroupChainSpec::from_json(
      nlohmann::json::parse(R"js({"generators":[],"quotients":[{"degree":1,"images":{}}]})js"));
}

inline branchforge::GroupChainSpec c2_spec() {
  return branchforge::GroupChainSpec::from_json(nlohmann::json::parse(
      R"js({"generators":["s"],"quotients":[{"degree":2,"images":{"s":"(1 2)"}}],
            "faithful_quotient":0})js"));
}

/// C_2 seen through the trivial quotient at odd levels and faithfully at
/// even ones, so the levels alternate between |X| = 20 and |X| = 840.
inline branchforge::GroupChainSpec mixed_spec() {
  return branchforge::GroupChainSpec::from_json(nlohmann::json::parse(
      R"js({"generators":["s"],"quotients":[
              {"degree":1,"images":{"s":"()"}},
              {"degree":2,"images":{"s":"(1 2)"}},
              {"degree":1,"images":{"s":"()"}},
              {"degree":2,"images":{"s":"(1 2)"}},
              {"degree":1,"images":{"s":"()"}},
              {"degree":2,"images":{"s":"(1 2)"}}]})js"));
}

/// First point of Y for alpha and of Y' for beta at every level.
inline branchforge::SpinePair first_spine(const branchforge::TreeShape& shape) {
  branchforge::SpinePair spine;
  for (int i = 1; i <= shape.horizon(); ++i) {
    spine.alpha.push_back(shape.level(i).y().front());
    spine.beta.push_back(shape.level(i).y_prime().front());
  }
  return spine;
}

inline std::shared_ptr<branchforge::TreeContext> make_context(
    const branchforge::GroupChainSpec& spec, int horizon, branchforge::TreeOptions options = {}) {
  auto shape = branchforge::build_tree_shape(spec, horizon);
  auto spine = first_spine(shape);
  return branchforge::TreeContext::create(std::move(shape), std::move(spine), options);
}

/// Generators of the group at `level`: rooted A generators, directed Q
/// generators, directed G generators.
inline std::vector<branchforge::TreeAut> tree_generators(branchforge::TreeContext& ctx,
                                                         int level) {
  using namespace branchforge;
  std::vector<TreeAut> gens;
  const auto& data = ctx.shape().level(level);
  for (const auto& a : data.a_generators_natural()) gens.push_back(ctx.rooted(a, level));
  for (const auto& q : q_generators()) gens.push_back(ctx.directed_q(q, level));
  for (std::size_t g = 0; g < data.quotient_group().generators.size(); ++g)
    gens.push_back(ctx.directed_g(GWord::generator(g), level));
  return gens;
}

inline branchforge::TreeAut random_tree_word(branchforge::TreeContext& ctx, int level,
                                             std::mt19937_64& rng, int max_len) {
  auto gens = tree_generators(ctx, level);
  auto w = ctx.identity(level);
  const int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_len));
  for (int k = 0; k < len; ++k) {
    auto g = gens[rng() % gens.size()];
    if (rng() % 2) g = ctx.inverse(g);
    w = ctx.compose(w, g);
  }
  return w;
}

inline branchforge::Vertex random_vertex(const branchforge::TreeShape& shape, int level,
                                         std::size_t length, std::mt19937_64& rng) {
  branchforge::Vertex v;
  for (std::size_t i = 0; i < length; ++i) {
    const auto size = shape.level(level + static_cast<int>(i)).x_size();
    // bias towards o and the spine so the interesting sections are exercised
    switch (rng() % 4) {
      case 0:
        v.push_back(0);
        break;
      case 1:
        v.push_back(shape.level(level + static_cast<int>(i)).y().front());
        break;
      default:
        v.push_back(static_cast<branchforge::Point>(rng() % size));
    }
  }
  return v;
}

}  // namespace bftest
