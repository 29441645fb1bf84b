#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "branchforge/fp_word.hpp"
#include "branchforge/shrink.hpp"

namespace branchforge {

inline constexpr int kDefaultHorizon = 6;

/// A group Gamma_1 with its tree, spine and the inputs it was built from.
struct GammaScenario {
  std::string id;
  GroupChainSpec group;
  int horizon = kDefaultHorizon;
  std::size_t degree_cap = kDefaultDegreeCap;
  std::shared_ptr<TreeContext> ctx;
  std::string spine_source;  // "explicit", "certificate" or "default"
  std::map<std::string, std::string> provenance;  // input -> SHA-1 of its canonical JSON

  const TreeShape& shape() const { return ctx->shape(); }
  const SpinePair& spine() const { return ctx->spine(); }
  const std::vector<std::string>& g_names() const { return group.generators; }
  nlohmann::json to_json() const;
};

/// Scenario document:
///   {"id": ..., "group": <GroupChainSpec or path>, "horizon": 6,
///    "degree_cap": ..., "spine": {"alpha": [...], "beta": [...]},
///    "certificate": <ShrinkCertificate or path>}
/// Spine points are 0-based coset indices. Levels not covered by the spine
/// or the certificate prefix take the smallest pair of Y_j x Y'_j. Every
/// alpha_j must lie in Y_j and every beta_j in Y'_j. Paths are resolved
/// against `base_dir`.
GammaScenario load_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
GammaScenario load_scenario_file(const std::filesystem::path& path);
GammaScenario make_scenario(const GroupChainSpec& group, int horizon,
                            std::optional<SpinePair> spine = std::nullopt,
                            std::string id = "inline",
                            std::size_t degree_cap = kDefaultDegreeCap);

nlohmann::json read_json_file(const std::filesystem::path& path);
std::string sha1_hex(const std::string& bytes);

struct NamedGenerator {
  std::string name;  // the generator as a word in the DSL
  FPWord word;
  TreeAut aut;
};

/// Rooted generators of A_j, directed generators of Q along alpha, directed
/// generators of G along beta, in that order.
std::vector<NamedGenerator> gamma_generators(GammaScenario& s, int j);

// ---------------------------------------------------------------------------

struct IdentityCheck {
  std::string name;
  bool pass = false;
  nlohmann::json detail;
};

struct WreathReport {
  int level = 1;
  int depth = 0;
  std::vector<IdentityCheck> checks;
  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// The four identities behind the branch structure of Gamma_j, compared as
/// portraits to `depth`:
///   (i)   some a in St(o) moves alpha_j;
///   (ii)  [^a p~, q~] at level j equals [p~, q~] of level j+1 placed at o;
///   (iii) q~_j (q~_{j+1} at o)^-1 is the rooted q_{j+1} at alpha_j;
///   (iv)  k^-1 g~_j = g~_{j+1} at o for k = (g_{j+1} at beta_j).
/// Throws PreconditionError when (i) has no solution.
WreathReport verify_wreath_identities(GammaScenario& s, int j, int depth);

// ---------------------------------------------------------------------------

struct ResidualLetter {
  std::string vertex_class;  // stabilized section word at level k
  std::uint64_t orbit = 1;   // orbit length of the vertices carrying it
  GWord g;                   // G-part of the section of w^(m e)
  std::uint64_t order = 1;   // order of g in the faithful (or level k+1) quotient
};

struct OrderCertificate {
  FPWord word;
  bool complete = false;  // a shrink level was found within the budget
  int budget = 0;
  int level = 0;  // k
  BigInt m = 1, e = 1;
  std::vector<ResidualLetter> residuals;
  bool finite_g = false;
  BigInt order_multiple = 0;  // N for finite G, m e lcm(orders) otherwise
  int verification_depth = 0;
  bool verified = false;
  BigInt truncated_order = 0;  // order of w acting on the verified levels

  nlohmann::json to_json(const std::vector<std::string>& g_names) const;
};

/// Searches levels 1..budget for the first k at which every stabilized
/// section of w is short, then builds N = m e lcm(orders of residual
/// G-letters) and checks w^N against the identity to `verification_depth`.
/// For infinite G only w^(m e) acting trivially on the first k levels is
/// checked and N is reported as a reduction to the listed G-elements.
OrderCertificate certify_finite_order(const FPWord& w, GammaScenario& s, int budget,
                                      int verification_depth);

/// Re-derives a certificate from its JSON and the scenario; true when the
/// result is byte-identical and verified.
bool verify_order_certificate(const nlohmann::json& certificate, GammaScenario& s);

// ---------------------------------------------------------------------------

struct PerfectnessRow {
  int level = 1;
  BigInt order;
  BigInt derived_order;
  bool perfect() const { return order == derived_order; }
};
/// |A_j| against the order of its commutator subgroup.
PerfectnessRow perfectness_evidence(const GammaScenario& s, int j);

}  // namespace branchforge
