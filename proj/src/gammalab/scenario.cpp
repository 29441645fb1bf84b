#include <boost/uuid/detail/sha1.hpp>
#include <cstdio>
#include <fstream>

#include "branchforge/error.hpp"
#include "branchforge/gamma.hpp"

namespace branchforge {

std::string sha1_hex(const std::string& bytes) {
  boost::uuids::detail::sha1 hash;
  hash.process_bytes(bytes.data(), bytes.size());
  boost::uuids::detail::sha1::digest_type digest;
  hash.get_digest(digest);
  std::string out;
  char buf[9];
  for (unsigned word : digest) {
    std::snprintf(buf, sizeof buf, "%08x", word);
    out += buf;
  }
  return out;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

// An inline object, or a path to a JSON file relative to base_dir.
nlohmann::json inline_or_file(const nlohmann::json& value, const std::filesystem::path& base_dir) {
  if (value.is_string()) {
    std::filesystem::path p = value.get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    return read_json_file(p);
  }
  if (!value.is_object()) throw ConfigError("expected an object or a file path");
  return value;
}

SpinePair complete_spine(const TreeShape& shape, SpinePair spine) {
  const auto horizon = static_cast<std::size_t>(shape.horizon());
  if (spine.alpha.size() != spine.beta.size())
    throw ConfigError("spine alpha and beta have different lengths");
  if (spine.alpha.size() > horizon) {
    spine.alpha.resize(horizon);
    spine.beta.resize(horizon);
  }
  for (std::size_t i = 0; i < spine.alpha.size(); ++i) {
    const auto& level = shape.level(static_cast<int>(i) + 1);
    if (!level.in_y(spine.alpha[i]))
      throw PreconditionError("alpha_" + std::to_string(i + 1) + " = " +
                              std::to_string(spine.alpha[i]) + " is not in Y");
    if (!level.in_y_prime(spine.beta[i]))
      throw PreconditionError("beta_" + std::to_string(i + 1) + " = " +
                              std::to_string(spine.beta[i]) + " is not in Y'");
  }
  for (std::size_t i = spine.alpha.size(); i < horizon; ++i) {
    const auto& level = shape.level(static_cast<int>(i) + 1);
    spine.alpha.push_back(level.y().front());
    spine.beta.push_back(level.y_prime().front());
  }
  return spine;
}

}  // namespace

GammaScenario make_scenario(const GroupChainSpec& group, int horizon,
                            std::optional<SpinePair> spine, std::string id,
                            std::size_t degree_cap) {
  if (horizon < 1) throw ConfigError("horizon must be at least 1");
  GammaScenario s;
  s.id = std::move(id);
  s.group = group;
  s.horizon = horizon;
  s.degree_cap = degree_cap;
  s.spine_source = spine ? "explicit" : "default";
  auto shape = build_tree_shape(group, horizon, degree_cap);
  auto full = complete_spine(shape, spine.value_or(SpinePair{}));
  s.ctx = TreeContext::create(std::move(shape), std::move(full));
  s.provenance["group"] = sha1_hex(group.to_json().dump());
  return s;
}

GammaScenario load_scenario(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  try {
    if (!doc.is_object()) throw ConfigError("scenario must be a JSON object");
    const auto group_doc = inline_or_file(doc.at("group"), base_dir);
    const auto group = GroupChainSpec::from_json(group_doc);
    const int horizon = doc.value("horizon", kDefaultHorizon);
    const auto cap = doc.value("degree_cap", kDefaultDegreeCap);
    const auto id = doc.value("id", std::string("scenario"));

    std::optional<SpinePair> spine;
    std::string source = "default";
    std::optional<nlohmann::json> certificate;
    if (doc.contains("spine")) {
      spine = SpinePair::from_json(doc.at("spine"));
      source = "explicit";
    } else if (doc.contains("certificate")) {
      certificate = inline_or_file(doc.at("certificate"), base_dir);
      spine = SpinePair::from_json(certificate->at("prefix"));
      source = "certificate";
    }
    GammaScenario s = make_scenario(group, horizon, spine, id, cap);
    s.spine_source = source;
    s.provenance["scenario"] = sha1_hex(doc.dump());
    s.provenance["group"] = sha1_hex(group_doc.dump());
    if (certificate) s.provenance["certificate"] = sha1_hex(certificate->dump());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scenario: ") + e.what());
  }
}

GammaScenario load_scenario_file(const std::filesystem::path& path) {
  return load_scenario(read_json_file(path), path.parent_path());
}

nlohmann::json GammaScenario::to_json() const {
  nlohmann::json levels = nlohmann::json::array();
  for (int j = 1; j <= horizon; ++j) {
    const auto& l = shape().level(j);
    levels.push_back({{"level", j},
                      {"n", l.quotient_order()},
                      {"alt_degree", l.alt_degree()},
                      {"x_size", l.x_size()},
                      {"y_size", l.y().size()},
                      {"y_prime_size", l.y_prime().size()}});
  }
  return {{"id", id},
          {"horizon", horizon},
          {"spine", spine().to_json()},
          {"spine_source", spine_source},
          {"levels", std::move(levels)},
          {"provenance", provenance}};
}

std::vector<NamedGenerator> gamma_generators(GammaScenario& s, int j) {
  auto& ctx = *s.ctx;
  const auto& level = s.shape().level(j);
  std::vector<NamedGenerator> gens;
  auto add = [&](Letter letter) {
    FPWord w = normal_form(j, level.alt_degree(), {std::move(letter)});
    gens.push_back({w.to_dsl(s.g_names()), w, evaluate(w, ctx)});
  };
  for (const auto& a : level.a_generators_natural())
    if (!a.is_identity()) add(a);
  for (const auto& q : q_generators()) add(BLetter{q, GWord()});
  for (std::size_t g = 0; g < s.group.generators.size(); ++g)
    add(BLetter{Permutation(5), GWord::generator(g)});
  return gens;
}

PerfectnessRow perfectness_evidence(const GammaScenario& s, int j) {
  const auto& level = s.shape().level(j);
  PermGroup a(level.alt_degree(), level.a_generators_natural());
  PerfectnessRow row;
  row.level = j;
  row.order = a.order();
  row.derived_order = derived_subgroup(a).order();
  return row;
}

}  // namespace branchforge
