#include <algorithm>
#include <set>

#include "branchforge/error.hpp"
#include "branchforge/shrink.hpp"

namespace branchforge {

namespace {

void add_unique(std::vector<FPWord>& words, FPWord w) {
  if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(std::move(w));
}

struct WordState {
  std::vector<FPWord> active;  // long stabilized sections at the current depth
};

/// One level of stabilized sections of every active word. Returns the
/// largest len_B seen among all sections (short ones included).
std::size_t descend(WordState& state, const TreeShape& shape, const SpinePair& prefix, int j) {
  std::vector<FPWord> next;
  std::size_t max_len_b = 0;
  const auto size = shape.level(j).x_size();
  for (const auto& u : state.active)
    for (Point x = 0; x < size; ++x) {
      FPWord st = stabilized_section_word(u, {x}, shape, prefix);
      max_len_b = std::max(max_len_b, st.len_b());
      if (st.length() > kShortLength) add_unique(next, std::move(st));
    }
  state.active = std::move(next);
  return max_len_b;
}

}  // namespace

nlohmann::json ShrinkCertificate::to_json(const std::vector<std::string>& g_names) const {
  nlohmann::json doc;
  doc["scenario"] = scenario_id;
  doc["budget"] = budget;
  doc["complete"] = complete;
  doc["prefix"] = prefix.to_json();
  nlohmann::json ws = nlohmann::json::array();
  for (const auto& t : words) {
    nlohmann::json entry{{"dsl", t.word.to_dsl(g_names)}, {"max_len_b", t.max_len_b}};
    entry["shrink_depth"] = t.shrink_depth ? nlohmann::json(*t.shrink_depth) : nlohmann::json();
    ws.push_back(std::move(entry));
  }
  doc["words"] = std::move(ws);
  nlohmann::json zs = nlohmann::json::array();
  for (const auto& z : zsets)
    zs.push_back({{"level", z.level}, {"word", z.word.to_dsl(g_names)}, {"size", z.size()},
                  {"bound", z.bound}});
  doc["zsets"] = std::move(zs);
  nlohmann::json ls = nlohmann::json::array();
  for (const auto& l : levels)
    ls.push_back({{"level", l.level},
                  {"alpha", l.alpha},
                  {"beta", l.beta},
                  {"active_words", l.active_words},
                  {"max_len_b", l.max_len_b},
                  {"union_size", l.union_size},
                  {"pairs", l.pair_count},
                  {"guaranteed", l.guaranteed}});
  doc["levels"] = std::move(ls);
  nlohmann::json sv = nlohmann::json::array();
  for (const auto& w : surviving) sv.push_back(w.to_dsl(g_names));
  doc["surviving"] = std::move(sv);
  return doc;
}

ShrinkCertificate greedy_shrinking_prefix(const std::vector<FPWord>& words,
                                          const TreeShape& shape, int budget,
                                          const ShrinkOptions& options) {
  if (budget < 0) throw ConfigError("negative depth budget");
  if (budget + 1 > shape.horizon())
    throw ConfigError("budget " + std::to_string(budget) + " needs horizon " +
                      std::to_string(budget + 1) + ", scenario has " +
                      std::to_string(shape.horizon()));
  for (const auto& w : words)
    if (w.level() != 1) throw DomainError("tracked words must live at level 1");

  ShrinkCertificate cert;
  cert.scenario_id = options.scenario_id;
  cert.budget = budget;
  std::vector<WordState> states(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    TrackedWord t;
    t.word = words[i];
    t.max_len_b.push_back(words[i].len_b());
    if (words[i].length() > kShortLength)
      states[i].active.push_back(words[i]);
    else
      t.shrink_depth = 0;
    cert.words.push_back(std::move(t));
  }

  for (int j = 1; j <= budget; ++j) {
    const LevelData& level = shape.level(j);
    const LevelData& next = shape.level(j + 1);
    ShrinkLevelRecord rec;
    rec.level = j;
    rec.pair_count = level.y().size() * level.y_prime().size();

    std::vector<FPWord> active;
    for (const auto& s : states)
      for (const auto& w : s.active) add_unique(active, w);
    rec.active_words = active.size();

    std::set<std::pair<Point, Point>> covered;
    for (const auto& w : active) {
      rec.max_len_b = std::max(rec.max_len_b, w.len_b());
      ZSet z = z_set(w, level, next, options.mode);
      for (const auto& m : z.members) covered.emplace(m.s, m.t);
      cert.zsets.push_back(std::move(z));
    }
    rec.union_size = covered.size();
    rec.guaranteed = active.empty() || hypothesis_ratio(level).supports(rec.max_len_b);

    bool chosen = false;
    for (Point s : level.y()) {
      for (Point t : level.y_prime())
        if (!covered.count({s, t})) {
          rec.alpha = s;
          rec.beta = t;
          chosen = true;
          break;
        }
      if (chosen) break;
    }
    if (!chosen)
      throw VerificationError(
          "cannot guarantee choice at level " + std::to_string(j) + ": Z-sets of " +
          std::to_string(active.size()) + " words cover all " + std::to_string(rec.pair_count) +
          " pairs (|Y| = " + std::to_string(level.y().size()) +
          ", |Y'| = " + std::to_string(level.y_prime().size()) +
          ", largest len_B = " + std::to_string(rec.max_len_b) + ")");
    cert.prefix.alpha.push_back(rec.alpha);
    cert.prefix.beta.push_back(rec.beta);
    cert.levels.push_back(rec);

    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i].active.empty()) continue;
      cert.words[i].max_len_b.push_back(descend(states[i], shape, cert.prefix, j));
      if (states[i].active.empty()) cert.words[i].shrink_depth = j;
    }
  }

  cert.complete = std::all_of(cert.words.begin(), cert.words.end(),
                              [](const TrackedWord& t) { return t.shrink_depth.has_value(); });
  for (const auto& s : states)
    for (const auto& w : s.active) add_unique(cert.surviving, w);
  return cert;
}

// ---------------------------------------------------------------------------

ReplayReport replay_certificate(const nlohmann::json& certificate, const TreeShape& shape,
                                const std::vector<std::string>& g_names) {
  ReplayReport report;
  auto fail = [&](std::string what) {
    report.ok = false;
    report.mismatches.push_back(std::move(what));
  };

  int budget = 0;
  SpinePair prefix;
  std::vector<FPWord> words;
  std::string scenario;
  try {
    budget = certificate.at("budget").get<int>();
    scenario = certificate.value("scenario", std::string());
    prefix = SpinePair::from_json(certificate.at("prefix"));
    for (const auto& w : certificate.at("words"))
      words.push_back(parse_word(w.at("dsl").get<std::string>(), 1, shape, g_names));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed certificate: ") + e.what());
  }
  if (static_cast<int>(prefix.alpha.size()) != budget ||
      static_cast<int>(prefix.beta.size()) != budget) {
    fail("prefix length differs from the budget");
    return report;
  }
  if (budget + 1 > shape.horizon())
    throw ConfigError("certificate budget exceeds the scenario horizon");

  for (int j = 1; j <= budget; ++j) {
    const auto& level = shape.level(j);
    const Point a = prefix.alpha[j - 1], b = prefix.beta[j - 1];
    if (!level.in_y(a) || !level.in_y_prime(b) || a == b)
      fail("prefix entry at level " + std::to_string(j) + " is not admissible");
  }
  if (!report.ok) return report;

  // Z-sets in the mode the search did not use, when small enough
  for (const auto& rec : certificate.at("zsets")) {
    const int j = rec.at("level").get<int>();
    if (j < 1 || j > budget) {
      fail("Z-set recorded at level " + std::to_string(j) + " outside the prefix");
      continue;
    }
    const auto& level = shape.level(j);
    const auto& next = shape.level(j + 1);
    const FPWord w = parse_word(rec.at("word").get<std::string>(), j, shape, g_names);
    const bool small = level.y().size() * level.y_prime().size() * level.x_size() <= 1'000'000;
    const ZSet z = z_set(w, level, next, small ? ZSetMode::Exhaustive : ZSetMode::Reduced);
    const std::string tag = "Z-set of " + rec.at("word").get<std::string>() + " at level " +
                            std::to_string(j);
    if (z.size() != rec.at("size").get<std::size_t>()) fail(tag + ": size differs");
    if (z.bound != rec.at("bound").get<std::uint64_t>()) fail(tag + ": bound differs");
    if (z.contains(prefix.alpha[j - 1], prefix.beta[j - 1])) fail(tag + ": contains the prefix");
    for (const auto& m : z.members)
      if (!witness_holds(z, m, level, next)) fail(tag + ": witness does not re-check");
  }

  // shrink depths and per-depth len_B along the stored prefix
  const auto& recorded = certificate.at("words");
  for (std::size_t i = 0; i < words.size(); ++i) {
    WordState state;
    std::vector<std::size_t> max_len_b{words[i].len_b()};
    std::optional<int> depth;
    if (words[i].length() > kShortLength)
      state.active.push_back(words[i]);
    else
      depth = 0;
    for (int j = 1; j <= budget && !state.active.empty(); ++j) {
      max_len_b.push_back(descend(state, shape, prefix, j));
      if (state.active.empty()) depth = j;
    }
    const auto& r = recorded[i];
    const std::optional<int> claimed =
        r.at("shrink_depth").is_null() ? std::nullopt
                                       : std::optional<int>(r.at("shrink_depth").get<int>());
    if (claimed != depth) fail("shrink depth of word " + std::to_string(i) + " differs");
    if (r.at("max_len_b").get<std::vector<std::size_t>>() != max_len_b)
      fail("section lengths of word " + std::to_string(i) + " differ");
    if (!std::is_sorted(max_len_b.rbegin(), max_len_b.rend()))
      fail("section lengths of word " + std::to_string(i) + " increase along the prefix");
  }

  ShrinkOptions options;
  options.scenario_id = scenario;
  const auto rerun = greedy_shrinking_prefix(words, shape, budget, options).to_json(g_names);
  if (rerun.dump() != certificate.dump()) fail("re-running the search gives different bytes");
  return report;
}

}  // namespace branchforge
