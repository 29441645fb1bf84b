#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "branchforge/branchforge.h"

namespace {

struct Globals {
  std::string scenario;
  std::string group;
  std::string out;
  std::string format = "text";
  int horizon = 0;
};

// Owns a bf_result and frees it on scope exit.
struct Result {
  bf_result* r = nullptr;
  ~Result() { bf_result_free(r); }
};

struct Scenario {
  bf_scenario* s = nullptr;
  ~Scenario() { bf_scenario_free(s); }
};

int emit(const Globals& g, bf_status status, const Result& res) {
  if (status != BF_OK && *bf_result_message(res.r)) std::cerr << bf_result_message(res.r) << "\n";
  if (!g.out.empty()) {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << g.out << "\n";
      return BF_PRECONDITION;
    }
    f << bf_result_json(res.r) << "\n";
  }
  if (g.format == "json")
    std::cout << bf_result_json(res.r) << "\n";
  else
    std::cout << bf_result_text(res.r);
  return static_cast<int>(status);
}

// Opens the scenario named by --scenario or --group; prints and returns the
// failure status when that is impossible.
int open(const Globals& g, Scenario& s) {
  if (g.scenario.empty() == g.group.empty()) {
    std::cerr << "give exactly one of --scenario and --group\n";
    return BF_PRECONDITION;
  }
  Result res;
  const auto status = bf_scenario_open(g.scenario.empty() ? nullptr : g.scenario.c_str(),
                                       g.group.empty() ? nullptr : g.group.c_str(), g.horizon,
                                       &s.s, &res.r);
  if (status != BF_OK) std::cerr << bf_result_message(res.r) << "\n";
  return static_cast<int>(status);
}

int read_words(const std::string& path, std::vector<std::string>& words) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot read " << path << "\n";
    return BF_PRECONDITION;
  }
  for (std::string line; std::getline(in, line);) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    words.push_back(line.substr(first, last - first + 1));
  }
  return BF_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-depth constructions and certificates for branch groups over Alt(5)"};
  app.set_version_flag("--version", bf_version());
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--scenario", g.scenario, "Scenario JSON file")->check(CLI::ExistingFile);
  app.add_option("--group", g.group, "Group chain JSON file (default spine)")
      ->check(CLI::ExistingFile);
  app.add_option("--horizon", g.horizon, "Override the scenario horizon")
      ->check(CLI::Range(1, 64));
  app.add_option("--out", g.out, "Also write the JSON result here");
  app.add_option("--format", g.format, "Standard output format")
      ->check(CLI::IsMember({"json", "text"}));

  int level = 1, depth = 3, budget = 6, verify_depth = 4;
  unsigned max_n = 12;
  bool with_cosets = false;
  std::string word, words_file, mode = "reduced";

  auto* embed = app.add_subcommand("embed", "Embed each quotient into Alt(2n+3) and check it");
  auto* altgen = app.add_subcommand("verify-altgen", "Generation and perfectness of every A_j");
  auto* lvl = app.add_subcommand("level", "Level data X_j, o, Y_j, Y'_j");
  lvl->add_option("--level", level)->check(CLI::PositiveNumber);
  lvl->add_flag("--cosets", with_cosets, "Include the coset table");
  auto* portrait = app.add_subcommand("portrait", "Portrait of a word to a depth");
  portrait->add_option("--word", word)->required();
  portrait->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  auto* order = app.add_subcommand("order", "Finite-order certificate for a level-1 word");
  order->add_option("--word", word)->required();
  auto* order_budget = order->add_option("--budget", budget, "Default: horizon - 1")
                           ->check(CLI::NonNegativeNumber);
  order->add_option("--depth", verify_depth, "Verification depth")
      ->check(CLI::NonNegativeNumber);
  auto* zset = app.add_subcommand("zset", "Z-set of a word at a level");
  zset->add_option("--word", word)->required();
  zset->add_option("--level", level)->check(CLI::PositiveNumber);
  zset->add_option("--mode", mode)->check(CLI::IsMember({"reduced", "exhaustive"}));
  auto* shrink = app.add_subcommand("shrink-search", "Greedy shrinking prefix for a word list");
  shrink->add_option("--words", words_file, "One DSL word per line, # comments")
      ->required()
      ->check(CLI::ExistingFile);
  shrink->add_option("--budget", budget)->check(CLI::NonNegativeNumber);
  auto* wreath = app.add_subcommand("wreath-check", "Branch-structure identities at a level");
  wreath->add_option("--level", level)->check(CLI::PositiveNumber);
  wreath->add_option("--depth", depth)->check(CLI::PositiveNumber);
  auto* landau = app.add_subcommand("landau", "Landau's function against n!/2^(n-1)");
  landau->add_option("--max", max_n)->check(CLI::Range(1u, 1000u));
  auto* ratio = app.add_subcommand("ratio", "Counting ratio at a level against its lower bound");
  ratio->add_option("--level", level)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : BF_PRECONDITION;
  }

  Result res;
  if (landau->parsed()) return emit(g, bf_landau(max_n, &res.r), res);

  Scenario s;
  if (const int rc = open(g, s); rc != BF_OK) return rc;

  if (embed->parsed()) return emit(g, bf_embed(s.s, &res.r), res);
  if (altgen->parsed()) return emit(g, bf_verify_altgen(s.s, &res.r), res);
  if (lvl->parsed()) return emit(g, bf_level(s.s, level, with_cosets, &res.r), res);
  if (portrait->parsed()) return emit(g, bf_portrait(s.s, word.c_str(), depth, &res.r), res);
  if (order->parsed()) {
    if (order_budget->count() == 0) budget = bf_scenario_horizon(s.s) - 1;
    return emit(g, bf_order(s.s, word.c_str(), budget, verify_depth, &res.r), res);
  }
  if (zset->parsed())
    return emit(g, bf_zset(s.s, word.c_str(), level, mode == "exhaustive", &res.r), res);
  if (wreath->parsed()) return emit(g, bf_wreath_check(s.s, level, depth, &res.r), res);
  if (ratio->parsed()) return emit(g, bf_ratio(s.s, level, &res.r), res);
  if (shrink->parsed()) {
    std::vector<std::string> words;
    if (const int rc = read_words(words_file, words); rc != BF_OK) return rc;
    std::vector<const char*> ptrs;
    for (const auto& w : words) ptrs.push_back(w.c_str());
    return emit(g, bf_shrink_search(s.s, ptrs.data(), ptrs.size(), budget, &res.r), res);
  }
  return BF_PRECONDITION;
}
