#include "branchforge/branchforge.h"

#include <filesystem>
#include <functional>
#include <new>
#include <optional>
#include <sstream>

#include "branchforge/error.hpp"
#include "branchforge/gamma.hpp"

using namespace branchforge;

struct bf_result {
  bf_status status = BF_OK;
  std::string json;
  std::string text;
  std::string message;
};

struct bf_scenario {
  nlohmann::json doc;  // scenario document with the group inlined or as a path
  std::filesystem::path base_dir;
  GroupChainSpec group;
  std::optional<GammaScenario> built;

  GammaScenario& get() {
    if (!built) built = load_scenario(doc, base_dir);
    return *built;
  }
};

namespace {

struct Outcome {
  bf_status status = BF_OK;
  std::string json;
  std::string text;
};

bf_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Verification:
      return BF_VERIFICATION_FAILED;
    case ErrorKind::Resource:
      return BF_RESOURCE;
    case ErrorKind::Precondition:
      break;
  }
  return BF_PRECONDITION;
}

bf_status run(bf_result** result, const std::function<Outcome()>& body) {
  auto* r = new (std::nothrow) bf_result;
  if (!r) return BF_RESOURCE;
  try {
    Outcome o = body();
    r->status = o.status;
    r->json = std::move(o.json);
    r->text = std::move(o.text);
  } catch (const Error& e) {
    r->status = status_of(e.kind());
    r->message = e.what();
  } catch (const std::bad_alloc&) {
    r->status = BF_RESOURCE;
    r->message = "out of memory";
  } catch (const std::exception& e) {
    r->status = BF_PRECONDITION;
    r->message = std::string("unexpected error: ") + e.what();
  }
  if (r->status != BF_OK && r->json.empty()) {
    nlohmann::json err{{"status", static_cast<int>(r->status)}, {"error", r->message}};
    r->json = err.dump(2);
  }
  const bf_status status = r->status;
  if (result)
    *result = r;
  else
    delete r;
  return status;
}

std::string pass_word(bool ok) { return ok ? "PASS" : "FAIL"; }
const char* yes(bool b) { return b ? "yes" : "no"; }

void require_scenario(const bf_scenario* s) {
  if (!s) throw PreconditionError("no scenario given");
}

int checked_level(GammaScenario& s, int level) {
  if (level < 1 || level > s.horizon)
    throw ConfigError("level " + std::to_string(level) + " outside 1.." +
                      std::to_string(s.horizon));
  return level;
}

}  // namespace

extern "C" {

BF_API const char* bf_version(void) { return "1.0.0"; }

BF_API bf_status bf_result_status(const bf_result* r) { return r ? r->status : BF_PRECONDITION; }
BF_API const char* bf_result_json(const bf_result* r) { return r ? r->json.c_str() : ""; }
BF_API const char* bf_result_text(const bf_result* r) { return r ? r->text.c_str() : ""; }
BF_API const char* bf_result_message(const bf_result* r) { return r ? r->message.c_str() : ""; }
BF_API void bf_result_free(bf_result* r) { delete r; }

BF_API bf_status bf_scenario_open(const char* scenario_path, const char* group_path, int horizon,
                                  bf_scenario** out, bf_result** result) {
  if (out) *out = nullptr;
  return run(result, [&] {
    if (!out) throw PreconditionError("null output handle");
    if ((scenario_path == nullptr) == (group_path == nullptr))
      throw ConfigError("give exactly one of a scenario file and a group file");
    auto s = std::make_unique<bf_scenario>();
    if (scenario_path) {
      const std::filesystem::path p(scenario_path);
      s->doc = read_json_file(p);
      s->base_dir = p.parent_path();
      if (!s->doc.is_object() || !s->doc.contains("group"))
        throw ConfigError(p.string() + " has no \"group\"");
      const auto& g = s->doc.at("group");
      if (g.is_string()) {
        std::filesystem::path gp = g.get<std::string>();
        if (gp.is_relative()) gp = s->base_dir / gp;
        s->group = GroupChainSpec::from_json(read_json_file(gp));
      } else {
        s->group = GroupChainSpec::from_json(g);
      }
    } else {
      const std::filesystem::path p(group_path);
      const auto group_doc = read_json_file(p);
      s->group = GroupChainSpec::from_json(group_doc);
      s->doc = {{"id", p.stem().string()}, {"group", group_doc}};
    }
    if (horizon > 0) s->doc["horizon"] = horizon;
    *out = s.release();
    return Outcome{BF_OK, "{}", "scenario loaded"};
  });
}

BF_API void bf_scenario_free(bf_scenario* s) { delete s; }

BF_API int bf_scenario_horizon(const bf_scenario* s) {
  return s ? s->doc.value("horizon", kDefaultHorizon) : 0;
}

BF_API bf_status bf_embed(bf_scenario* s, bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    nlohmann::json quotients = nlohmann::json::array();
    std::ostringstream text;
    bool all = true;
    for (std::size_t i = 0; i < s->group.quotients.size(); ++i) {
      const auto& q = s->group.quotients[i];
      const auto table =
          FiniteGroupTable::from_generator_images(s->group.generators, q.images, q.degree);
      const auto images = embed_finite_group(table);
      const std::size_t n = table.order();
      bool even = true, free = true;
      std::set<Permutation> distinct(images.begin(), images.end());
      for (std::size_t f = 0; f < n; ++f) {
        even = even && images[f].is_even();
        // regular on the two blocks: non-identity elements fix no point there
        if (f != 0) free = free && images[f](2) != 2 && images[f](3) != 3;
      }
      const bool faithful = distinct.size() == n;
      const bool generates = verify_altalt(images, n);
      const bool ok = even && free && faithful && generates;
      all = all && ok;
      // level data when the coset space fits under the cap
      nlohmann::json level = nullptr;
      try {
        const auto data = build_level_data(s->group, i, 1, s->doc.value("degree_cap", kDefaultDegreeCap));
        level = {{"x_size", data.x_size()},
                 {"y_size", data.y().size()},
                 {"y_prime_size", data.y_prime().size()},
                 {"stabilizer_order", data.sigma().order()}};
      } catch (const ResourceError&) {
      }
      nlohmann::json imgs = nlohmann::json::array();
      for (std::size_t f = 0; f < n; ++f)
        imgs.push_back({{"element", table.labels[f]}, {"image", images[f].to_string()}});
      quotients.push_back({{"quotient", i},
                           {"order", n},
                           {"alt_degree", 2 * n + 3},
                           {"images", std::move(imgs)},
                           {"even", even},
                           {"free", free},
                           {"faithful", faithful},
                           {"generates_alternating", generates},
                           {"level", level},
                           {"pass", ok}});
      text << "quotient " << i << ": |F| = " << n << " into Alt(" << 2 * n + 3
           << "): even " << yes(even) << ", free " << yes(free) << ", faithful " << yes(faithful)
           << ", generates " << yes(generates);
      if (level.is_null())
        text << ", coset space over the degree cap";
      else
        text << ", |X| = " << level["x_size"] << ", |Y| = " << level["y_size"] << ", |Y'| = "
             << level["y_prime_size"];
      text << " -> " << pass_word(ok) << "\n";
    }
    nlohmann::json doc{{"command", "embed"}, {"quotients", std::move(quotients)}, {"pass", all}};
    return Outcome{all ? BF_OK : BF_VERIFICATION_FAILED, doc.dump(2), text.str()};
  });
}

BF_API bf_status bf_verify_altgen(bf_scenario* s, bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    auto& sc = s->get();
    nlohmann::json levels = nlohmann::json::array();
    std::ostringstream text;
    bool all = true;
    for (int j = 1; j <= sc.horizon; ++j) {
      const auto& level = sc.shape().level(j);
      const bool generates = verify_altalt(level.embedding(), level.quotient_order());
      const auto perf = perfectness_evidence(sc, j);
      const bool ok = generates && perf.perfect();
      all = all && ok;
      levels.push_back({{"level", j},
                        {"alt_degree", level.alt_degree()},
                        {"generates_alternating", generates},
                        {"order", perf.order.str()},
                        {"derived_order", perf.derived_order.str()},
                        {"perfect", perf.perfect()},
                        {"pass", ok}});
      text << "level " << j << ": A_j = Alt(" << level.alt_degree() << ") generated "
           << yes(generates) << ", |A_j| = " << perf.order << ", |[A_j,A_j]| = " << perf.derived_order
           << " -> " << pass_word(ok) << "\n";
    }
    nlohmann::json doc{{"command", "verify-altgen"}, {"levels", std::move(levels)}, {"pass", all}};
    return Outcome{all ? BF_OK : BF_VERIFICATION_FAILED, doc.dump(2), text.str()};
  });
}

BF_API bf_status bf_level(bf_scenario* s, int level, int with_cosets, bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    auto& sc = s->get();
    const auto& data = sc.shape().level(checked_level(sc, level));
    auto doc = data.to_json(with_cosets != 0);
    std::ostringstream text;
    text << "level " << level << ": n = " << data.quotient_order() << ", A = Alt("
         << data.alt_degree() << "), |X| = " << data.x_size() << ", |Y| = " << data.y().size()
         << " (printed formula " << data.printed_y_formula() << "), |Y'| = "
         << data.y_prime().size() << " (formula " << data.y_prime_formula()
         << "), m = " << data.max_element_order() << ", exponent = " << data.exponent() << "\n";
    return Outcome{BF_OK, doc.dump(2), text.str()};
  });
}

BF_API bf_status bf_portrait(bf_scenario* s, const char* word, int depth, bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    if (!word) throw PreconditionError("no word given");
    auto& sc = s->get();
    const auto w = parse_word(word, 1, sc.shape(), sc.g_names());
    const auto p = sc.ctx->truncate(evaluate(w, *sc.ctx), depth);
    nlohmann::ordered_json doc;
    doc["command"] = "portrait";
    doc["word"] = w.to_dsl(sc.g_names());
    doc["depth"] = depth;
    doc["portrait"] = p.to_json();
    return Outcome{BF_OK, doc.dump(2), p.to_text() + "\n"};
  });
}

BF_API bf_status bf_order(bf_scenario* s, const char* word, int budget, int depth,
                          bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    if (!word) throw PreconditionError("no word given");
    auto& sc = s->get();
    const auto w = parse_word(word, 1, sc.shape(), sc.g_names());
    const auto cert = certify_finite_order(w, sc, budget, depth);
    auto doc = cert.to_json(sc.g_names());
    doc["command"] = "order";
    std::ostringstream text;
    if (!cert.complete) {
      text << "no shrink level within budget " << budget << "; no order claim\n";
    } else {
      text << "shrinks at level " << cert.level << ", m = " << cert.m << ", e = " << cert.e
           << ", " << cert.residuals.size() << " residual section classes\n";
      text << (cert.finite_g ? "order divides " : "order reduces to G-elements via ")
           << cert.order_multiple << "; order on the first " << depth + 1
           << " levels = " << cert.truncated_order << "; verified " << yes(cert.verified) << "\n";
    }
    const bool ok = cert.complete && cert.verified;
    return Outcome{ok ? BF_OK : BF_VERIFICATION_FAILED, doc.dump(2), text.str()};
  });
}

BF_API bf_status bf_zset(bf_scenario* s, const char* word, int level, int exhaustive,
                         bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    if (!word) throw PreconditionError("no word given");
    auto& sc = s->get();
    checked_level(sc, level);
    if (level + 1 > sc.horizon) throw ConfigError("Z-sets at level " + std::to_string(level) +
                                                  " need level " + std::to_string(level + 1));
    const auto w = parse_word(word, level, sc.shape(), sc.g_names());
    const auto z = z_set(w, sc.shape().level(level), sc.shape().level(level + 1),
                         exhaustive ? ZSetMode::Exhaustive : ZSetMode::Reduced);
    auto doc = z.to_json(sc.g_names());
    doc["command"] = "zset";
    doc["mode"] = exhaustive ? "exhaustive" : "reduced";
    doc["pairs"] = sc.shape().level(level).y().size() * sc.shape().level(level).y_prime().size();
    std::ostringstream text;
    text << "|Z_" << level << "(w)| = " << z.size() << " of " << doc["pairs"].get<std::size_t>()
         << " pairs, bound " << z.bound << "\n";
    return Outcome{BF_OK, doc.dump(2), text.str()};
  });
}

BF_API bf_status bf_shrink_search(bf_scenario* s, const char* const* words, size_t count,
                                  int budget, bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    auto& sc = s->get();
    std::vector<FPWord> tracked;
    for (size_t i = 0; i < count; ++i) {
      if (!words || !words[i]) throw PreconditionError("null word");
      tracked.push_back(parse_word(words[i], 1, sc.shape(), sc.g_names()));
    }
    ShrinkOptions options;
    options.scenario_id = sc.id;
    const auto cert = greedy_shrinking_prefix(tracked, sc.shape(), budget, options);
    const auto doc = cert.to_json(sc.g_names());
    const auto replay = replay_certificate(doc, sc.shape(), sc.g_names());
    std::ostringstream text;
    text << (cert.complete ? "complete" : "incomplete") << " certificate, budget " << budget
         << ", " << cert.zsets.size() << " Z-sets\n";
    for (const auto& l : cert.levels)
      text << "level " << l.level << ": (alpha, beta) = (" << l.alpha << ", " << l.beta
           << "), " << l.active_words << " long words, union " << l.union_size << "/"
           << l.pair_count << (l.guaranteed ? "" : ", counting inequality fails") << "\n";
    for (std::size_t i = 0; i < cert.words.size(); ++i) {
      text << "word " << i << ": ";
      if (cert.words[i].shrink_depth)
        text << "short from depth " << *cert.words[i].shrink_depth << "\n";
      else
        text << "still long at the budget\n";
    }
    text << "replay " << pass_word(replay.ok) << "\n";
    for (const auto& m : replay.mismatches) text << "  " << m << "\n";
    const bool ok = cert.complete && replay.ok;
    return Outcome{ok ? BF_OK : BF_VERIFICATION_FAILED, doc.dump(2), text.str()};
  });
}

BF_API bf_status bf_replay_certificate(bf_scenario* s, const char* certificate_json,
                                       bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    if (!certificate_json) throw PreconditionError("no certificate given");
    auto& sc = s->get();
    nlohmann::json cert;
    try {
      cert = nlohmann::json::parse(certificate_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("certificate is not JSON: ") + e.what());
    }
    const auto replay = replay_certificate(cert, sc.shape(), sc.g_names());
    nlohmann::json doc{{"command", "replay"}, {"pass", replay.ok}, {"mismatches", replay.mismatches}};
    std::string text = "replay " + pass_word(replay.ok) + "\n";
    for (const auto& m : replay.mismatches) text += "  " + m + "\n";
    return Outcome{replay.ok ? BF_OK : BF_VERIFICATION_FAILED, doc.dump(2), text};
  });
}

BF_API bf_status bf_wreath_check(bf_scenario* s, int level, int depth, bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    auto& sc = s->get();
    const auto report = verify_wreath_identities(sc, checked_level(sc, level), depth);
    auto doc = report.to_json();
    doc["command"] = "wreath-check";
    std::ostringstream text;
    for (const auto& c : report.checks) text << c.name << ": " << pass_word(c.pass) << "\n";
    return Outcome{report.all_pass() ? BF_OK : BF_VERIFICATION_FAILED, doc.dump(2), text.str()};
  });
}

BF_API bf_status bf_ratio(bf_scenario* s, int level, bf_result** result) {
  return run(result, [&] {
    require_scenario(s);
    auto& sc = s->get();
    const auto h = hypothesis_ratio(sc.shape().level(checked_level(sc, level)));
    auto doc = h.to_json();
    doc["command"] = "ratio";
    std::ostringstream text;
    text << "level " << level << ": |Y||Y'| / (m(|Y|+|Y'|)) = " << rational_string(h.ratio)
         << " with |Y| = " << h.y_size << ", |Y'| = " << h.y_prime_size << ", m = " << h.m
         << "; closed-form bound " << rational_string(h.bound) << " -> "
         << pass_word(h.ratio_at_least_bound()) << "\n";
    return Outcome{h.ratio_at_least_bound() ? BF_OK : BF_VERIFICATION_FAILED, doc.dump(2),
                   text.str()};
  });
}

BF_API bf_status bf_landau(unsigned max_n, bf_result** result) {
  return run(result, [&] {
    if (max_n < 1 || max_n > 1000) throw DomainError("landau --max must be in 1..1000");
    nlohmann::json rows = nlohmann::json::array();
    std::ostringstream text;
    bool all = true;
    for (unsigned n = 1; n <= max_n; ++n) {
      const auto row = landau_bound_check(n);
      all = all && row.holds;
      rows.push_back({{"n", n},
                      {"g", row.g.str()},
                      {"estimate", rational_string(row.estimate)},
                      {"holds", row.holds}});
      text << "g(" << n << ") = " << row.g << ", n!/2^(n-1) = " << rational_string(row.estimate)
           << (row.holds ? "" : "  <- estimate fails") << "\n";
    }
    nlohmann::json doc{{"command", "landau"}, {"rows", std::move(rows)}, {"pass", all}};
    return Outcome{all ? BF_OK : BF_VERIFICATION_FAILED, doc.dump(2), text.str()};
  });
}

}  // extern "C"
