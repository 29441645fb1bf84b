#include "branchforge/altembed.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "branchforge/error.hpp"

namespace branchforge {

// ---------------------------------------------------------------------------
// GWord

GWord::GWord(std::vector<int> letters) {
  for (int l : letters) {
    if (l == 0) throw DomainError("zero letter in G-word");
    if (!letters_.empty() && letters_.back() == -l)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }
}

GWord GWord::generator(std::size_t k, bool inverse) {
  int l = static_cast<int>(k) + 1;
  return GWord({inverse ? -l : l});
}

GWord GWord::inverse() const {
  std::vector<int> out(letters_.rbegin(), letters_.rend());
  for (int& l : out) l = -l;
  return GWord(std::move(out));
}

GWord GWord::pow(long long k) const {
  GWord base = k < 0 ? inverse() : *this;
  GWord result;
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) result = result * base;
  return result;
}

GWord operator*(const GWord& a, const GWord& b) {
  std::vector<int> letters = a.letters_;
  letters.insert(letters.end(), b.letters_.begin(), b.letters_.end());
  return GWord(std::move(letters));
}

// ---------------------------------------------------------------------------
// FiniteGroupTable

std::uint32_t FiniteGroupTable::inverse(std::uint32_t a) const {
  for (std::uint32_t b = 0; b < order(); ++b)
    if (table[a][b] == 0) return b;
  throw PreconditionError("element " + std::to_string(a) + " has no inverse");
}

void FiniteGroupTable::validate() const {
  const std::size_t n = order();
  if (n == 0) throw PreconditionError("group table is empty");
  if (labels.size() != n) throw PreconditionError("label count differs from group order");
  for (const auto& row : table) {
    if (row.size() != n) throw PreconditionError("group table is not square");
    for (auto v : row)
      if (v >= n) throw PreconditionError("group table is not closed");
  }
  for (std::uint32_t a = 0; a < n; ++a)
    if (table[0][a] != a || table[a][0] != a)
      throw PreconditionError("element 0 is not the identity");
  for (std::uint32_t a = 0; a < n; ++a)
    for (std::uint32_t b = 0; b < n; ++b)
      for (std::uint32_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          throw PreconditionError("group table is not associative at (" + labels[a] + ", " +
                                  labels[b] + ", " + labels[c] + ")");
  for (std::uint32_t a = 0; a < n; ++a) {
    auto b = inverse(a);
    if (table[b][a] != 0) throw PreconditionError("left and right inverses differ");
  }
  std::vector<char> seen(n, 0);
  std::vector<std::uint32_t> queue{0};
  seen[0] = 1;
  for (std::size_t k = 0; k < queue.size(); ++k)
    for (auto g : generators) {
      if (g >= n) throw PreconditionError("generator index out of range");
      auto h = table[g][queue[k]];
      if (!seen[h]) {
        seen[h] = 1;
        queue.push_back(h);
      }
    }
  if (queue.size() != n) throw PreconditionError("generators do not generate the group");
}

FiniteGroupTable FiniteGroupTable::from_generator_images(const std::vector<std::string>& names,
                                                         const std::vector<Permutation>& images,
                                                         std::size_t degree) {
  if (names.size() != images.size())
    throw PreconditionError("generator names and images differ in count");
  std::vector<Permutation> elements{Permutation(degree)};
  std::vector<GWord> words{GWord()};
  std::unordered_map<Permutation, std::uint32_t> index{{elements[0], 0}};
  for (std::size_t k = 0; k < elements.size(); ++k) {
    for (std::size_t g = 0; g < images.size(); ++g) {
      Permutation h = compose(images[g], elements[k]);
      if (index.emplace(h, static_cast<std::uint32_t>(elements.size())).second) {
        if (elements.size() > 100000)
          throw ResourceError("quotient group has more than 100000 elements");
        words.push_back(GWord::generator(g) * words[k]);
        elements.push_back(std::move(h));
      }
    }
  }
  FiniteGroupTable t;
  const std::size_t n = elements.size();
  t.table.assign(n, std::vector<std::uint32_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      t.table[a][b] = index.at(compose(elements[a], elements[b]));
  t.labels.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::string label;
    for (int l : words[a].letters()) {
      if (!label.empty()) label += ' ';
      label += names[static_cast<std::size_t>(std::abs(l) - 1)];
      if (l < 0) label += "^-1";
    }
    t.labels[a] = label.empty() ? "1" : label;
  }
  for (std::size_t g = 0; g < images.size(); ++g) t.generators.push_back(index.at(images[g]));
  t.words = std::move(words);
  return t;
}

FiniteGroupTable FiniteGroupTable::cyclic(std::size_t n) {
  if (n == 0) throw PreconditionError("cyclic group of order 0");
  FiniteGroupTable t;
  t.table.assign(n, std::vector<std::uint32_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    t.labels.push_back(a == 0 ? "1" : "c^" + std::to_string(a));
    for (std::size_t b = 0; b < n; ++b) t.table[a][b] = static_cast<std::uint32_t>((a + b) % n);
  }
  t.generators = {n > 1 ? 1u : 0u};
  return t;
}

FiniteGroupTable FiniteGroupTable::klein_four() {
  FiniteGroupTable t;
  t.labels = {"1", "a", "b", "ab"};
  t.table.assign(4, std::vector<std::uint32_t>(4));
  for (std::uint32_t a = 0; a < 4; ++a)
    for (std::uint32_t b = 0; b < 4; ++b) t.table[a][b] = a ^ b;
  t.generators = {1, 2};
  return t;
}

// ---------------------------------------------------------------------------
// Alt embedding

std::vector<Permutation> embed_finite_group(const FiniteGroupTable& group) {
  group.validate();
  const std::size_t n = group.order();
  const std::size_t degree = 2 * n + 3;
  // 0-based points of the two free F-sets, indexed by element
  auto first_set = [](std::size_t k) -> Point { return k == 0 ? 2 : static_cast<Point>(4 + k); };
  auto second_set = [n](std::size_t k) -> Point {
    return k == 0 ? 3 : static_cast<Point>(n + 3 + k);
  };
  std::vector<Permutation> images;
  images.reserve(n);
  for (std::uint32_t f = 0; f < n; ++f) {
    std::vector<Point> img(degree);
    for (Point x = 0; x < degree; ++x) img[x] = x;
    for (std::uint32_t k = 0; k < n; ++k) {
      const auto fk = group.multiply(f, k);
      img[first_set(k)] = first_set(fk);
      img[second_set(k)] = second_set(fk);
    }
    images.emplace_back(std::move(img));
  }
  return images;
}

const std::vector<Permutation>& q_generators() {
  static const std::vector<Permutation> gens{Permutation::parse("(1 2 3)", 5),
                                             Permutation::parse("(1 2 3 4 5)", 5)};
  return gens;
}

const std::vector<std::string>& q_generator_names() {
  static const std::vector<std::string> names{"q1", "q2"};
  return names;
}

bool verify_altalt(const std::vector<Permutation>& images, std::size_t n) {
  const std::size_t degree = 2 * n + 3;
  if (images.size() != n) throw PreconditionError("expected one image per group element");
  std::vector<Permutation> gens;
  for (const auto& f : images) {
    if (f.degree() != degree) throw PreconditionError("image degree differs from 2n+3");
    for (const auto& q : q_generators()) gens.push_back(conjugate(f, q.extended(degree)));
  }
  return generates_alternating(gens, degree);
}

// ---------------------------------------------------------------------------
// GroupChainSpec

GroupChainSpec GroupChainSpec::from_json(const nlohmann::json& doc) {
  GroupChainSpec spec;
  try {
    if (doc.contains("generators"))
      spec.generators = doc.at("generators").get<std::vector<std::string>>();
    for (const auto& q : doc.at("quotients")) {
      Quotient quotient;
      quotient.degree = q.at("degree").get<std::size_t>();
      if (quotient.degree == 0) throw ConfigError("quotient degree must be positive");
      const auto& images = q.contains("images") ? q.at("images") : nlohmann::json::object();
      for (const auto& name : spec.generators) {
        if (!images.contains(name))
          throw ConfigError("quotient is missing an image for generator '" + name + "'");
        quotient.images.push_back(
            Permutation::parse(images.at(name).get<std::string>(), quotient.degree));
      }
      for (const auto& [key, value] : images.items())
        if (std::find(spec.generators.begin(), spec.generators.end(), key) ==
            spec.generators.end())
          throw ConfigError("image given for unknown generator '" + key + "'");
      spec.quotients.push_back(std::move(quotient));
    }
    if (doc.contains("faithful_quotient"))
      spec.faithful_quotient = doc.at("faithful_quotient").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed group chain: ") + e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::json GroupChainSpec::to_json() const {
  nlohmann::json doc;
  doc["generators"] = generators;
  doc["quotients"] = nlohmann::json::array();
  for (const auto& q : quotients) {
    nlohmann::json images = nlohmann::json::object();
    for (std::size_t g = 0; g < generators.size(); ++g)
      images[generators[g]] = q.images[g].to_string();
    doc["quotients"].push_back({{"degree", q.degree}, {"images", images}});
  }
  if (faithful_quotient) doc["faithful_quotient"] = *faithful_quotient;
  return doc;
}

void GroupChainSpec::validate() const {
  if (quotients.empty()) throw ConfigError("group chain has no quotients");
  std::unordered_set<std::string> names;
  for (const auto& n : generators) {
    if (n.empty() || !names.insert(n).second)
      throw ConfigError("generator names must be non-empty and distinct");
    if (n == "1") throw ConfigError("'1' is reserved for the identity");
  }
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    const auto& q = quotients[i];
    if (q.images.size() != generators.size())
      throw ConfigError("quotient " + std::to_string(i) + " has the wrong number of images");
    PermGroup image(q.degree, q.images);
    if (!is_transitive(image))
      throw ConfigError("quotient " + std::to_string(i) + " is not transitive");
  }
  if (faithful_quotient && *faithful_quotient >= quotients.size())
    throw ConfigError("faithful_quotient out of range");
}

std::size_t GroupChainSpec::quotient_index_for_level(int level) const {
  if (level < 1) throw DomainError("levels are numbered from 1");
  return std::min(static_cast<std::size_t>(level), quotients.size()) - 1;
}

std::optional<std::size_t> GroupChainSpec::generator_index(const std::string& name) const {
  for (std::size_t k = 0; k < generators.size(); ++k)
    if (generators[k] == name) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CosetSpace

namespace {

std::uint64_t nibble(std::uint64_t key, std::size_t i) { return (key >> (4 * i)) & 0xFu; }

std::uint64_t pack(std::span<const Point> values) {
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < values.size(); ++i) key |= std::uint64_t{values[i]} << (4 * i);
  return key;
}

}  // namespace

CosetSpace::CosetSpace(std::size_t alt_degree, const std::vector<Permutation>& generators,
                       std::size_t degree_cap)
    : alt_degree_(alt_degree) {
  if (alt_degree < 3 || alt_degree > 16)
    throw DomainError("coset spaces support 3 <= alt_degree <= 16");
  const BigInt expected = factorial(static_cast<unsigned>(alt_degree)) / 6;
  if (expected > degree_cap)
    throw ResourceError("|X| = " + expected.str() + " exceeds degree cap " +
                        std::to_string(degree_cap) + "; rerun with a cap of at least " +
                        expected.str());
  std::vector<Point> identity(alt_degree);
  for (Point x = 0; x < alt_degree; ++x) identity[x] = x;
  const std::uint64_t origin = pack(identity);
  keys_.push_back(origin);
  index_.emplace(origin, 0);

  std::vector<std::vector<Point>> images(generators.size());
  for (std::size_t k = 0; k < keys_.size(); ++k) {
    for (std::size_t g = 0; g < generators.size(); ++g) {
      const Permutation& a = generators[g];
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < alt_degree; ++i)
        key |= std::uint64_t{a(static_cast<Point>(nibble(keys_[k], i)))} << (4 * i);
      key = canonical(key);
      auto [it, inserted] = index_.emplace(key, static_cast<Point>(keys_.size()));
      if (inserted) keys_.push_back(key);
      images[g].push_back(it->second);
    }
  }
  for (auto& img : images) gen_actions_.push_back(Permutation::unchecked(std::move(img)));
  if (generators.empty()) gen_actions_.clear();
}

std::uint64_t CosetSpace::canonical(std::uint64_t key) const {
  const std::uint64_t v0 = nibble(key, 0), v1 = nibble(key, 1), v2 = nibble(key, 2);
  const std::uint64_t rest = key & ~std::uint64_t{0xFFF};
  auto with = [&](std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return rest | a | (b << 4) | (c << 8);
  };
  if (v0 < v1 && v0 < v2) return with(v0, v1, v2);
  if (v1 < v0 && v1 < v2) return with(v1, v2, v0);
  return with(v2, v0, v1);
}

std::vector<Point> CosetSpace::arrangement(Point coset) const {
  std::vector<Point> out(alt_degree_);
  for (std::size_t i = 0; i < alt_degree_; ++i)
    out[i] = static_cast<Point>(nibble(keys_[coset], i));
  return out;
}

Point CosetSpace::act(const Permutation& a, Point coset) const {
  if (a.degree() != alt_degree_) throw DomainError("element degree differs from alt degree");
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < alt_degree_; ++i)
    key |= std::uint64_t{a(static_cast<Point>(nibble(keys_[coset], i)))} << (4 * i);
  auto it = index_.find(canonical(key));
  if (it == index_.end()) throw DomainError("element " + a.to_string() + " is not in A_j");
  return it->second;
}

Permutation CosetSpace::action(const Permutation& a) const {
  std::vector<Point> img(size());
  for (Point x = 0; x < size(); ++x) img[x] = act(a, x);
  return Permutation::unchecked(std::move(img));
}

Permutation CosetSpace::stabilizer_generator(Point coset) const {
  return Permutation::from_cycles(
      alt_degree_, {{static_cast<Point>(nibble(keys_[coset], 0)),
                     static_cast<Point>(nibble(keys_[coset], 1)),
                     static_cast<Point>(nibble(keys_[coset], 2))}});
}

// ---------------------------------------------------------------------------
// LevelData

Permutation LevelData::q_natural(const Permutation& q5) const {
  if (q5.degree() != 5) throw DomainError("Q elements are permutations of 5 points");
  return q5.extended(alt_degree());
}

Permutation LevelData::g_natural(const GWord& g) const {
  Permutation result(alt_degree());
  for (int l : g.letters()) {
    const auto k = static_cast<std::size_t>(std::abs(l) - 1);
    if (k >= core_->g_gens.size()) throw DomainError("G-word uses an unknown generator");
    result = compose(result, l > 0 ? core_->g_gens[k] : core_->g_gens_inv[k]);
  }
  return result;
}

std::uint64_t LevelData::g_order(const GWord& g) const { return g_natural(g).order(); }

std::shared_ptr<const Permutation> LevelData::on_x(const Permutation& natural) const {
  {
    std::lock_guard lock(core_->memo_mutex);
    auto it = core_->memo.find(natural);
    if (it != core_->memo.end()) return it->second;
  }
  auto action = std::make_shared<const Permutation>(core_->cosets.action(natural));
  std::lock_guard lock(core_->memo_mutex);
  return core_->memo.emplace(natural, std::move(action)).first->second;
}

BigInt LevelData::printed_y_formula() const {
  const auto n = static_cast<unsigned>(core_->n);
  return factorial(2 * n + 3) / 3 - factorial(2 * n);
}

BigInt LevelData::y_prime_formula() const {
  return factorial(2 * static_cast<unsigned>(core_->n)) - 1;
}

nlohmann::json LevelData::to_json(bool include_coset_table) const {
  nlohmann::json doc;
  doc["level"] = j_;
  doc["n"] = core_->n;
  doc["alt_degree"] = alt_degree();
  doc["sigma"] = core_->sigma.to_string();
  doc["x_size"] = x_size();
  doc["o"] = o();
  doc["m"] = core_->m;
  doc["exponent"] = core_->exponent;
  doc["y_size"] = core_->y.size();
  doc["y_prime_size"] = core_->y_prime.size();
  doc["y_prime_formula"] = y_prime_formula().str();
  doc["y_printed_formula"] = printed_y_formula().str();
  doc["y"] = core_->y;
  doc["y_prime"] = core_->y_prime;
  nlohmann::json gens = nlohmann::json::array();
  for (std::size_t g = 0; g < core_->a_gens.size(); ++g) {
    nlohmann::json entry{{"name", core_->a_gen_names[g]},
                         {"natural", core_->a_gens[g].to_string()}};
    if (include_coset_table) {
      const auto& img = core_->cosets.generator_actions()[g].images();
      entry["coset_images"] = std::vector<Point>(img.begin(), img.end());
    }
    gens.push_back(std::move(entry));
  }
  doc["generators"] = std::move(gens);
  nlohmann::json embedding = nlohmann::json::array();
  for (std::size_t f = 0; f < core_->embedding.size(); ++f)
    embedding.push_back(
        {{"element", core_->table.labels[f]}, {"image", core_->embedding[f].to_string()}});
  doc["embedding"] = std::move(embedding);
  if (include_coset_table) {
    nlohmann::json table = nlohmann::json::array();
    for (Point x = 0; x < x_size(); ++x) {
      auto arr = core_->cosets.arrangement(x);
      for (auto& v : arr) ++v;  // 1-based for humans
      table.push_back(arr);
    }
    doc["coset_representatives"] = std::move(table);
  }
  return doc;
}

LevelData build_level_data(const GroupChainSpec& spec, std::size_t quotient, int j,
                           std::size_t degree_cap) {
  if (quotient >= spec.quotients.size()) throw DomainError("quotient index out of range");
  const Quotient& q = spec.quotients[quotient];
  FiniteGroupTable table = FiniteGroupTable::from_generator_images(spec.generators, q.images,
                                                                   q.degree);
  const std::size_t n = table.order();
  const std::size_t degree = 2 * n + 3;
  {
    const BigInt expected = factorial(static_cast<unsigned>(degree)) / 6;
    if (expected > degree_cap)
      throw ResourceError("level " + std::to_string(j) + " needs |X| = " + expected.str() +
                          " points; rerun with a degree cap of at least " + expected.str());
  }
  std::vector<Permutation> embedding = embed_finite_group(table);

  std::vector<Permutation> a_gens;
  std::vector<std::string> a_names;
  for (std::size_t k = 0; k < q_generators().size(); ++k) {
    a_gens.push_back(q_generators()[k].extended(degree));
    a_names.push_back(q_generator_names()[k]);
  }
  std::vector<Permutation> g_gens;
  for (std::size_t g = 0; g < spec.generators.size(); ++g) {
    g_gens.push_back(embedding[table.generators[g]]);
    a_gens.push_back(g_gens.back());
    a_names.push_back(spec.generators[g]);
  }

  // (A3) on the natural points: the G-conjugates of Q generate Alt(2n+3).
  if (!verify_altalt(embedding, n))
    throw VerificationError("F-conjugates of Alt(5) do not generate Alt(" +
                            std::to_string(degree) + ")");

  auto core = std::make_shared<LevelData::Core>(CosetSpace(degree, a_gens, degree_cap));
  core->n = n;
  core->sigma = Permutation::parse("(1 2 3)", degree);
  core->table = std::move(table);
  core->embedding = std::move(embedding);
  core->g_gens = g_gens;
  for (const auto& g : g_gens) core->g_gens_inv.push_back(g.inverse());
  core->quotient_images = q.images;
  core->a_gens = std::move(a_gens);
  core->a_gen_names = std::move(a_names);
  core->m = max_order_alternating(static_cast<unsigned>(degree));
  core->exponent = exponent_alternating(static_cast<unsigned>(degree));

  const CosetSpace& cosets = core->cosets;
  const std::size_t x_size = cosets.size();
  if (BigInt(x_size) != factorial(static_cast<unsigned>(degree)) / 6)
    throw VerificationError("A_j is not transitive on X_j (found " + std::to_string(x_size) +
                            " cosets)");

  // Stab(h<σ>) = <h σ h^-1> = <(h0 h1 h2)>, equal to <σ> iff {h0,h1,h2} = {0,1,2}.
  core->classes.resize(x_size);
  for (Point x = 0; x < x_size; ++x) {
    auto arr = cosets.arrangement(x);
    std::array<Point, 3> first{arr[0], arr[1], arr[2]};
    std::sort(first.begin(), first.end());
    const bool same = first == std::array<Point, 3>{0, 1, 2};
    if (x == 0) {
      if (!same) throw VerificationError("o is not the coset <σ>");
      core->classes[x] = LevelData::PointClass::O;
    } else if (same) {
      core->classes[x] = LevelData::PointClass::YPrime;
      core->y_prime.push_back(x);
    } else {
      core->classes[x] = LevelData::PointClass::Y;
      core->y.push_back(x);
    }
  }

  LevelData level;
  level.j_ = j;
  level.core_ = core;

  // Stab(o) = <σ> of order 3: σ fixes o; the chain confirms the order when
  // the coset space is small enough for Schreier-Sims.
  auto sigma_x = cosets.action(core->sigma);
  if (sigma_x(0) != 0 || sigma_x.order() != 3)
    throw VerificationError("σ does not act as an order-3 element fixing o");
  if (x_size <= 5000) {
    PermGroup a_on_x(x_size, cosets.generator_actions(), degree_cap);
    PermGroup stab = stabilizer_gens(a_on_x, 0);
    if (stab.order() != 3 || !stab.contains(sigma_x))
      throw VerificationError("stabilizer of o is not <σ>");
  }
  if (BigInt(core->y_prime.size()) != level.y_prime_formula())
    throw VerificationError("|Y'| = " + std::to_string(core->y_prime.size()) +
                            " differs from (2n)! - 1");
  if (core->y.size() + core->y_prime.size() + 1 != x_size)
    throw VerificationError("Y, Y' and {o} do not partition X");
  return level;
}

}  // namespace branchforge
