#include "branchforge/tree_aut.hpp"

#include <algorithm>
#include <boost/integer/common_factor.hpp>
#include <sstream>

#include "branchforge/error.hpp"

namespace branchforge {

// ---------------------------------------------------------------------------
// TreeShape and SpinePair

TreeShape::TreeShape(std::vector<LevelData> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw ConfigError("tree horizon must be at least 1");
  for (std::size_t i = 0; i < levels_.size(); ++i)
    if (levels_[i].x_size() < 2) throw ConfigError("level alphabet has fewer than 2 letters");
}

const LevelData& TreeShape::level(int i) const {
  if (i < 1 || i > horizon())
    throw ConfigError("level " + std::to_string(i) + " is outside the horizon 1.." +
                      std::to_string(horizon()));
  return levels_[static_cast<std::size_t>(i - 1)];
}

TreeShape build_tree_shape(const GroupChainSpec& spec, int horizon, std::size_t degree_cap) {
  if (horizon < 1) throw ConfigError("tree horizon must be at least 1");
  std::map<std::size_t, LevelData> built;
  std::vector<LevelData> levels;
  for (int i = 1; i <= horizon; ++i) {
    const std::size_t q = spec.quotient_index_for_level(i);
    auto it = built.find(q);
    if (it == built.end()) it = built.emplace(q, build_level_data(spec, q, i, degree_cap)).first;
    levels.push_back(it->second.with_index(i));
  }
  return TreeShape(std::move(levels));
}

nlohmann::json SpinePair::to_json() const { return {{"alpha", alpha}, {"beta", beta}}; }

SpinePair SpinePair::from_json(const nlohmann::json& doc) {
  try {
    return SpinePair{doc.at("alpha").get<std::vector<Point>>(),
                     doc.at("beta").get<std::vector<Point>>()};
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed spine: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Portrait

namespace {

std::string zero_based_cycles(const Permutation& p) {
  std::string out;
  for (const auto& cycle : p.cycles()) {
    out += '(';
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(cycle[i]);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

void render(const Portrait& p, int indent, std::ostringstream& out) {
  out << zero_based_cycles(*p.perm) << '\n';
  for (const auto& [x, child] : p.children) {
    out << std::string(static_cast<std::size_t>(indent + 2), ' ') << '[' << x << "] ";
    if (child)
      render(*child, indent + 2, out);
    else
      out << "...\n";
  }
}

}  // namespace

nlohmann::ordered_json Portrait::to_json() const {
  nlohmann::ordered_json doc;
  const auto images = perm->images();
  doc["perm"] = std::vector<Point>(images.begin(), images.end());
  if (!children.empty()) {
    nlohmann::ordered_json kids = nlohmann::ordered_json::object();
    for (const auto& [x, child] : children)
      kids[std::to_string(x)] = child ? child->to_json() : nlohmann::ordered_json("trunc");
    doc["children"] = std::move(kids);
  }
  return doc;
}

std::string Portrait::to_text() const {
  std::ostringstream out;
  out << "level " << level << ", depth " << depth << ": ";
  render(*this, 0, out);
  return out.str();
}

bool operator==(const Portrait& a, const Portrait& b) {
  return a.level == b.level && a.depth == b.depth && *a.perm == *b.perm &&
         a.children == b.children;
}

// ---------------------------------------------------------------------------
// TreeContext: construction and interning

TreeContext::TreeContext(TreeShape shape, SpinePair spine, TreeOptions options)
    : shape_(std::move(shape)), spine_(std::move(spine)), options_(options) {}

std::shared_ptr<TreeContext> TreeContext::create(TreeShape shape, SpinePair spine,
                                                 TreeOptions options) {
  const int needed = shape.horizon() - 1;
  for (const auto* side : {&spine.alpha, &spine.beta})
    if (static_cast<int>(side->size()) < needed)
      throw ConfigError("spine covers " + std::to_string(side->size()) +
                        " levels; horizon " + std::to_string(shape.horizon()) + " needs " +
                        std::to_string(needed));
  for (int i = 1; i <= shape.horizon(); ++i) {
    const auto k = static_cast<std::size_t>(i - 1);
    if (k >= spine.alpha.size() || k >= spine.beta.size()) break;
    const std::size_t size = shape.level(i).x_size();
    const Point a = spine.alpha[k], b = spine.beta[k];
    const std::string at = " at level " + std::to_string(i);
    if (a >= size || b >= size) throw PreconditionError("spine point outside X" + at);
    if (a == 0 || b == 0) throw PreconditionError("spine point equals o" + at);
    if (a == b) throw PreconditionError("alpha equals beta" + at);
  }
  return std::shared_ptr<TreeContext>(
      new TreeContext(std::move(shape), std::move(spine), options));
}

std::size_t TreeContext::node_count() const {
  std::lock_guard lock(mutex_);
  return nodes_.size();
}

int TreeContext::level_of(const TreeAut& g) const {
  std::lock_guard lock(mutex_);
  check_owned(g);
  return nodes_[g.id()].level;
}

int TreeAut::level() const {
  if (!ctx_) throw DomainError("empty tree automorphism handle");
  return ctx_->level_of(*this);
}

void TreeContext::check_owned(const TreeAut& g) const {
  if (g.context().get() != this || g.id() >= nodes_.size())
    throw DomainError("automorphism belongs to a different tree context");
}

void TreeContext::require_expandable(int level, const char* what) const {
  if (level >= horizon())
    throw ConfigError(std::string(what) + " at level " + std::to_string(level) +
                      " needs level " + std::to_string(level + 1) + " data; horizon is " +
                      std::to_string(horizon()));
}

namespace {

void put(std::string& key, std::uint64_t v) {
  key.append(reinterpret_cast<const char*>(&v), sizeof v);
}

}  // namespace

std::uint32_t TreeContext::intern(Node node, const std::string& key) {
  auto it = interned_.find(key);
  if (it != interned_.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(node));
  interned_.emplace(key, id);
  return id;
}

std::uint32_t TreeContext::make_identity(int level) {
  auto it = identities_.find(level);
  if (it != identities_.end()) return it->second;
  std::string key(1, 'I');
  put(key, static_cast<std::uint64_t>(level));
  const auto id = intern(Node(Kind::Identity, level), key);
  identities_.emplace(level, id);
  return id;
}

std::uint32_t TreeContext::make_rooted(const Permutation& natural, int level) {
  const LevelData& data = shape_.level(level);
  if (natural.degree() != data.alt_degree())
    throw DomainError("rooted element has degree " + std::to_string(natural.degree()) +
                      ", level " + std::to_string(level) + " needs " +
                      std::to_string(data.alt_degree()));
  if (!natural.is_even()) throw DomainError("rooted element " + natural.to_string() + " is odd");
  if (natural.is_identity()) return make_identity(level);
  std::string key(1, 'R');
  put(key, static_cast<std::uint64_t>(level));
  for (Point y : natural.images()) key.push_back(static_cast<char>(y));
  Node node{Kind::Rooted, level};
  node.natural = natural;
  return intern(std::move(node), key);
}

std::uint32_t TreeContext::make_directed(Side side, const Permutation& q5, const GWord& g,
                                         int level) {
  shape_.level(level);
  if (side == Side::Alpha ? q5.is_identity() : g.empty()) return make_identity(level);
  std::string key(1, side == Side::Alpha ? 'Q' : 'G');
  put(key, static_cast<std::uint64_t>(level));
  Node node{Kind::Directed, level};
  node.side = side;
  if (side == Side::Alpha) {
    if (q5.degree() != 5) throw DomainError("Q elements are permutations of 5 points");
    if (!q5.is_even()) throw DomainError("Q element " + q5.to_string() + " is odd");
    for (Point y : q5.images()) key.push_back(static_cast<char>(y));
    node.natural = q5;
  } else {
    for (int l : g.letters()) put(key, static_cast<std::uint64_t>(static_cast<std::int64_t>(l)));
    node.word = g;
  }
  return intern(std::move(node), key);
}

std::uint32_t TreeContext::make_embed(int level, Point x, std::uint32_t child) {
  if (nodes_[child].level != level + 1) throw DomainError("embedded child is at the wrong level");
  if (x >= shape_.level(level).x_size()) throw DomainError("embedding point outside X");
  if (nodes_[child].kind == Kind::Identity) return make_identity(level);
  std::string key(1, 'E');
  put(key, static_cast<std::uint64_t>(level));
  put(key, x);
  put(key, child);
  Node node{Kind::Embed, level};
  node.x = x;
  node.a = child;
  return intern(std::move(node), key);
}

std::uint32_t TreeContext::make_product(std::uint32_t g, std::uint32_t h) {
  const Node& ng = nodes_[g];
  const Node& nh = nodes_[h];
  if (ng.level != nh.level) throw DomainError("composing automorphisms of different levels");
  if (ng.kind == Kind::Identity) return h;
  if (nh.kind == Kind::Identity) return g;
  if (ng.kind == Kind::Rooted && nh.kind == Kind::Rooted)
    return make_rooted(branchforge::compose(ng.natural, nh.natural), ng.level);
  if ((ng.kind == Kind::Inverse && ng.a == h) || (nh.kind == Kind::Inverse && nh.a == g))
    return make_identity(ng.level);
  std::string key(1, 'P');
  put(key, g);
  put(key, h);
  Node node{Kind::Product, ng.level};
  node.a = g;
  node.b = h;
  return intern(std::move(node), key);
}

std::uint32_t TreeContext::make_inverse(std::uint32_t g) {
  const Node& ng = nodes_[g];
  switch (ng.kind) {
    case Kind::Identity:
      return g;
    case Kind::Inverse:
      return ng.a;
    case Kind::Rooted:
      return make_rooted(ng.natural.inverse(), ng.level);
    case Kind::Directed: {
      const int level = ng.level;
      if (ng.side == Side::Alpha) return make_directed(Side::Alpha, ng.natural.inverse(), {}, level);
      return make_directed(Side::Beta, Permutation(), ng.word.inverse(), level);
    }
    case Kind::Embed: {
      const int level = ng.level;
      const Point x = ng.x;
      return make_embed(level, x, make_inverse(ng.a));
    }
    case Kind::Product:
      break;
  }
  std::string key(1, 'V');
  put(key, g);
  Node node{Kind::Inverse, ng.level};
  node.a = g;
  return intern(std::move(node), key);
}

std::uint32_t TreeContext::make_power(std::uint32_t g, long long k) {
  std::uint32_t base = k < 0 ? make_inverse(g) : g;
  unsigned long long e = k < 0 ? 0ull - static_cast<unsigned long long>(k)
                               : static_cast<unsigned long long>(k);
  std::uint32_t result = make_identity(nodes_[g].level);
  while (e > 0) {
    if (e & 1u) result = make_product(result, base);
    e >>= 1u;
    if (e) base = make_product(base, base);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Roots and sections

const std::shared_ptr<const Permutation>& TreeContext::root_of(std::uint32_t id) {
  if (nodes_[id].root_ready) return nodes_[id].root;
  std::shared_ptr<const Permutation> root;
  std::shared_ptr<const Permutation> root_inv;
  const Node& n = nodes_[id];
  switch (n.kind) {
    case Kind::Identity:
    case Kind::Directed:
    case Kind::Embed:
      break;
    case Kind::Rooted: {
      const LevelData& data = shape_.level(n.level);
      root = data.on_x(n.natural);
      root_inv = data.on_x(n.natural.inverse());
      break;
    }
    case Kind::Inverse: {
      const auto a = n.a;
      root = root_inv_of(a);
      root_inv = root_of(a);
      break;
    }
    case Kind::Product: {
      const auto a = n.a, b = n.b;
      const auto ra = root_of(a);
      const auto rb = root_of(b);
      if (!ra)
        root = rb;
      else if (!rb)
        root = ra;
      else {
        auto p = branchforge::compose(*ra, *rb);
        if (!p.is_identity()) root = std::make_shared<const Permutation>(std::move(p));
      }
      if (root == ra || root == rb) {
        root_inv = root == ra ? root_inv_of(a) : root_inv_of(b);
      } else if (root) {
        root_inv = std::make_shared<const Permutation>(root->inverse());
      }
      break;
    }
  }
  Node& m = nodes_[id];
  m.root = std::move(root);
  m.root_inv = std::move(root_inv);
  m.root_ready = true;
  return m.root;
}

const std::shared_ptr<const Permutation>& TreeContext::root_inv_of(std::uint32_t id) {
  root_of(id);
  return nodes_[id].root_inv;
}

Point TreeContext::image(std::uint32_t id, Point x) {
  const auto& r = root_of(id);
  return r ? (*r)(x) : x;
}

Point TreeContext::preimage(std::uint32_t id, Point x) {
  const auto& r = root_inv_of(id);
  return r ? (*r)(x) : x;
}

TreeContext::Expansion TreeContext::compute_expansion(std::uint32_t id) {
  const Node n = nodes_[id];
  Expansion out;
  switch (n.kind) {
    case Kind::Identity:
    case Kind::Rooted:
      break;
    case Kind::Directed: {
      require_expandable(n.level, "directed automorphism");
      const int next = n.level + 1;
      const auto k = static_cast<std::size_t>(n.level - 1);
      out.emplace_back(0, make_directed(n.side, n.natural, n.word, next));
      const LevelData& data = shape_.level(next);
      Permutation companion = n.side == Side::Alpha ? data.q_natural(n.natural)
                                                    : data.g_natural(n.word);
      const Point at = n.side == Side::Alpha ? spine_.alpha[k] : spine_.beta[k];
      const auto rooted = make_rooted(companion, next);
      if (nodes_[rooted].kind != Kind::Identity) out.emplace_back(at, rooted);
      break;
    }
    case Kind::Embed:
      require_expandable(n.level, "embedded automorphism");
      out.emplace_back(n.x, n.a);
      break;
    case Kind::Inverse: {
      const auto inner = expansion_of(n.a);
      for (const auto& [y, s] : *inner) out.emplace_back(image(n.a, y), make_inverse(s));
      std::sort(out.begin(), out.end());
      break;
    }
    case Kind::Product: {
      // (gh)|_x = g|_{h(x)} h|_x, nontrivial only on supp(h) ∪ h^-1(supp(g))
      const auto eg = expansion_of(n.a);
      const auto eh = expansion_of(n.b);
      std::vector<Point> candidates;
      candidates.reserve(eg->size() + eh->size());
      for (const auto& [x, s] : *eh) candidates.push_back(x);
      for (const auto& [y, s] : *eg) candidates.push_back(preimage(n.b, y));
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      for (Point x : candidates) {
        const auto s = make_product(section_of(n.a, image(n.b, x)), section_of(n.b, x));
        if (nodes_[s].kind != Kind::Identity) out.emplace_back(x, s);
      }
      break;
    }
  }
  return out;
}

std::shared_ptr<const TreeContext::Expansion> TreeContext::expansion_of(std::uint32_t id) {
  if (nodes_[id].expansion) return nodes_[id].expansion;
  auto e = std::make_shared<const Expansion>(compute_expansion(id));
  if (options_.memoize) nodes_[id].expansion = e;
  return e;
}

std::uint32_t TreeContext::section_of(std::uint32_t id, Point x) {
  const auto e = expansion_of(id);
  auto it = std::lower_bound(e->begin(), e->end(), x,
                             [](const auto& entry, Point p) { return entry.first < p; });
  if (it != e->end() && it->first == x) return it->second;
  return make_identity(nodes_[id].level + 1);
}

std::uint32_t TreeContext::cycle_section(std::uint32_t id, Point x, std::uint64_t* length) {
  // g^c|_x = g|_{g^{c-1}x} ... g|_{gx} g|_x
  std::uint32_t s = section_of(id, x);
  std::uint64_t c = 1;
  for (Point y = image(id, x); y != x; y = image(id, y), ++c) s = make_product(section_of(id, y), s);
  if (length) *length = c;
  return s;
}

bool TreeContext::identity_up_to(std::uint32_t id, int depth) {
  const Node& n = nodes_[id];
  if (n.kind == Kind::Identity) return true;
  if (options_.memoize) {
    if (n.identity_depth >= depth) return true;
    if (n.non_identity_depth >= 0 && n.non_identity_depth <= depth) return false;
  }
  bool result = !root_of(id);
  if (result && depth > 0) {
    const auto e = expansion_of(id);
    for (const auto& [x, s] : *e)
      if (!identity_up_to(s, depth - 1)) {
        result = false;
        break;
      }
  }
  if (options_.memoize) {
    Node& m = nodes_[id];
    if (result)
      m.identity_depth = std::max(m.identity_depth, depth);
    else if (m.non_identity_depth < 0 || depth < m.non_identity_depth)
      m.non_identity_depth = depth;
  }
  return result;
}

BigInt TreeContext::order_up_to(std::uint32_t id, int depth) {
  const auto r = root_of(id);
  if (depth == 0) return r ? BigInt(r->order()) : BigInt(1);
  const auto e = expansion_of(id);
  BigInt result = 1;
  if (!r) {
    for (const auto& [x, s] : *e) result = boost::integer::lcm(result, order_up_to(s, depth - 1));
    return result;
  }
  std::vector<char> in_support(r->degree(), 0);
  for (const auto& [x, s] : *e) in_support[x] = 1;
  std::vector<char> seen(r->degree(), 0);
  for (Point x = 0; x < r->degree(); ++x) {
    if (seen[x]) continue;
    std::uint64_t c = 0;
    bool touches = false;
    for (Point y = x; !seen[y]; y = (*r)(y)) {
      seen[y] = 1;
      touches = touches || in_support[y];
      ++c;
    }
    BigInt contribution = c;
    if (touches) contribution *= order_up_to(cycle_section(id, x, nullptr), depth - 1);
    result = boost::integer::lcm(result, contribution);
  }
  return result;
}

Portrait TreeContext::portrait_of(std::uint32_t id, int depth) {
  Portrait p;
  p.level = nodes_[id].level;
  p.depth = depth;
  const auto& r = root_of(id);
  p.perm = r ? r : std::make_shared<const Permutation>(shape_.level(p.level).x_size());
  if (p.level >= horizon()) return p;
  const auto e = expansion_of(id);
  for (const auto& [x, s] : *e) {
    if (depth == 0) {
      p.children.emplace(x, std::nullopt);
    } else if (!identity_up_to(s, depth - 1)) {
      p.children.emplace(x, portrait_of(s, depth - 1));
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Public surface

TreeAut TreeContext::identity(int level) {
  std::lock_guard lock(mutex_);
  shape_.level(level);
  return handle(make_identity(level));
}

TreeAut TreeContext::rooted(const Permutation& natural, int level) {
  std::lock_guard lock(mutex_);
  return handle(make_rooted(natural, level));
}

TreeAut TreeContext::directed_q(const Permutation& q5, int level) {
  std::lock_guard lock(mutex_);
  return handle(make_directed(Side::Alpha, q5, {}, level));
}

TreeAut TreeContext::directed_g(const GWord& g, int level) {
  std::lock_guard lock(mutex_);
  const auto& gens = shape_.level(level).quotient_group().generators;
  for (int l : g.letters())
    if (static_cast<std::size_t>(std::abs(l)) > gens.size())
      throw DomainError("G-word uses an unknown generator");
  return handle(make_directed(Side::Beta, Permutation(), g, level));
}

TreeAut TreeContext::embed(int level, Point x, const TreeAut& child) {
  std::lock_guard lock(mutex_);
  check_owned(child);
  return handle(make_embed(level, x, child.id()));
}

TreeAut TreeContext::compose(const TreeAut& g, const TreeAut& h) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  check_owned(h);
  return handle(make_product(g.id(), h.id()));
}

TreeAut TreeContext::inverse(const TreeAut& g) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  return handle(make_inverse(g.id()));
}

TreeAut TreeContext::power(const TreeAut& g, long long k) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  return handle(make_power(g.id(), k));
}

std::shared_ptr<const Permutation> TreeContext::root(const TreeAut& g) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  const auto& r = root_of(g.id());
  return r ? r : std::make_shared<const Permutation>(shape_.level(nodes_[g.id()].level).x_size());
}

Point TreeContext::apply_root(const TreeAut& g, Point x) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  if (x >= shape_.level(nodes_[g.id()].level).x_size())
    throw DomainError("letter " + std::to_string(x) + " outside the alphabet");
  return image(g.id(), x);
}

Vertex TreeContext::apply(const TreeAut& g, const Vertex& v) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  Vertex out;
  out.reserve(v.size());
  std::uint32_t cur = g.id();
  const int level = nodes_[cur].level;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int at = level + static_cast<int>(i);
    if (v[i] >= shape_.level(at).x_size())
      throw DomainError("letter " + std::to_string(v[i]) + " outside the alphabet of level " +
                        std::to_string(at));
    out.push_back(image(cur, v[i]));
    if (i + 1 < v.size()) cur = section_of(cur, v[i]);
  }
  return out;
}

TreeAut TreeContext::section(const TreeAut& g, Point x) { return section(g, Vertex{x}); }

TreeAut TreeContext::section(const TreeAut& g, const Vertex& u) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  std::uint32_t cur = g.id();
  for (Point x : u) {
    const int at = nodes_[cur].level;
    if (x >= shape_.level(at).x_size()) throw DomainError("letter outside the alphabet");
    require_expandable(at, "section");
    cur = section_of(cur, x);
  }
  return handle(cur);
}

std::vector<Point> TreeContext::support(const TreeAut& g) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  std::vector<Point> out;
  if (nodes_[g.id()].level >= horizon()) return out;
  for (const auto& [x, s] : *expansion_of(g.id())) out.push_back(x);
  return out;
}

bool TreeContext::is_trivial_node(const TreeAut& g) const {
  std::lock_guard lock(mutex_);
  check_owned(g);
  return nodes_[g.id()].kind == Kind::Identity;
}

bool TreeContext::is_rooted(const TreeAut& g) const {
  std::lock_guard lock(mutex_);
  check_owned(g);
  const auto kind = nodes_[g.id()].kind;
  return kind == Kind::Rooted || kind == Kind::Identity;
}

std::uint64_t TreeContext::orbit_length(const TreeAut& g, const Vertex& u) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  if (u.empty()) return 1;
  // l_{xv}(g) = l_x(g) * l_v(g^{l_x}|_x)
  std::uint64_t total = 1;
  std::uint32_t cur = g.id();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const int at = nodes_[cur].level;
    if (u[i] >= shape_.level(at).x_size()) throw DomainError("letter outside the alphabet");
    std::uint64_t c = 1;
    if (i + 1 < u.size()) {
      require_expandable(at, "orbit length");
      cur = cycle_section(cur, u[i], &c);
    } else {
      for (Point y = image(cur, u[i]); y != u[i]; y = image(cur, y)) ++c;
    }
    if (total > UINT64_MAX / c) throw ResourceError("orbit length overflows 64 bits");
    total *= c;
  }
  return total;
}

TreeAut TreeContext::stabilized_section(const TreeAut& g, const Vertex& u) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  if (u.empty()) return g;
  if (u.size() == 1) {
    require_expandable(nodes_[g.id()].level, "stabilized section");
    if (u[0] >= shape_.level(nodes_[g.id()].level).x_size())
      throw DomainError("letter outside the alphabet");
    return handle(cycle_section(g.id(), u[0], nullptr));
  }
  const std::uint64_t l = orbit_length(g, u);
  if (l > static_cast<std::uint64_t>(INT64_MAX)) throw ResourceError("orbit length too large");
  return section(power(g, static_cast<long long>(l)), u);
}

Portrait TreeContext::truncate(const TreeAut& g, int depth) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  const int level = nodes_[g.id()].level;
  if (depth < 0 || level + depth > horizon())
    throw ConfigError("portrait depth " + std::to_string(depth) + " at level " +
                      std::to_string(level) + " exceeds horizon " + std::to_string(horizon()));
  return portrait_of(g.id(), depth);
}

bool TreeContext::is_identity_up_to_depth(const TreeAut& g, int depth) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  const int level = nodes_[g.id()].level;
  if (depth < 0 || level + depth > horizon())
    throw ConfigError("depth " + std::to_string(depth) + " at level " + std::to_string(level) +
                      " exceeds horizon " + std::to_string(horizon()));
  return identity_up_to(g.id(), depth);
}

bool TreeContext::equal_up_to_depth(const TreeAut& g, const TreeAut& h, int depth) {
  std::lock_guard lock(mutex_);
  return is_identity_up_to_depth(compose(g, inverse(h)), depth);
}

BigInt TreeContext::truncated_order(const TreeAut& g, int depth) {
  std::lock_guard lock(mutex_);
  check_owned(g);
  const int level = nodes_[g.id()].level;
  if (depth < 0 || level + depth > horizon())
    throw ConfigError("depth " + std::to_string(depth) + " exceeds horizon");
  return order_up_to(g.id(), depth);
}

}  // namespace branchforge
