#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "branchforge/altembed.hpp"

namespace branchforge {

/// Vertex of T_j as letters x_j x_{j+1} ... (coset indices, 0-based).
using Vertex = std::vector<Point>;

/// Level data for levels 1..horizon. Trees T_j for j >= 1 read from it.
class TreeShape {
 public:
  TreeShape() = default;
  explicit TreeShape(std::vector<LevelData> levels);

  int horizon() const noexcept { return static_cast<int>(levels_.size()); }
  /// 1-based; ConfigError past the horizon.
  const LevelData& level(int i) const;

 private:
  std::vector<LevelData> levels_;
};

/// Levels 1..horizon from a quotient chain. Levels sharing a quotient share
/// their coset tables.
TreeShape build_tree_shape(const GroupChainSpec& spec, int horizon,
                           std::size_t degree_cap = kDefaultDegreeCap);

/// Spine parameters indexed by absolute level: alpha[i-1] is the point of
/// X_i carrying the rooted companion of directed Q elements, beta[i-1] the
/// one for directed G elements.
struct SpinePair {
  std::vector<Point> alpha, beta;

  nlohmann::json to_json() const;
  static SpinePair from_json(const nlohmann::json& doc);
};

/// Finite materialization of a tree automorphism. `children` holds the
/// sections that are not the identity down to `depth`; at depth 0 they are
/// marked truncated instead.
struct Portrait {
  int level = 1;
  int depth = 0;
  std::shared_ptr<const Permutation> perm;  // on X_level
  std::map<Point, std::optional<Portrait>> children;  // nullopt: truncated

  /// Children keyed by letter index in ascending numeric order.
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
  friend bool operator==(const Portrait& a, const Portrait& b);
};

class TreeContext;

/// Handle to an automorphism of T_level, stored as a node of a hash-consed
/// lazy DAG owned by a TreeContext.
class TreeAut {
 public:
  TreeAut() = default;

  int level() const;
  std::uint32_t id() const noexcept { return id_; }
  const std::shared_ptr<TreeContext>& context() const noexcept { return ctx_; }
  bool valid() const noexcept { return ctx_ != nullptr; }

  friend bool operator==(const TreeAut& a, const TreeAut& b) {
    return a.ctx_ == b.ctx_ && a.id_ == b.id_;
  }

 private:
  friend class TreeContext;
  TreeAut(std::shared_ptr<TreeContext> ctx, std::uint32_t id) : ctx_(std::move(ctx)), id_(id) {}
  std::shared_ptr<TreeContext> ctx_;
  std::uint32_t id_ = 0;
};

struct TreeOptions {
  /// Off: sections and identity tests are recomputed on every request.
  bool memoize = true;
};

/// Owns the node DAG for one shape and spine. All operations lock an
/// internal recursive mutex, so handles may be used from several threads.
class TreeContext : public std::enable_shared_from_this<TreeContext> {
 public:
  static std::shared_ptr<TreeContext> create(TreeShape shape, SpinePair spine,
                                             TreeOptions options = {});

  const TreeShape& shape() const noexcept { return shape_; }
  const SpinePair& spine() const noexcept { return spine_; }
  int horizon() const noexcept { return shape_.horizon(); }
  const TreeOptions& options() const noexcept { return options_; }
  std::size_t node_count() const;
  int level_of(const TreeAut& g) const;

  // constructors
  TreeAut identity(int level);
  /// Rooted automorphism of T_level from an element of A_level given on its
  /// natural 2n+3 points.
  TreeAut rooted(const Permutation& natural, int level);
  /// Directed along alpha for a Q element (degree 5).
  TreeAut directed_q(const Permutation& q5, int level);
  /// Directed along beta for a G element.
  TreeAut directed_g(const GWord& g, int level);
  /// Element of T_level acting as `child` below x and trivially elsewhere.
  TreeAut embed(int level, Point x, const TreeAut& child);

  TreeAut compose(const TreeAut& g, const TreeAut& h);  // g after h
  TreeAut inverse(const TreeAut& g);
  TreeAut power(const TreeAut& g, long long k);

  // queries
  std::shared_ptr<const Permutation> root(const TreeAut& g);  // never null
  Point apply_root(const TreeAut& g, Point x);
  Vertex apply(const TreeAut& g, const Vertex& v);
  TreeAut section(const TreeAut& g, Point x);
  TreeAut section(const TreeAut& g, const Vertex& u);
  /// Points of X_level whose section is not structurally trivial, ascending.
  std::vector<Point> support(const TreeAut& g);
  bool is_trivial_node(const TreeAut& g) const;
  bool is_rooted(const TreeAut& g) const;

  /// Smallest l >= 1 with g^l(u) = u.
  std::uint64_t orbit_length(const TreeAut& g, const Vertex& u);
  /// g^{l}|_u with l the orbit length of u.
  TreeAut stabilized_section(const TreeAut& g, const Vertex& u);

  Portrait truncate(const TreeAut& g, int depth);
  bool is_identity_up_to_depth(const TreeAut& g, int depth);
  bool equal_up_to_depth(const TreeAut& g, const TreeAut& h, int depth);
  /// Order of the action of g on the vertices of length depth+1.
  BigInt truncated_order(const TreeAut& g, int depth);

 private:
  enum class Kind : std::uint8_t { Identity, Rooted, Directed, Product, Inverse, Embed };
  enum class Side : std::uint8_t { Alpha, Beta };
  using Expansion = std::vector<std::pair<Point, std::uint32_t>>;

  struct Node {
    Node(Kind k, int l) : kind(k), level(l) {}
    Kind kind;
    int level;
    std::uint32_t a = 0, b = 0;
    Point x = 0;
    Side side = Side::Alpha;
    Permutation natural;  // Rooted: element of A_level; Directed Q: element of Alt(5)
    GWord word;           // Directed G
    std::shared_ptr<const Permutation> root;      // null: identity
    std::shared_ptr<const Permutation> root_inv;  // null: identity
    bool root_ready = false;
    std::shared_ptr<const Expansion> expansion;
    int identity_depth = -1;      // known identity up to this depth
    int non_identity_depth = -1;  // known non-identity at this depth (smallest seen)
  };

  TreeContext(TreeShape shape, SpinePair spine, TreeOptions options);
  TreeAut handle(std::uint32_t id) { return TreeAut(shared_from_this(), id); }
  void check_owned(const TreeAut& g) const;
  void require_expandable(int level, const char* what) const;

  std::uint32_t intern(Node node, const std::string& key);
  std::uint32_t make_identity(int level);
  std::uint32_t make_rooted(const Permutation& natural, int level);
  std::uint32_t make_directed(Side side, const Permutation& q5, const GWord& g, int level);
  std::uint32_t make_embed(int level, Point x, std::uint32_t child);
  std::uint32_t make_product(std::uint32_t g, std::uint32_t h);
  std::uint32_t make_inverse(std::uint32_t g);
  std::uint32_t make_power(std::uint32_t g, long long k);

  const std::shared_ptr<const Permutation>& root_of(std::uint32_t id);
  const std::shared_ptr<const Permutation>& root_inv_of(std::uint32_t id);
  Point image(std::uint32_t id, Point x);
  Point preimage(std::uint32_t id, Point x);
  std::shared_ptr<const Expansion> expansion_of(std::uint32_t id);
  Expansion compute_expansion(std::uint32_t id);
  std::uint32_t section_of(std::uint32_t id, Point x);
  std::uint32_t cycle_section(std::uint32_t id, Point x, std::uint64_t* length);
  bool identity_up_to(std::uint32_t id, int depth);
  BigInt order_up_to(std::uint32_t id, int depth);
  Portrait portrait_of(std::uint32_t id, int depth);

  TreeShape shape_;
  SpinePair spine_;
  TreeOptions options_;
  mutable std::recursive_mutex mutex_;
  std::deque<Node> nodes_;
  std::unordered_map<std::string, std::uint32_t> interned_;
  std::map<int, std::uint32_t> identities_;
};

}  // namespace branchforge
