#pragma once

// 3D tiled NoC designs: system configuration, tile placement, planar link
// sets, deterministic minimal routing, and the move neighborhood used by the
// searches.
//
// Tiles are indexed x + X*(y + Y*z). Layer z = 0 is the layer nearest the
// heat sink. Vertical links are full pillars between (x, y, z) and
// (x, y, z + 1) and are never moved; only planar links are part of the
// searchable state.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "noc3d/error.hpp"
#include "noc3d/rng.hpp"

namespace noc3d {

enum class CoreKind : std::uint8_t { Cpu = 0, Llc = 1, Gpu = 2 };

inline constexpr std::array<CoreKind, 3> kCoreKinds{CoreKind::Cpu, CoreKind::Llc, CoreKind::Gpu};

constexpr std::string_view to_string(CoreKind kind) noexcept {
  switch (kind) {
    case CoreKind::Cpu: return "CPU";
    case CoreKind::Llc: return "LLC";
    case CoreKind::Gpu: return "GPU";
  }
  return "?";
}

constexpr std::size_t kind_slot(CoreKind kind) noexcept { return static_cast<std::size_t>(kind); }

struct Dims {
  int x = 1;
  int y = 1;
  int z = 1;

  constexpr int layer_size() const noexcept { return x * y; }
  constexpr int tiles() const noexcept { return x * y * z; }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

struct Coord {
  int x = 0;
  int y = 0;
  int z = 0;
};

constexpr Coord coord_of(const Dims& dims, int tile) noexcept {
  return {tile % dims.x, (tile / dims.x) % dims.y, tile / dims.layer_size()};
}

constexpr int tile_at(const Dims& dims, Coord c) noexcept {
  return c.x + dims.x * (c.y + dims.y * c.z);
}

constexpr int layer_of(const Dims& dims, int tile) noexcept { return tile / dims.layer_size(); }

struct SystemConfig {
  Dims dims;
  int n_cpu = 0;
  int n_llc = 0;
  int n_gpu = 0;
  int router_stages = 3;

  int tile_count() const noexcept { return dims.tiles(); }
  int core_count() const noexcept { return n_cpu + n_llc + n_gpu; }

  // Planar links of the equivalent X*Y*Z mesh; every design keeps exactly this many.
  int link_budget_planar() const noexcept {
    return dims.z * (dims.x * (dims.y - 1) + dims.y * (dims.x - 1));
  }
  int vertical_link_count() const noexcept { return dims.x * dims.y * (dims.z - 1); }

  int kind_count(CoreKind kind) const noexcept {
    switch (kind) {
      case CoreKind::Cpu: return n_cpu;
      case CoreKind::Llc: return n_llc;
      case CoreKind::Gpu: return n_gpu;
    }
    return 0;
  }

  // Global core ids are CPUs first, then LLCs, then GPUs.
  int kind_offset(CoreKind kind) const noexcept {
    switch (kind) {
      case CoreKind::Cpu: return 0;
      case CoreKind::Llc: return n_cpu;
      case CoreKind::Gpu: return n_cpu + n_llc;
    }
    return 0;
  }

  CoreKind kind_of_core(int core_id) const noexcept {
    if (core_id < n_cpu) return CoreKind::Cpu;
    if (core_id < n_cpu + n_llc) return CoreKind::Llc;
    return CoreKind::Gpu;
  }

  void validate() const {
    if (dims.x < 1 || dims.y < 1 || dims.z < 1) throw ConfigError("dims", "grid extents must be >= 1");
    if (dims.tiles() > 4096) throw ConfigError("dims", "at most 4096 tiles are supported");
    if (n_cpu < 0) throw ConfigError("n_cpu", "must be >= 0");
    if (n_llc < 0) throw ConfigError("n_llc", "must be >= 0");
    if (n_gpu < 0) throw ConfigError("n_gpu", "must be >= 0");
    if (core_count() != tile_count()) {
      throw ConfigError("n_cpu", "core counts (" + std::to_string(n_cpu) + " CPU + " +
                                     std::to_string(n_llc) + " LLC + " + std::to_string(n_gpu) +
                                     " GPU) must sum to the tile count " +
                                     std::to_string(tile_count()));
    }
    if (router_stages < 1) throw ConfigError("router_stages", "must be >= 1");
  }

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

// A core sitting on a tile: its kind and its index among cores of that kind.
struct Core {
  CoreKind kind = CoreKind::Gpu;
  int index = 0;

  friend constexpr auto operator<=>(const Core&, const Core&) = default;
};

inline std::string core_label(Core core) {
  return std::string(to_string(core.kind)) + std::to_string(core.index);
}

inline std::optional<Core> parse_core_label(std::string_view label) {
  if (label.size() < 4) return std::nullopt;
  Core core;
  const auto prefix = label.substr(0, 3);
  if (prefix == "CPU") core.kind = CoreKind::Cpu;
  else if (prefix == "LLC") core.kind = CoreKind::Llc;
  else if (prefix == "GPU") core.kind = CoreKind::Gpu;
  else return std::nullopt;
  int index = 0;
  for (char c : label.substr(3)) {
    if (c < '0' || c > '9') return std::nullopt;
    index = index * 10 + (c - '0');
    if (index > 1'000'000) return std::nullopt;
  }
  core.index = index;
  return core;
}

// Unordered tile pair, stored with a < b.
struct Link {
  int a = 0;
  int b = 0;

  static constexpr Link between(int u, int v) noexcept { return u < v ? Link{u, v} : Link{v, u}; }
  friend constexpr auto operator<=>(const Link&, const Link&) = default;
};

class Design {
 public:
  Design() = default;

  Design(Dims dims, std::vector<Core> placement, std::vector<Link> planar_links)
      : dims_(dims), placement_(std::move(placement)), links_(std::move(planar_links)) {
    for (auto& link : links_) link = Link::between(link.a, link.b);
    std::sort(links_.begin(), links_.end());
    index_cores();
  }

  const Dims& dims() const noexcept { return dims_; }
  int tile_count() const noexcept { return dims_.tiles(); }
  std::span<const Core> placement() const noexcept { return placement_; }
  std::span<const Link> planar_links() const noexcept { return links_; }
  const Core& core_at(int tile) const { return placement_[static_cast<std::size_t>(tile)]; }

  int planar_link_count() const noexcept { return static_cast<int>(links_.size()); }
  int vertical_link_count() const noexcept { return dims_.layer_size() * (dims_.z - 1); }
  int link_count() const noexcept { return planar_link_count() + vertical_link_count(); }

  // Link ids: planar links 0..P-1 in sorted order, then vertical pillar
  // segments P + t for the segment above tile t.
  bool is_vertical(int link) const noexcept { return link >= planar_link_count(); }

  Link endpoints(int link) const noexcept {
    if (!is_vertical(link)) return links_[static_cast<std::size_t>(link)];
    const int lower = link - planar_link_count();
    return {lower, lower + dims_.layer_size()};
  }

  // Physical length in tile pitches: Manhattan distance for planar links,
  // one for vertical links.
  double link_length(int link) const noexcept {
    if (is_vertical(link)) return 1.0;
    const Link l = endpoints(link);
    const Coord p = coord_of(dims_, l.a);
    const Coord q = coord_of(dims_, l.b);
    return static_cast<double>(std::abs(p.x - q.x) + std::abs(p.y - q.y));
  }

  bool has_planar_link(Link link) const noexcept {
    return std::binary_search(links_.begin(), links_.end(), Link::between(link.a, link.b));
  }

  std::optional<int> planar_link_id(Link link) const noexcept {
    const Link key = Link::between(link.a, link.b);
    auto it = std::lower_bound(links_.begin(), links_.end(), key);
    if (it == links_.end() || *it != key) return std::nullopt;
    return static_cast<int>(it - links_.begin());
  }

  int kind_count(CoreKind kind) const noexcept { return kind_counts_[kind_slot(kind)]; }

  int kind_offset(CoreKind kind) const noexcept {
    switch (kind) {
      case CoreKind::Cpu: return 0;
      case CoreKind::Llc: return kind_counts_[0];
      case CoreKind::Gpu: return kind_counts_[0] + kind_counts_[1];
    }
    return 0;
  }

  // Global core id of the core on `tile` (CPUs, then LLCs, then GPUs).
  int core_id(int tile) const noexcept {
    const Core& c = core_at(tile);
    return kind_offset(c.kind) + c.index;
  }

  // Inverse of core_id; -1 when the placement does not hold that core.
  int tile_of_core(int core_id) const noexcept {
    if (core_id < 0 || core_id >= static_cast<int>(core_to_tile_.size())) return -1;
    return core_to_tile_[static_cast<std::size_t>(core_id)];
  }

  // Unchecked primitives behind apply_move.
  Design with_swap(int a, int b) const {
    Design next = *this;
    std::swap(next.placement_[static_cast<std::size_t>(a)], next.placement_[static_cast<std::size_t>(b)]);
    next.index_cores();
    return next;
  }

  Design with_relink(int removed_id, Link add) const {
    Design next = *this;
    next.links_.erase(next.links_.begin() + removed_id);
    next.links_.insert(std::lower_bound(next.links_.begin(), next.links_.end(), add), add);
    return next;
  }

  friend bool operator==(const Design& lhs, const Design& rhs) noexcept {
    return lhs.dims_ == rhs.dims_ && lhs.placement_ == rhs.placement_ && lhs.links_ == rhs.links_;
  }

 private:

  void index_cores() {
    kind_counts_ = {0, 0, 0};
    for (const Core& c : placement_) ++kind_counts_[kind_slot(c.kind)];
    core_to_tile_.assign(placement_.size(), -1);
    for (std::size_t t = 0; t < placement_.size(); ++t) {
      const Core& c = placement_[t];
      if (c.index < 0 || c.index >= kind_counts_[kind_slot(c.kind)]) continue;
      const auto id = static_cast<std::size_t>(kind_offset(c.kind) + c.index);
      if (id < core_to_tile_.size()) core_to_tile_[id] = static_cast<int>(t);
    }
  }

  Dims dims_;
  std::vector<Core> placement_;
  std::vector<Link> links_;
  std::array<int, 3> kind_counts_{0, 0, 0};
  std::vector<int> core_to_tile_;
};

// Adjacency view of a design (planar + vertical links) in CSR form, with
// each tile's neighbors sorted by tile index.
class Network {
 public:
  struct Edge {
    int to;
    int link;
  };

  explicit Network(const Design& design) : design_(&design) {
    const int n = design.tile_count();
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    const int links = design.link_count();
    for (int id = 0; id < links; ++id) {
      const Link l = design.endpoints(id);
      ++degree[static_cast<std::size_t>(l.a)];
      ++degree[static_cast<std::size_t>(l.b)];
    }
    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int t = 0; t < n; ++t) offsets_[t + 1] = offsets_[t] + degree[t];
    edges_.resize(static_cast<std::size_t>(offsets_.back()));
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (int id = 0; id < links; ++id) {
      const Link l = design.endpoints(id);
      edges_[static_cast<std::size_t>(fill[l.a]++)] = {l.b, id};
      edges_[static_cast<std::size_t>(fill[l.b]++)] = {l.a, id};
    }
    for (int t = 0; t < n; ++t) {
      std::sort(edges_.begin() + offsets_[t], edges_.begin() + offsets_[t + 1],
                [](const Edge& p, const Edge& q) { return p.to < q.to; });
    }
  }

  const Design& design() const noexcept { return *design_; }
  int size() const noexcept { return static_cast<int>(offsets_.size()) - 1; }

  std::span<const Edge> edges(int tile) const noexcept {
    return {edges_.data() + offsets_[tile], static_cast<std::size_t>(offsets_[tile + 1] - offsets_[tile])};
  }

  int degree(int tile) const noexcept { return offsets_[tile + 1] - offsets_[tile]; }

 private:
  const Design* design_;
  std::vector<int> offsets_;
  std::vector<Edge> edges_;
};

// Breadth-first shortest-path tree. Neighbors are expanded in ascending tile
// order and a tile's parent is the first tile that discovers it, so the tree
// path to every tile is the lexicographically smallest minimal-hop path.
struct BfsTree {
  int source = 0;
  std::vector<int> order;        // tiles in discovery order
  std::vector<int> parent;       // -1 for the source and unreached tiles
  std::vector<int> parent_link;  // link id used to reach the tile
  std::vector<int> depth;        // hop count, -1 if unreached
};

inline BfsTree bfs_tree(const Network& net, int source) {
  const auto n = static_cast<std::size_t>(net.size());
  BfsTree tree;
  tree.source = source;
  tree.order.reserve(n);
  tree.parent.assign(n, -1);
  tree.parent_link.assign(n, -1);
  tree.depth.assign(n, -1);
  tree.depth[static_cast<std::size_t>(source)] = 0;
  tree.order.push_back(source);
  for (std::size_t head = 0; head < tree.order.size(); ++head) {
    const int u = tree.order[head];
    for (const auto& e : net.edges(u)) {
      auto& d = tree.depth[static_cast<std::size_t>(e.to)];
      if (d >= 0) continue;
      d = tree.depth[static_cast<std::size_t>(u)] + 1;
      tree.parent[static_cast<std::size_t>(e.to)] = u;
      tree.parent_link[static_cast<std::size_t>(e.to)] = e.link;
      tree.order.push_back(e.to);
    }
  }
  return tree;
}

inline bool is_connected(const Network& net) {
  if (net.size() <= 1) return true;
  return static_cast<int>(bfs_tree(net, 0).order.size()) == net.size();
}

struct Path {
  int src = 0;
  int dst = 0;
  std::vector<int> routers;  // src ... dst
  std::vector<int> links;    // link ids, one per hop
  int hop_count = 0;
  double link_delay = 0.0;   // sum of link lengths in tile pitches
};

inline Path path_in_tree(const Network& net, const BfsTree& tree, int dst) {
  if (tree.depth[static_cast<std::size_t>(dst)] < 0) {
    throw RoutingError("tile " + std::to_string(dst) + " is unreachable from tile " +
                       std::to_string(tree.source));
  }
  Path path;
  path.src = tree.source;
  path.dst = dst;
  for (int t = dst; t != tree.source; t = tree.parent[static_cast<std::size_t>(t)]) {
    path.routers.push_back(t);
    path.links.push_back(tree.parent_link[static_cast<std::size_t>(t)]);
  }
  path.routers.push_back(tree.source);
  std::reverse(path.routers.begin(), path.routers.end());
  std::reverse(path.links.begin(), path.links.end());
  path.hop_count = static_cast<int>(path.links.size());
  for (int link : path.links) path.link_delay += net.design().link_length(link);
  return path;
}

// Deterministic minimal-hop route; route(d, s, s) is the empty path.
inline Path route(const Design& design, int src, int dst) {
  const int n = design.tile_count();
  if (src < 0 || src >= n || dst < 0 || dst >= n) {
    throw RoutingError("route endpoints out of range");
  }
  const Network net(design);
  return path_in_tree(net, bfs_tree(net, src), dst);
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  DimensionMismatch,
  PlacementSize,
  PlacementMultiset,
  LinkEndpoint,
  CrossLayerLink,
  DuplicateLink,
  LinkBudget,
  Disconnected,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

// Returns every constraint the design breaks; an empty list means valid.
inline std::vector<Violation> validate(const Design& design, const SystemConfig& config) {
  std::vector<Violation> out;
  if (design.dims() != config.dims) {
    out.push_back({ViolationKind::DimensionMismatch, "design dims differ from system config"});
    return out;
  }
  const int n = config.tile_count();
  if (static_cast<int>(design.placement().size()) != n) {
    out.push_back({ViolationKind::PlacementSize, "placement has " +
                                                     std::to_string(design.placement().size()) +
                                                     " entries, expected " + std::to_string(n)});
    return out;
  }

  for (CoreKind kind : kCoreKinds) {
    std::vector<int> seen(static_cast<std::size_t>(std::max(0, config.kind_count(kind))), 0);
    int count = 0;
    bool bad_index = false;
    for (const Core& c : design.placement()) {
      if (c.kind != kind) continue;
      ++count;
      if (c.index < 0 || c.index >= config.kind_count(kind) || seen[static_cast<std::size_t>(c.index)]++) {
        bad_index = true;
      }
    }
    if (count != config.kind_count(kind) || bad_index) {
      out.push_back({ViolationKind::PlacementMultiset,
                     std::string(to_string(kind)) + " cores are not exactly " +
                         std::string(to_string(kind)) + "0.." +
                         std::to_string(config.kind_count(kind) - 1)});
    }
  }

  bool endpoints_ok = true;
  const auto links = design.planar_links();
  for (std::size_t i = 0; i < links.size(); ++i) {
    const Link l = links[i];
    if (l.a < 0 || l.b >= n || l.a == l.b) {
      out.push_back({ViolationKind::LinkEndpoint,
                     "link (" + std::to_string(l.a) + "," + std::to_string(l.b) + ") has invalid endpoints"});
      endpoints_ok = false;
      continue;
    }
    if (layer_of(config.dims, l.a) != layer_of(config.dims, l.b)) {
      out.push_back({ViolationKind::CrossLayerLink,
                     "planar link (" + std::to_string(l.a) + "," + std::to_string(l.b) + ") spans layers"});
    }
    if (i > 0 && links[i - 1] == l) {
      out.push_back({ViolationKind::DuplicateLink,
                     "link (" + std::to_string(l.a) + "," + std::to_string(l.b) + ") appears twice"});
    }
  }
  if (static_cast<int>(links.size()) != config.link_budget_planar()) {
    out.push_back({ViolationKind::LinkBudget, "design has " + std::to_string(links.size()) +
                                                  " planar links, budget is " +
                                                  std::to_string(config.link_budget_planar())});
  }
  if (endpoints_ok && !is_connected(Network(design))) {
    out.push_back({ViolationKind::Disconnected, "some tiles cannot reach each other"});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction

inline std::vector<Core> canonical_placement(const SystemConfig& config) {
  std::vector<Core> placement;
  placement.reserve(static_cast<std::size_t>(config.tile_count()));
  for (CoreKind kind : kCoreKinds) {
    for (int i = 0; i < config.kind_count(kind); ++i) placement.push_back({kind, i});
  }
  return placement;
}

inline std::vector<Link> mesh_links(const Dims& dims) {
  std::vector<Link> links;
  for (int z = 0; z < dims.z; ++z) {
    for (int y = 0; y < dims.y; ++y) {
      for (int x = 0; x < dims.x; ++x) {
        const int t = tile_at(dims, {x, y, z});
        if (x + 1 < dims.x) links.push_back({t, tile_at(dims, {x + 1, y, z})});
        if (y + 1 < dims.y) links.push_back({t, tile_at(dims, {x, y + 1, z})});
      }
    }
  }
  return links;
}

// 3D mesh: nearest-neighbor planar links and full vertical pillars. Without a
// seed the placement is role-ordered (tile i holds core i); with a seed it is
// a uniformly random permutation.
inline Design build_mesh(const SystemConfig& config, std::optional<std::uint64_t> placement_seed = std::nullopt) {
  config.validate();
  auto placement = canonical_placement(config);
  if (placement_seed) {
    Rng rng(*placement_seed);
    rng.shuffle(placement);
  }
  return Design(config.dims, std::move(placement), mesh_links(config.dims));
}

// ---------------------------------------------------------------------------
// Moves

struct SwapTiles {
  int a = 0;
  int b = 0;
  friend constexpr bool operator==(const SwapTiles&, const SwapTiles&) = default;
};

struct MoveLink {
  Link remove;
  Link add;
  friend constexpr bool operator==(const MoveLink&, const MoveLink&) = default;
};

using Move = std::variant<SwapTiles, MoveLink>;

inline std::string describe(const Move& move) {
  if (const auto* s = std::get_if<SwapTiles>(&move)) {
    return "swap(" + std::to_string(s->a) + "," + std::to_string(s->b) + ")";
  }
  const auto& m = std::get<MoveLink>(move);
  return "relink(-" + std::to_string(m.remove.a) + ":" + std::to_string(m.remove.b) + ", +" +
         std::to_string(m.add.a) + ":" + std::to_string(m.add.b) + ")";
}

namespace detail {

// Connectivity of `net` with link `removed` deleted and `added` inserted.
inline bool connected_after_relink(const Network& net, int removed, Link added) {
  const int n = net.size();
  if (n <= 1) return true;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  auto visit = [&](int v) {
    if (!seen[static_cast<std::size_t>(v)]) {
      seen[static_cast<std::size_t>(v)] = 1;
      ++reached;
      stack.push_back(v);
    }
  };
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const auto& e : net.edges(u)) {
      if (e.link != removed) visit(e.to);
    }
    if (u == added.a) visit(added.b);
    if (u == added.b) visit(added.a);
  }
  return reached == n;
}

inline bool same_layer_pair(const Dims& dims, Link l) {
  return l.a >= 0 && l.b < dims.tiles() && l.a != l.b && layer_of(dims, l.a) == layer_of(dims, l.b);
}

}  // namespace detail

// Applies a move to a copy of the design. Throws InvalidMove for malformed
// moves and InfeasibleMove when the result would be disconnected.
inline Design apply_move(const Design& design, const Move& move) {
  const int n = design.tile_count();
  if (const auto* s = std::get_if<SwapTiles>(&move)) {
    if (s->a < 0 || s->a >= n || s->b < 0 || s->b >= n) throw InvalidMove(describe(move) + ": tile out of range");
    if (s->a == s->b) throw InvalidMove(describe(move) + ": swap operands must differ");
    return design.with_swap(s->a, s->b);
  }
  const auto& m = std::get<MoveLink>(move);
  const Link remove = Link::between(m.remove.a, m.remove.b);
  const Link add = Link::between(m.add.a, m.add.b);
  const auto removed_id = design.planar_link_id(remove);
  if (!removed_id) throw InvalidMove(describe(move) + ": removed link is not present");
  if (remove == add) throw InvalidMove(describe(move) + ": degenerate move re-adds the removed link");
  if (!detail::same_layer_pair(design.dims(), add)) {
    throw InvalidMove(describe(move) + ": added link must join two distinct tiles in one layer");
  }
  if (design.has_planar_link(add)) throw InvalidMove(describe(move) + ": added link already present");
  if (!detail::connected_after_relink(Network(design), *removed_id, add)) {
    throw InfeasibleMove(describe(move) + ": result is disconnected");
  }
  return design.with_relink(*removed_id, add);
}

// ---------------------------------------------------------------------------
// Neighborhood

struct NeighborhoodOptions {
  bool tile_swaps = true;
  bool link_moves = true;
};

namespace detail {

// Uniform sampling without replacement from [0, n), materializing only the
// displaced slots of a Fisher-Yates shuffle.
class LazyPermutation {
 public:
  explicit LazyPermutation(std::uint64_t n) : n_(n) {}

  std::uint64_t remaining() const noexcept { return n_ - drawn_; }

  std::uint64_t draw(Rng& rng) {
    const std::uint64_t j = drawn_ + rng.below(n_ - drawn_);
    const std::uint64_t picked = slot(j);
    displaced_[j] = slot(drawn_);
    ++drawn_;
    return picked;
  }

 private:
  std::uint64_t slot(std::uint64_t i) const {
    auto it = displaced_.find(i);
    return it == displaced_.end() ? i : it->second;
  }

  std::uint64_t n_;
  std::uint64_t drawn_ = 0;
  std::unordered_map<std::uint64_t, std::uint64_t> displaced_;
};

struct NeighborSpace {
  std::vector<SwapTiles> swaps;  // cross-kind tile pairs
  std::vector<Link> absent;      // same-layer pairs without a planar link
};

// Same-kind swaps are left out: they only exchange core identities within a
// kind and are not part of the sampled neighborhood.
inline NeighborSpace neighbor_space(const Design& design, const NeighborhoodOptions& options) {
  NeighborSpace space;
  const int n = design.tile_count();
  if (options.tile_swaps) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (design.core_at(a).kind != design.core_at(b).kind) space.swaps.push_back({a, b});
      }
    }
  }
  if (options.link_moves && design.planar_link_count() > 0) {
    const Dims& dims = design.dims();
    const int layer = dims.layer_size();
    for (int z = 0; z < dims.z; ++z) {
      for (int a = z * layer; a < (z + 1) * layer; ++a) {
        for (int b = a + 1; b < (z + 1) * layer; ++b) {
          if (!design.has_planar_link({a, b})) space.absent.push_back({a, b});
        }
      }
    }
  }
  return space;
}

}  // namespace detail

// Every feasible move in canonical order: cross-kind swaps by (a, b), then
// link moves by (removed link, added pair).
inline std::vector<Move> enumerate_neighbors(const Design& design, const NeighborhoodOptions& options = {}) {
  const auto space = detail::neighbor_space(design, options);
  std::vector<Move> moves(space.swaps.begin(), space.swaps.end());
  if (!space.absent.empty()) {
    const Network net(design);
    const auto links = design.planar_links();
    for (int r = 0; r < static_cast<int>(links.size()); ++r) {
      for (const Link& add : space.absent) {
        if (detail::connected_after_relink(net, r, add)) moves.push_back(MoveLink{links[static_cast<std::size_t>(r)], add});
      }
    }
  }
  return moves;
}

// Up to `count` distinct feasible moves. Each draw first picks a move kind
// with equal probability (falling back to the other kind once one is
// exhausted), then a uniformly random unused move of that kind. Disconnecting
// link moves are discarded. Deterministic for a fixed seed.
inline std::vector<Move> sample_neighbors(const Design& design, std::size_t count, std::uint64_t seed,
                                          const NeighborhoodOptions& options = {}) {
  if (count == 0) throw DomainError("sample_neighbors: count must be >= 1");
  const auto space = detail::neighbor_space(design, options);
  const auto links = design.planar_links();
  const std::uint64_t link_space = static_cast<std::uint64_t>(links.size()) * space.absent.size();

  Rng rng(seed);
  detail::LazyPermutation swap_pool(space.swaps.size());
  detail::LazyPermutation link_pool(link_space);
  std::optional<Network> net;
  std::vector<Move> moves;
  moves.reserve(count);

  while (moves.size() < count && (swap_pool.remaining() > 0 || link_pool.remaining() > 0)) {
    bool pick_swap;
    if (swap_pool.remaining() == 0) pick_swap = false;
    else if (link_pool.remaining() == 0) pick_swap = true;
    else pick_swap = rng.coin();

    if (pick_swap) {
      moves.push_back(space.swaps[static_cast<std::size_t>(swap_pool.draw(rng))]);
      continue;
    }
    const std::uint64_t k = link_pool.draw(rng);
    const auto r = static_cast<int>(k / space.absent.size());
    const Link add = space.absent[static_cast<std::size_t>(k % space.absent.size())];
    if (!net) net.emplace(design);
    if (detail::connected_after_relink(*net, r, add)) {
      moves.push_back(MoveLink{links[static_cast<std::size_t>(r)], add});
    }
  }
  return moves;
}

}  // namespace noc3d
