#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "a2lab/convexity.hpp"
#include "a2lab/errors.hpp"
#include "a2lab/typed_complex.hpp"

namespace a2lab {

/// Finite tree on dense vertex ids.
struct FiniteTree {
  std::vector<std::vector<int>> adj;

  FiniteTree() = default;
  explicit FiniteTree(int n) : adj(n) {}

  int size() const { return static_cast<int>(adj.size()); }

  void add_edge(int a, int b) {
    adj.at(a).push_back(b);
    adj.at(b).push_back(a);
  }

  int distance(int u, int v) const {
    std::vector<int> dist(size(), -1);
    std::queue<int> q;
    dist[u] = 0;
    q.push(u);
    while (!q.empty()) {
      int w = q.front();
      q.pop();
      if (w == v) return dist[w];
      for (int z : adj[w])
        if (dist[z] < 0) {
          dist[z] = dist[w] + 1;
          q.push(z);
        }
    }
    throw InputError("tree distance: vertices not connected");
  }

  std::vector<int> distances_from(int u) const {
    std::vector<int> dist(size(), -1);
    std::queue<int> q;
    dist[u] = 0;
    q.push(u);
    while (!q.empty()) {
      int w = q.front();
      q.pop();
      for (int z : adj[w])
        if (dist[z] < 0) {
          dist[z] = dist[w] + 1;
          q.push(z);
        }
    }
    return dist;
  }

  /// Next vertex on the path from u toward v (u != v).
  int step_toward(int u, int v) const {
    auto dv = distances_from(v);
    for (int w : adj[u])
      if (dv[w] == dv[u] - 1) return w;
    throw InputError("step_toward: not connected");
  }

  bool is_tree() const {
    int n = size();
    if (n == 0) return false;
    int edges = 0;
    for (auto& a : adj) edges += static_cast<int>(a.size());
    if (edges != 2 * (n - 1)) return false;
    auto d = distances_from(0);
    return std::find(d.begin(), d.end(), -1) == d.end();
  }
};

/// The (T, x, y, s, t) datum. Only s - t carries geometry; canonical forms
/// normalize t = 0.
struct DecoratedTree {
  FiniteTree tree;
  int x = 0;
  int y = 0;
  int s = 0;
  int t = 0;

  int ceiling(int z, const std::vector<int>& dist_x) const { return s - dist_x[z]; }
  int floor_v(int z, const std::vector<int>& dist_y) const { return t + dist_y[z]; }

  std::string invariant_diagnostic() const {
    if (!tree.is_tree()) return "not a tree";
    if (x < 0 || x >= tree.size() || y < 0 || y >= tree.size()) return "x or y out of range";
    auto dx = tree.distances_from(x);
    auto dy = tree.distances_from(y);
    if (((s - t) - dx[y]) % 2 != 0) return "s-t and d(x,y) have different parity";
    for (int z = 0; z < tree.size(); ++z)
      if (s - t - dx[z] - dy[z] < 0) return "s-t-d(x,z)-d(y,z) < 0 at z=" + std::to_string(z);
    return "";
  }

  bool valid() const { return invariant_diagnostic().empty(); }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["edges"] = nlohmann::json::array();
    for (int a = 0; a < tree.size(); ++a)
      for (int b : tree.adj[a])
        if (a < b) j["edges"].push_back({a, b});
    j["x"] = x;
    j["y"] = y;
    j["s"] = s;
    j["t"] = t;
    return j;
  }

  static DecoratedTree from_json(const nlohmann::json& j) {
    DecoratedTree d;
    int n = 1;
    for (const auto& e : j.at("edges"))
      n = std::max({n, e.at(0).get<int>() + 1, e.at(1).get<int>() + 1});
    d.tree = FiniteTree(n);
    for (const auto& e : j.at("edges")) d.tree.add_edge(e.at(0), e.at(1));
    d.x = j.at("x");
    d.y = j.at("y");
    d.s = j.at("s");
    d.t = j.at("t");
    if (!d.valid()) throw InputError("decorated tree json violates invariants");
    return d;
  }
};

enum class DiamondKind { Point, Vertical, Horizontal, NonDegenerate };

inline DiamondKind diamond_kind(const DecoratedTree& d) {
  auto dx = d.tree.distances_from(d.x);
  auto dy = d.tree.distances_from(d.y);
  if (d.tree.size() == 1) return d.s == d.t ? DiamondKind::Point : DiamondKind::Vertical;
  // horizontal: T is the segment between x and y and s-t = d(x,y)
  if (d.s - d.t == dx[d.y]) {
    bool segment = true;
    for (int z = 0; z < d.tree.size(); ++z)
      if (dx[z] + dy[z] != dx[d.y]) segment = false;
    if (segment) return DiamondKind::Horizontal;
  }
  return DiamondKind::NonDegenerate;
}

/// Geometric realization: vertices are (tree vertex z, height u) with
/// u in {f(z), f(z)+2, ..., c(z)}; vertical edges (z,u)-(z,u+2), diagonal
/// edges (z,u)-(z',u±1) across tree edges, triangles {(z,u),(z,u+2),(z',u+1)};
/// vertex type 2u mod 3.
struct CrazyDiamond {
  DecoratedTree source;
  TypedComplex realization;
  std::vector<std::pair<int, int>> coords;  // vertex id -> (tree vertex, u)
  std::map<std::pair<int, int>, Vertex> index;

  Vertex vertex_at(int z, int u) const {
    auto it = index.find({z, u});
    if (it == index.end()) throw InputError("no diamond vertex at (z,u)");
    return it->second;
  }
  bool contains(int z, int u) const { return index.count({z, u}) > 0; }

  /// pr: realization vertex -> tree vertex.
  int project(Vertex v) const { return coords.at(v).first; }
  int height(Vertex v) const { return coords.at(v).second; }

  int alcove_count() const { return realization.triangle_count(); }
};

inline CrazyDiamond realize_crazy_diamond(const DecoratedTree& d) {
  std::string diag = d.invariant_diagnostic();
  if (!diag.empty()) throw InputError("realize_crazy_diamond: " + diag);
  CrazyDiamond out;
  out.source = d;
  auto dx = d.tree.distances_from(d.x);
  auto dy = d.tree.distances_from(d.y);
  for (int z = 0; z < d.tree.size(); ++z) {
    int f = d.t + dy[z];
    int c = d.s - dx[z];
    for (int u = f; u <= c; u += 2) out.coords.push_back({z, u});
  }
  std::sort(out.coords.begin(), out.coords.end());
  for (int i = 0; i < static_cast<int>(out.coords.size()); ++i) out.index[out.coords[i]] = i;

  std::vector<int> types;
  for (auto& [z, u] : out.coords) types.push_back(((2 * u) % 3 + 3) % 3);
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;
  for (int i = 0; i < static_cast<int>(out.coords.size()); ++i) {
    auto [z, u] = out.coords[i];
    auto vert = out.index.find({z, u + 2});
    if (vert != out.index.end()) edges.push_back(make_edge(i, vert->second));
    for (int w : d.tree.adj[z]) {
      for (int du : {-1, +1}) {
        auto diag_it = out.index.find({w, u + du});
        if (diag_it != out.index.end() && diag_it->second > i)
          edges.push_back(make_edge(i, diag_it->second));
      }
      if (vert != out.index.end()) {
        auto mid = out.index.find({w, u + 1});
        if (mid != out.index.end())
          triangles.push_back(make_triangle(i, vert->second, mid->second));
      }
    }
  }
  out.realization = TypedComplex(std::move(types), std::move(edges), std::move(triangles));
  return out;
}

/// Classify a convex subcomplex of a realized wall-tree truncation as a
/// decorated tree over the host's tree (Prop. "isometric to some crazy
/// diamond", computed per Lemma fonT: per-fiber min/max are cone functions).
inline DecoratedTree classify_convex_subcomplex(const CrazyDiamond& host,
                                                const std::vector<Vertex>& sub) {
  if (sub.empty()) throw InputError("classify: empty subset");
  if (!is_convex_subcomplex(host.realization, sub))
    throw InputError("classify: subset is not convex in the host");

  std::map<int, std::pair<int, int>> fiber;  // tree vertex -> (min u, max u)
  for (Vertex v : sub) {
    auto [z, u] = host.coords[v];
    auto it = fiber.find(z);
    if (it == fiber.end())
      fiber[z] = {u, u};
    else {
      it->second.first = std::min(it->second.first, u);
      it->second.second = std::max(it->second.second, u);
    }
  }

  // dense ids for the sub-tree, in increasing host tree-vertex order
  std::vector<int> tree_vertices;
  for (auto& [z, uu] : fiber) tree_vertices.push_back(z);
  std::map<int, int> local;
  for (int i = 0; i < static_cast<int>(tree_vertices.size()); ++i) local[tree_vertices[i]] = i;

  DecoratedTree d;
  d.tree = FiniteTree(static_cast<int>(tree_vertices.size()));
  for (int i = 0; i < static_cast<int>(tree_vertices.size()); ++i)
    for (int w : host.source.tree.adj[tree_vertices[i]]) {
      auto it = local.find(w);
      if (it != local.end() && it->second > i) d.tree.add_edge(i, it->second);
    }
  if (!d.tree.is_tree()) throw StructureError("classify: projection is not a subtree");

  // f = min fiber height has a unique minimum y with f(z) = t + d(z,y);
  // c = max fiber height has a unique maximum x with c(z) = s - d(x,z)
  int best_f = 0, best_c = 0;
  for (int i = 0; i < static_cast<int>(tree_vertices.size()); ++i) {
    if (fiber[tree_vertices[i]].first < fiber[tree_vertices[best_f]].first) best_f = i;
    if (fiber[tree_vertices[i]].second > fiber[tree_vertices[best_c]].second) best_c = i;
  }
  d.y = best_f;
  d.x = best_c;
  d.t = fiber[tree_vertices[best_f]].first;
  d.s = fiber[tree_vertices[best_c]].second;

  auto dxv = d.tree.distances_from(d.x);
  auto dyv = d.tree.distances_from(d.y);
  for (int i = 0; i < static_cast<int>(tree_vertices.size()); ++i) {
    if (fiber[tree_vertices[i]].first != d.t + dyv[i])
      throw StructureError("classify: floor is not a cone function");
    if (fiber[tree_vertices[i]].second != d.s - dxv[i])
      throw StructureError("classify: ceiling is not a cone function");
  }
  std::string diag = d.invariant_diagnostic();
  if (!diag.empty()) throw StructureError("classify: " + diag);
  return d;
}

// ---------------------------------------------------------------------------
// canonical forms

namespace detail {

inline std::string ahu_code(const FiniteTree& t, int root, int parent,
                            const std::vector<std::string>& labels) {
  std::vector<std::string> children;
  for (int w : t.adj[root])
    if (w != parent) children.push_back(ahu_code(t, w, root, labels));
  std::sort(children.begin(), children.end());
  std::string code = "(" + labels[root];
  for (auto& c : children) code += c;
  code += ")";
  return code;
}

inline std::vector<int> tree_centers(const FiniteTree& t) {
  int n = t.size();
  if (n == 1) return {0};
  std::vector<int> deg(n), order;
  for (int v = 0; v < n; ++v) deg[v] = static_cast<int>(t.adj[v].size());
  std::vector<int> layer;
  for (int v = 0; v < n; ++v)
    if (deg[v] <= 1) layer.push_back(v);
  int removed = 0;
  std::vector<char> gone(n, 0);
  while (removed + static_cast<int>(layer.size()) < n) {
    std::vector<int> next;
    for (int v : layer) {
      gone[v] = 1;
      ++removed;
      for (int w : t.adj[v])
        if (!gone[w] && --deg[w] == 1) next.push_back(w);
    }
    layer = next;
  }
  return layer;
}

}  // namespace detail

/// Canonical code of a decorated tree up to isomorphism matching x, y and
/// the value s - t. Rooted AHU codes at tree centers with (is_x, is_y) labels.
inline std::string diamond_canonical_code(const DecoratedTree& d) {
  std::vector<std::string> labels(d.tree.size());
  for (int v = 0; v < d.tree.size(); ++v) {
    std::string l = "v";
    if (v == d.x) l += "X";
    if (v == d.y) l += "Y";
    labels[v] = l;
  }
  std::string best;
  for (int c : detail::tree_centers(d.tree)) {
    std::string code = detail::ahu_code(d.tree, c, -1, labels);
    if (best.empty() || code < best) best = code;
  }
  return "st" + std::to_string(d.s - d.t) + ":" + best;
}

inline bool diamonds_isomorphic(const DecoratedTree& a, const DecoratedTree& b) {
  return diamond_canonical_code(a) == diamond_canonical_code(b);
}

// ---------------------------------------------------------------------------
// elementary extensions

enum class ExtKind { C, F, B_z, C_v, F_v, B_c, B_f };

inline std::string ext_kind_name(ExtKind k) {
  switch (k) {
    case ExtKind::C: return "C";
    case ExtKind::F: return "F";
    case ExtKind::B_z: return "B_z";
    case ExtKind::C_v: return "C_v";
    case ExtKind::F_v: return "F_v";
    case ExtKind::B_c: return "B^c";
    case ExtKind::B_f: return "B^f";
  }
  return "?";
}

/// One elementary extension step. `vertex` is the moved apex (C, F), the
/// attachment point (B_z), or the attached tree vertex id (B^c, B^f).
/// `attached` is the new tree vertex for the edge-attaching kinds.
/// `valency` records the T-valency of the attachment point for B_z counts.
struct ElementaryExtension {
  ExtKind kind;
  int vertex = -1;
  int attached = -1;
  int valency = 0;
};

/// Apply an elementary extension. Tree vertex ids are preserved; attached
/// vertices get the next dense id. The F-family lowers the floor (t
/// decreases); s - t grows by 1 for C/F/B^c/B^f and by 2 for C_v/F_v.
inline DecoratedTree apply_extension(const DecoratedTree& d, const ElementaryExtension& e) {
  DecoratedTree out = d;
  DiamondKind kind = diamond_kind(d);
  auto require = [&](bool cond, const std::string& msg) {
    if (!cond) throw InputError("apply_extension(" + ext_kind_name(e.kind) + "): " + msg);
  };
  switch (e.kind) {
    case ExtKind::C: {
      require(d.tree.size() >= 2, "needs a tree neighbor for the new apex");
      bool adjacent = false;
      for (int w : d.tree.adj[d.x]) adjacent |= (w == e.vertex);
      require(adjacent, "new apex must be adjacent to x");
      out.x = e.vertex;
      out.s = d.s + 1;
      break;
    }
    case ExtKind::F: {
      require(d.tree.size() >= 2, "needs a tree neighbor for the new apex");
      bool adjacent = false;
      for (int w : d.tree.adj[d.y]) adjacent |= (w == e.vertex);
      require(adjacent, "new apex must be adjacent to y");
      out.y = e.vertex;
      out.t = d.t - 1;
      break;
    }
    case ExtKind::B_z: {
      auto dxv = d.tree.distances_from(d.x);
      auto dyv = d.tree.distances_from(d.y);
      int l = d.s - d.t - dxv[e.vertex] - dyv[e.vertex];
      require(l > 0, "B_z requires l(z) > 0");
      out.tree.adj.push_back({});
      out.tree.add_edge(e.vertex, out.tree.size() - 1);
      break;
    }
    case ExtKind::C_v: {
      require(kind == DiamondKind::Point || kind == DiamondKind::Vertical,
              "C_v only from a point or vertical diamond");
      out.s = d.s + 2;
      break;
    }
    case ExtKind::F_v: {
      require(kind == DiamondKind::Point || kind == DiamondKind::Vertical,
              "F_v only from a point or vertical diamond");
      out.t = d.t - 2;
      break;
    }
    case ExtKind::B_c: {
      require(kind == DiamondKind::Point || kind == DiamondKind::Horizontal,
              "B^c only from a point or horizontal diamond");
      out.tree.adj.push_back({});
      out.tree.add_edge(d.x, out.tree.size() - 1);
      out.x = out.tree.size() - 1;
      out.s = d.s + 1;
      break;
    }
    case ExtKind::B_f: {
      require(kind == DiamondKind::Point || kind == DiamondKind::Horizontal,
              "B^f only from a point or horizontal diamond");
      out.tree.adj.push_back({});
      out.tree.add_edge(d.y, out.tree.size() - 1);
      out.y = out.tree.size() - 1;
      out.t = d.t - 1;
      break;
    }
  }
  std::string diag = out.invariant_diagnostic();
  if (!diag.empty()) throw InputError("apply_extension produced invalid diamond: " + diag);
  return out;
}

// ---------------------------------------------------------------------------
// decomposition of an inclusion into elementary extensions

namespace detail {

struct DiamondState {
  std::vector<int> members;  // big-tree vertex ids, sorted
  std::vector<int> ceil;     // per member
  std::vector<int> floor;    // per member

  bool operator<(const DiamondState& o) const {
    if (members != o.members) return members < o.members;
    if (ceil != o.ceil) return ceil < o.ceil;
    return floor < o.floor;
  }
};

}  // namespace detail

/// Inclusion data per Lemma extstd: `small` lives on a subtree of `big`'s
/// tree, expressed with big's vertex ids via `embed` (small tree vertex ->
/// big tree vertex). Requires c_small <= c_big and f_small >= f_big pointwise.
struct DiamondInclusion {
  DecoratedTree small;
  DecoratedTree big;
  std::vector<int> embed;

  std::string diagnostic() const {
    if (!small.valid() || !big.valid()) return "invalid decorations";
    if (static_cast<int>(embed.size()) != small.tree.size()) return "embed size mismatch";
    std::set<int> used;
    for (int b : embed) {
      if (b < 0 || b >= big.tree.size()) return "embed out of range";
      if (!used.insert(b).second) return "embed not injective";
    }
    for (int a = 0; a < small.tree.size(); ++a)
      for (int w : small.tree.adj[a]) {
        bool adj = false;
        for (int z : big.tree.adj[embed[a]]) adj |= (z == embed[w]);
        if (!adj) return "embed does not preserve tree edges";
      }
    auto dsx = small.tree.distances_from(small.x);
    auto dsy = small.tree.distances_from(small.y);
    auto dbx = big.tree.distances_from(big.x);
    auto dby = big.tree.distances_from(big.y);
    for (int a = 0; a < small.tree.size(); ++a) {
      int c_small = small.s - dsx[a], f_small = small.t + dsy[a];
      int c_big = big.s - dbx[embed[a]], f_big = big.t + dby[embed[a]];
      if (c_small > c_big) return "small ceiling exceeds big";
      if (f_small < f_big) return "small floor below big";
      if ((c_small - c_big) % 2 != 0) return "ceiling parity mismatch";
    }
    return "";
  }
};

/// Decompose small ⊆ big into a chain of elementary extensions (Lemma
/// seqextensions). Depth-first search over intermediate diamonds bounded by
/// big, trying moves in the proof's order (C, F, B_z, then the degenerate
/// kinds); the first chain found is returned and each step re-validated.
inline std::vector<ElementaryExtension> decompose_inclusion(const DiamondInclusion& inc) {
  std::string diag = inc.diagnostic();
  if (!diag.empty()) throw InputError("decompose_inclusion: " + diag);

  const DecoratedTree& big = inc.big;
  auto dbx = big.tree.distances_from(big.x);
  auto dby = big.tree.distances_from(big.y);

  auto state_of = [&](const DecoratedTree& d, const std::vector<int>& embed) {
    detail::DiamondState st;
    std::vector<int> order(d.tree.size());
    for (int i = 0; i < d.tree.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return embed[a] < embed[b]; });
    auto dx = d.tree.distances_from(d.x);
    auto dy = d.tree.distances_from(d.y);
    for (int i : order) {
      st.members.push_back(embed[i]);
      st.ceil.push_back(d.s - dx[i]);
      st.floor.push_back(d.t + dy[i]);
    }
    return st;
  };

  detail::DiamondState target = state_of(big, [&] {
    std::vector<int> id(big.tree.size());
    for (int i = 0; i < big.tree.size(); ++i) id[i] = i;
    return id;
  }());

  struct Node {
    DecoratedTree d;
    std::vector<int> embed;
  };

  std::set<detail::DiamondState> visited;
  std::vector<ElementaryExtension> chain;

  std::function<bool(const Node&)> dfs = [&](const Node& node) -> bool {
    detail::DiamondState st = state_of(node.d, node.embed);
    if (st < target || target < st) {
      // keep exploring
    } else {
      return true;
    }
    if (!visited.insert(st).second) return false;

    // bounded-by-big check for a candidate next state
    auto bounded = [&](const DecoratedTree& d, const std::vector<int>& embed) {
      auto dx = d.tree.distances_from(d.x);
      auto dy = d.tree.distances_from(d.y);
      for (int a = 0; a < d.tree.size(); ++a) {
        if (d.s - dx[a] > big.s - dbx[embed[a]]) return false;
        if (d.t + dy[a] < big.t + dby[embed[a]]) return false;
      }
      return true;
    };

    auto try_move = [&](const ElementaryExtension& e, int attach_big) -> bool {
      DecoratedTree next;
      try {
        next = apply_extension(node.d, e);
      } catch (const InputError&) {
        return false;
      }
      std::vector<int> embed = node.embed;
      if (next.tree.size() > node.d.tree.size()) embed.push_back(attach_big);
      if (!bounded(next, embed)) return false;
      chain.push_back(e);
      if (dfs(Node{next, embed})) return true;
      chain.pop_back();
      return false;
    };

    const DecoratedTree& d = node.d;
    DiamondKind kind = diamond_kind(d);
    auto dx = d.tree.distances_from(d.x);
    auto dy = d.tree.distances_from(d.y);

    if (kind == DiamondKind::NonDegenerate || kind == DiamondKind::Horizontal) {
      for (int w : d.tree.adj[d.x])
        if (try_move({ExtKind::C, w}, -1)) return true;
      for (int w : d.tree.adj[d.y])
        if (try_move({ExtKind::F, w}, -1)) return true;
    }
    // B_z at any vertex with l > 0 toward any unoccupied big neighbor
    {
      std::set<int> occupied(node.embed.begin(), node.embed.end());
      for (int z = 0; z < d.tree.size(); ++z) {
        if (d.s - d.t - dx[z] - dy[z] <= 0) continue;
        for (int w : big.tree.adj[node.embed[z]]) {
          if (occupied.count(w)) continue;
          ElementaryExtension e{ExtKind::B_z, z};
          e.valency = static_cast<int>(d.tree.adj[z].size());
          if (try_move(e, w)) return true;
        }
      }
    }
    if (kind == DiamondKind::Point || kind == DiamondKind::Vertical) {
      if (try_move({ExtKind::C_v}, -1)) return true;
      if (try_move({ExtKind::F_v}, -1)) return true;
    }
    if (kind == DiamondKind::Point || kind == DiamondKind::Horizontal) {
      std::set<int> occupied(node.embed.begin(), node.embed.end());
      for (int w : big.tree.adj[node.embed[d.x]])
        if (!occupied.count(w))
          if (try_move({ExtKind::B_c, d.x}, w)) return true;
      for (int w : big.tree.adj[node.embed[d.y]])
        if (!occupied.count(w))
          if (try_move({ExtKind::B_f, d.y}, w)) return true;
    }
    return false;
  };

  Node root{inc.small, inc.embed};
  if (!dfs(root)) throw StructureError("decompose_inclusion: no elementary chain found");
  return chain;
}

// ---------------------------------------------------------------------------
// stock trees and hosts

inline FiniteTree path_tree(int vertices) {
  FiniteTree t(vertices);
  for (int i = 0; i + 1 < vertices; ++i) t.add_edge(i, i + 1);
  return t;
}

inline FiniteTree star_tree(int leaves) {
  FiniteTree t(leaves + 1);
  for (int i = 1; i <= leaves; ++i) t.add_edge(0, i);
  return t;
}

/// The acceptance host: tree = 3-edge star, center column of vertical
/// extent `extent` edges (x = y = center, s = 2*extent... realized with
/// s - t = 2 * (extent/2) ... decorations chosen so the center fiber has
/// `extent` edges and leaf fibers exist.
inline CrazyDiamond wall_tree_star_host(int extent) {
  DecoratedTree d;
  d.tree = star_tree(3);
  d.x = 0;
  d.y = 0;
  d.s = 2 * extent;
  d.t = 0;
  // center fiber: heights 0,2,...,2*extent (extent edges); leaves: 1..2*extent-1
  return realize_crazy_diamond(d);
}

}  // namespace a2lab
