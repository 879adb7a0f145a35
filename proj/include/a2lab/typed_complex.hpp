#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "a2lab/errors.hpp"

namespace a2lab {

using Vertex = int;
using Edge = std::array<Vertex, 2>;      // sorted
using Triangle = std::array<Vertex, 3>;  // sorted

inline Edge make_edge(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return {a, b};
}

inline Triangle make_triangle(Vertex a, Vertex b, Vertex c) {
  Triangle t{a, b, c};
  std::sort(t.begin(), t.end());
  return t;
}

constexpr std::uint16_t kUnreachable = 0xffff;

/// Finite 2-dimensional simplicial complex with 3-colored vertices.
/// Immutable after construction; the all-pairs distance cache fills lazily
/// behind a mutex so instances can be shared across threads.
class TypedComplex {
 public:
  TypedComplex() = default;

  TypedComplex(const TypedComplex& other)
      : types_(other.types_),
        adjacency_(other.adjacency_),
        edges_(other.edges_),
        triangles_(other.triangles_),
        edge_set_(other.edge_set_),
        triangle_set_(other.triangle_set_) {}

  TypedComplex& operator=(const TypedComplex& other) {
    if (this != &other) {
      types_ = other.types_;
      adjacency_ = other.adjacency_;
      edges_ = other.edges_;
      triangles_ = other.triangles_;
      edge_set_ = other.edge_set_;
      triangle_set_ = other.triangle_set_;
      std::lock_guard<std::mutex> lock(cache_mutex_);
      distance_cache_.clear();
    }
    return *this;
  }

  TypedComplex(std::vector<int> types, std::vector<Edge> edges,
               std::vector<Triangle> triangles)
      : types_(std::move(types)) {
    const int n = static_cast<int>(types_.size());
    adjacency_.assign(n, {});
    for (auto& e : edges) insert_edge(e[0], e[1]);
    for (auto& t : triangles) insert_triangle(t[0], t[1], t[2]);
    finalize();
  }

  int vertex_count() const { return static_cast<int>(types_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }

  int type_of(Vertex v) const { return types_.at(v); }
  const std::vector<int>& types() const { return types_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_.at(v); }
  int degree(Vertex v) const { return static_cast<int>(adjacency_.at(v).size()); }

  bool has_vertex(Vertex v) const { return v >= 0 && v < vertex_count(); }

  bool has_edge(Vertex a, Vertex b) const {
    if (!has_vertex(a) || !has_vertex(b)) return false;
    const auto& adj = adjacency_[a];
    return std::binary_search(adj.begin(), adj.end(), b);
  }

  bool has_triangle(Vertex a, Vertex b, Vertex c) const {
    return triangle_set_.count(make_triangle(a, b, c)) > 0;
  }

  /// Triangles containing the edge {a,b}.
  std::vector<Triangle> triangles_on_edge(Vertex a, Vertex b) const {
    std::vector<Triangle> out;
    for (Vertex c : common_neighbors(a, b))
      if (has_triangle(a, b, c)) out.push_back(make_triangle(a, b, c));
    return out;
  }

  std::vector<Vertex> common_neighbors(Vertex a, Vertex b) const {
    const auto& na = adjacency_.at(a);
    const auto& nb = adjacency_.at(b);
    std::vector<Vertex> out;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(),
                          std::back_inserter(out));
    return out;
  }

  bool is_connected() const {
    if (vertex_count() == 0) return true;
    return reachable_count(0) == vertex_count();
  }

  /// 1-skeleton graph distance. Rows of the all-pairs table fill on demand.
  int distance(Vertex u, Vertex v) const {
    if (!has_vertex(u) || !has_vertex(v))
      throw InputError("distance: vertex not in complex");
    const auto& row = distance_row(u);
    std::uint16_t d = row[v];
    if (d == kUnreachable) throw InputError("distance: vertices not connected");
    return d;
  }

  const std::vector<std::uint16_t>& distance_row(Vertex u) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = distance_cache_.find(u);
    if (it != distance_cache_.end()) return it->second;
    auto [jt, ok] = distance_cache_.emplace(u, bfs_from(u));
    return jt->second;
  }

  /// Checks the TypedComplex invariants; returns a diagnostic or "" if fine.
  std::string validate() const {
    for (const auto& e : edges_) {
      if (!has_vertex(e[0]) || !has_vertex(e[1])) return "edge endpoint missing";
      if (types_[e[0]] == types_[e[1]])
        return "adjacent vertices " + std::to_string(e[0]) + "," +
               std::to_string(e[1]) + " share type " + std::to_string(types_[e[0]]);
    }
    for (const auto& t : triangles_) {
      for (int i = 0; i < 3; ++i)
        if (!has_edge(t[i], t[(i + 1) % 3])) return "triangle missing an edge";
      int mask = 0;
      for (Vertex v : t) mask |= 1 << types_[v];
      if (mask != 7) return "triangle does not carry all three colors";
    }
    for (int v = 0; v < vertex_count(); ++v)
      if (types_[v] < 0 || types_[v] > 2) return "vertex type out of range";
    if (!is_connected()) return "complex is not connected";
    return "";
  }

  /// Link of v as a graph on the neighbors of v: an edge {b,c} of the link
  /// corresponds to a triangle {v,b,c}.
  struct Link {
    std::vector<Vertex> vertices;          // neighbors of v, sorted
    std::vector<std::array<int, 2>> edges; // indices into `vertices`
  };

  Link link_of(Vertex v) const {
    Link link;
    link.vertices = adjacency_.at(v);
    std::unordered_map<Vertex, int> index;
    for (int i = 0; i < static_cast<int>(link.vertices.size()); ++i)
      index[link.vertices[i]] = i;
    for (int i = 0; i < static_cast<int>(link.vertices.size()); ++i) {
      Vertex b = link.vertices[i];
      for (Vertex c : adjacency_.at(b)) {
        if (c <= b) continue;
        auto it = index.find(c);
        if (it != index.end() && has_triangle(v, b, c))
          link.edges.push_back({i, it->second});
      }
    }
    return link;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < vertex_count(); ++v)
      j["vertices"].push_back({{"id", v}, {"type", types_[v]}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges_) j["edges"].push_back({e[0], e[1]});
    j["triangles"] = nlohmann::json::array();
    for (const auto& t : triangles_) j["triangles"].push_back({t[0], t[1], t[2]});
    return j;
  }

  static TypedComplex from_json(const nlohmann::json& j) {
    if (!j.contains("vertices") || !j.contains("edges") || !j.contains("triangles"))
      throw InputError("complex json: missing field");
    int n = 0;
    for (const auto& v : j["vertices"]) n = std::max(n, v.at("id").get<int>() + 1);
    std::vector<int> types(n, -1);
    for (const auto& v : j["vertices"]) types[v.at("id").get<int>()] = v.at("type").get<int>();
    for (int t : types)
      if (t < 0) throw InputError("complex json: vertex ids not dense");
    std::vector<Edge> edges;
    for (const auto& e : j["edges"]) edges.push_back(make_edge(e.at(0), e.at(1)));
    std::vector<Triangle> triangles;
    for (const auto& t : j["triangles"])
      triangles.push_back(make_triangle(t.at(0), t.at(1), t.at(2)));
    return TypedComplex(std::move(types), std::move(edges), std::move(triangles));
  }

 private:
  void insert_edge(Vertex a, Vertex b) {
    if (a == b) throw InputError("loop edge");
    Edge e = make_edge(a, b);
    if (edge_set_.insert(e).second) {
      edges_.push_back(e);
      adjacency_.at(a).push_back(b);
      adjacency_.at(b).push_back(a);
    }
  }

  void insert_triangle(Vertex a, Vertex b, Vertex c) {
    Triangle t = make_triangle(a, b, c);
    if (t[0] == t[1] || t[1] == t[2]) throw InputError("degenerate triangle");
    if (triangle_set_.insert(t).second) triangles_.push_back(t);
  }

  void finalize() {
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
    std::sort(edges_.begin(), edges_.end());
    std::sort(triangles_.begin(), triangles_.end());
  }

  int reachable_count(Vertex start) const {
    std::vector<char> seen(vertex_count(), 0);
    std::queue<Vertex> q;
    q.push(start);
    seen[start] = 1;
    int count = 1;
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      for (Vertex w : adjacency_[u])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          q.push(w);
        }
    }
    return count;
  }

  std::vector<std::uint16_t> bfs_from(Vertex start) const {
    std::vector<std::uint16_t> dist(vertex_count(), kUnreachable);
    std::queue<Vertex> q;
    dist[start] = 0;
    q.push(start);
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop();
      for (Vertex w : adjacency_[u])
        if (dist[w] == kUnreachable) {
          dist[w] = static_cast<std::uint16_t>(dist[u] + 1);
          q.push(w);
        }
    }
    return dist;
  }

  std::vector<int> types_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Edge> edges_;
  std::vector<Triangle> triangles_;
  std::set<Edge> edge_set_;
  std::set<Triangle> triangle_set_;

  mutable std::mutex cache_mutex_;
  mutable std::unordered_map<Vertex, std::vector<std::uint16_t>> distance_cache_;
};

inline int graph_distance(const TypedComplex& c, Vertex u, Vertex v) {
  return c.distance(u, v);
}

}  // namespace a2lab
