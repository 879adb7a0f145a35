#pragma once

#include <string>
#include <vector>

#include "a2lab/typed_complex.hpp"

namespace a2lab {

/// Vertex assignment between two complexes. A value of -1 means unassigned
/// (partial maps back EmbeddingConstraint pins).
struct SimplicialMap {
  const TypedComplex* domain = nullptr;
  const TypedComplex* codomain = nullptr;
  std::vector<Vertex> vertex_map;

  SimplicialMap() = default;
  SimplicialMap(const TypedComplex& dom, const TypedComplex& cod, std::vector<Vertex> map)
      : domain(&dom), codomain(&cod), vertex_map(std::move(map)) {}

  static SimplicialMap identity(const TypedComplex& c) {
    std::vector<Vertex> m(c.vertex_count());
    for (int v = 0; v < c.vertex_count(); ++v) m[v] = v;
    return SimplicialMap(c, c, std::move(m));
  }

  Vertex operator()(Vertex v) const { return vertex_map.at(v); }

  bool is_total() const {
    for (Vertex w : vertex_map)
      if (w < 0) return false;
    return !vertex_map.empty();
  }
};

/// Pinned vertices of a restricted embedding set Isom(Y,X)^alpha, expressed
/// directly on the domain: pairs (domain vertex, codomain vertex).
struct EmbeddingConstraint {
  std::vector<std::pair<Vertex, Vertex>> pins;
};

/// Cyclic color shift of a map, or -1 if the assignment is not type-rotating.
inline int rotation_of(const SimplicialMap& m) {
  int g = -1;
  for (int v = 0; v < static_cast<int>(m.vertex_map.size()); ++v) {
    Vertex w = m.vertex_map[v];
    if (w < 0) continue;
    int gv = ((m.codomain->type_of(w) - m.domain->type_of(v)) % 3 + 3) % 3;
    if (g == -1)
      g = gv;
    else if (g != gv)
      return -1;
  }
  return g;
}

/// Diagnostic version: returns "" when m is an isometric embedding in the
/// sense used throughout (injective, type-rotating, preserving intrinsic
/// 1-skeleton distances, mapping simplices to simplices, and saturated:
/// every codomain simplex whose boundary lies in the image is in the image).
inline std::string isometric_embedding_diagnostic(const SimplicialMap& m) {
  const TypedComplex& Y = *m.domain;
  const TypedComplex& X = *m.codomain;
  if (static_cast<int>(m.vertex_map.size()) != Y.vertex_count())
    return "vertex map has wrong size";
  for (Vertex w : m.vertex_map)
    if (!X.has_vertex(w)) return "image vertex not in codomain";
  // injectivity
  {
    std::vector<Vertex> img = m.vertex_map;
    std::sort(img.begin(), img.end());
    if (std::adjacent_find(img.begin(), img.end()) != img.end())
      return "not injective";
  }
  if (rotation_of(m) < 0) return "not type-rotating";
  // simplices map to simplices
  for (const auto& e : Y.edges())
    if (!X.has_edge(m(e[0]), m(e[1]))) return "edge not mapped to edge";
  for (const auto& t : Y.triangles())
    if (!X.has_triangle(m(t[0]), m(t[1]), m(t[2]))) return "triangle not mapped to triangle";
  // intrinsic distance preservation
  for (Vertex u = 0; u < Y.vertex_count(); ++u) {
    const auto& drow = Y.distance_row(u);
    const auto& xrow = X.distance_row(m(u));
    for (Vertex v = u + 1; v < Y.vertex_count(); ++v) {
      if (drow[v] == kUnreachable) return "domain not connected";
      if (drow[v] != xrow[m(v)]) return "distance not preserved";
    }
  }
  // saturation; the edge half is implied by distance preservation but the
  // two checks are kept independent
  {
    std::vector<Vertex> preimage(X.vertex_count(), -1);
    for (Vertex v = 0; v < Y.vertex_count(); ++v) preimage[m(v)] = v;
    for (Vertex v = 0; v < Y.vertex_count(); ++v) {
      Vertex x = m(v);
      for (Vertex y : X.neighbors(x)) {
        if (preimage[y] < 0) continue;
        if (y < x) continue;
        if (!Y.has_edge(v, preimage[y])) return "edge saturation fails";
        for (Vertex z : X.common_neighbors(x, y)) {
          if (preimage[z] < 0 || !X.has_triangle(x, y, z)) continue;
          if (!Y.has_triangle(v, preimage[y], preimage[z]))
            return "triangle saturation fails";
        }
      }
    }
  }
  return "";
}

inline bool check_isometric_embedding(const SimplicialMap& m) {
  return isometric_embedding_diagnostic(m).empty();
}

}  // namespace a2lab
