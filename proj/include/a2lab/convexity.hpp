#pragma once

#include <bit>
#include <set>
#include <vector>

#include "a2lab/errors.hpp"
#include "a2lab/typed_complex.hpp"

namespace a2lab {

inline bool induces_connected(const TypedComplex& c, const std::vector<Vertex>& sub) {
  if (sub.empty()) return false;
  std::set<Vertex> in(sub.begin(), sub.end());
  std::vector<Vertex> stack = {sub[0]};
  std::set<Vertex> seen = {sub[0]};
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex w : c.neighbors(u))
      if (in.count(w) && !seen.count(w)) {
        seen.insert(w);
        stack.push_back(w);
      }
  }
  return seen.size() == in.size();
}

/// True iff every 1-skeleton geodesic of c between vertices of sub stays in
/// sub (the induced subcomplex is then automatically simplex-saturated,
/// since induced subcomplexes carry every spanned simplex).
inline bool is_convex_subcomplex(const TypedComplex& c, const std::vector<Vertex>& sub) {
  if (sub.empty()) throw InputError("is_convex_subcomplex: empty subset");
  if (!induces_connected(c, sub)) return false;
  std::vector<char> in(c.vertex_count(), 0);
  for (Vertex v : sub) in[v] = 1;
  for (std::size_t i = 0; i < sub.size(); ++i) {
    const auto& du = c.distance_row(sub[i]);
    for (std::size_t j = i + 1; j < sub.size(); ++j) {
      const auto& dv = c.distance_row(sub[j]);
      const int d = du[sub[j]];
      for (Vertex w = 0; w < c.vertex_count(); ++w)
        if (!in[w] && du[w] + dv[w] == d) return false;
    }
  }
  return true;
}

/// Geodesic convex hull (closure under 1-skeleton geodesics) of seed in c.
/// Correct as the hull in an ambient space whenever the true hull lies
/// inside c and c is embedded isometrically in that space.
inline std::vector<Vertex> convex_hull(const TypedComplex& c, std::vector<Vertex> seed) {
  if (seed.empty()) throw InputError("convex_hull: empty seed");
  std::vector<char> in(c.vertex_count(), 0);
  for (Vertex v : seed) in[v] = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Vertex> members;
    for (Vertex v = 0; v < c.vertex_count(); ++v)
      if (in[v]) members.push_back(v);
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& du = c.distance_row(members[i]);
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const auto& dv = c.distance_row(members[j]);
        const int d = du[members[j]];
        for (Vertex w = 0; w < c.vertex_count(); ++w)
          if (!in[w] && du[w] + dv[w] == d) {
            in[w] = 1;
            grew = true;
          }
      }
    }
  }
  std::vector<Vertex> out;
  for (Vertex v = 0; v < c.vertex_count(); ++v)
    if (in[v]) out.push_back(v);
  return out;
}

/// Induced subcomplex on `sub` with densely renumbered vertices
/// (sub[i] -> i). Types, edges and triangles inherited from c.
inline TypedComplex induced_complex(const TypedComplex& c, const std::vector<Vertex>& sub) {
  std::vector<Vertex> sorted = sub;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> local(c.vertex_count(), -1);
  std::vector<int> types;
  for (int i = 0; i < static_cast<int>(sorted.size()); ++i) {
    local[sorted[i]] = i;
    types.push_back(c.type_of(sorted[i]));
  }
  std::vector<Edge> edges;
  for (const auto& e : c.edges())
    if (local[e[0]] >= 0 && local[e[1]] >= 0)
      edges.push_back(make_edge(local[e[0]], local[e[1]]));
  std::vector<Triangle> triangles;
  for (const auto& t : c.triangles())
    if (local[t[0]] >= 0 && local[t[1]] >= 0 && local[t[2]] >= 0)
      triangles.push_back(make_triangle(local[t[0]], local[t[1]], local[t[2]]));
  return TypedComplex(std::move(types), std::move(edges), std::move(triangles));
}

/// All convex subcomplexes of host with at most max_size vertices.
/// Exhaustive bitmask sweep; hosts are desk-scale by construction.
inline std::vector<std::vector<Vertex>> enumerate_convex_subcomplexes(const TypedComplex& host,
                                                                      int max_size) {
  const int n = host.vertex_count();
  if (n > 25) throw InputError("enumerate_convex_subcomplexes: host too large for exhaustive sweep");
  std::vector<std::vector<Vertex>> out;
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    if (std::popcount(mask) > max_size) continue;
    std::vector<Vertex> sub;
    for (int v = 0; v < n; ++v)
      if (mask & (1ull << v)) sub.push_back(v);
    if (!induces_connected(host, sub)) continue;
    if (is_convex_subcomplex(host, sub)) out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace a2lab
