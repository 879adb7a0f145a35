#pragma once

#include <array>
#include <compare>
#include <map>
#include <vector>

#include "a2lab/errors.hpp"
#include "a2lab/typed_complex.hpp"

namespace a2lab {

/// Vertex of the model apartment in the basis of the two boundary rays of
/// the positive Weyl chamber: (a,b) <-> a*e1 + b*e2 with a 60-degree angle
/// between e1 and e2. Neighbors of the origin: +-e1, +-e2, +-(e2-e1).
struct ACoord {
  int a = 0;
  int b = 0;
  auto operator<=>(const ACoord&) const = default;
  ACoord operator+(ACoord o) const { return {a + o.a, b + o.b}; }
  ACoord operator-(ACoord o) const { return {a - o.a, b - o.b}; }
  ACoord operator-() const { return {-a, -b}; }
};

inline int coord_type(ACoord c) { return ((c.a - c.b) % 3 + 3) % 3; }

inline bool is_dominant(ACoord c) { return c.a >= 0 && c.b >= 0; }

/// Orbit of c under the type-rotating Weyl group (order 6: identity, the two
/// rotations by 120 degrees, the three wall reflections).
inline std::array<ACoord, 6> weyl_orbit(ACoord c) {
  const int a = c.a, b = c.b;
  return {ACoord{a, b},        ACoord{-a - b, a}, ACoord{b, -a - b},
          ACoord{a + b, -b},   ACoord{-a, a + b}, ACoord{-b, -a}};
}

/// The unique dominant representative of the Weyl orbit.
inline ACoord dominant(ACoord c) {
  for (ACoord w : weyl_orbit(c))
    if (is_dominant(w)) return w;
  throw StructureError("weyl orbit without dominant representative");
}

/// Length extended linearly to all of Z^2 (ell(a,b) = a+b); agrees with the
/// 1-skeleton distance 0 -> (a,b) on dominant vectors.
inline int length_linear(ACoord c) { return c.a + c.b; }

/// 1-skeleton distance from the origin (length of the dominant representative).
inline int graph_length(ACoord c) { return length_linear(dominant(c)); }

/// sigma(x,y) in the model apartment.
inline ACoord sigma_lattice(ACoord x, ACoord y) { return dominant(y - x); }

inline const std::array<ACoord, 6>& neighbor_offsets() {
  static const std::array<ACoord, 6> k = {ACoord{1, 0},  ACoord{-1, 0},
                                          ACoord{0, 1},  ACoord{0, -1},
                                          ACoord{1, -1}, ACoord{-1, 1}};
  return k;
}

/// A TypedComplex realized on an explicit set of apartment coordinates, with
/// the induced edges and triangles of the triangular tessellation.
struct ModelComplex {
  TypedComplex complex;
  std::vector<ACoord> coords;        // vertex id -> coordinate
  std::map<ACoord, Vertex> index;    // coordinate -> vertex id

  bool contains(ACoord c) const { return index.count(c) > 0; }
  Vertex vertex_at(ACoord c) const {
    auto it = index.find(c);
    if (it == index.end()) throw InputError("coordinate not in model complex");
    return it->second;
  }
};

/// Induced subcomplex of the model apartment on `points` (deduplicated,
/// ordered lexicographically so vertex ids are deterministic).
inline ModelComplex model_from_points(std::vector<ACoord> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  ModelComplex m;
  m.coords = points;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) m.index[points[i]] = i;
  std::vector<int> types;
  types.reserve(points.size());
  for (ACoord c : points) types.push_back(coord_type(c));
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    for (ACoord d : neighbor_offsets()) {
      auto it = m.index.find(points[i] + d);
      if (it != m.index.end() && it->second > i) edges.push_back(make_edge(i, it->second));
    }
    // up-triangle {p, p+e1, p+e2}, down-triangle {p, p+e1, p+e1-e2}
    auto up1 = m.index.find(points[i] + ACoord{1, 0});
    auto up2 = m.index.find(points[i] + ACoord{0, 1});
    if (up1 != m.index.end() && up2 != m.index.end())
      triangles.push_back(make_triangle(i, up1->second, up2->second));
    auto dn1 = m.index.find(points[i] + ACoord{1, 0});
    auto dn2 = m.index.find(points[i] + ACoord{1, -1});
    if (dn1 != m.index.end() && dn2 != m.index.end())
      triangles.push_back(make_triangle(i, dn1->second, dn2->second));
  }
  m.complex = TypedComplex(std::move(types), std::move(edges), std::move(triangles));
  return m;
}

/// Ball of radius r around the origin in the model apartment.
inline ModelComplex model_apartment_ball(int radius) {
  std::vector<ACoord> pts;
  for (int a = -2 * radius; a <= 2 * radius; ++a)
    for (int b = -2 * radius; b <= 2 * radius; ++b)
      if (graph_length(ACoord{a, b}) <= radius) pts.push_back({a, b});
  return model_from_points(std::move(pts));
}

/// Sector ball: the dominant cone cut at 1-skeleton radius d (a triangle
/// with corners 0, (d,0), (0,d)). This is the depth-d sector germ model.
inline ModelComplex sector_ball_model(int depth) {
  std::vector<ACoord> pts;
  for (int a = 0; a <= depth; ++a)
    for (int b = 0; a + b <= depth; ++b) pts.push_back({a, b});
  return model_from_points(std::move(pts));
}

/// Conv(0, (m,n)) for dominant (m,n): the parallelogram box.
inline ModelComplex box_model(int m, int n) {
  if (m < 0 || n < 0) throw InputError("box_model: not dominant");
  std::vector<ACoord> pts;
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= n; ++b) pts.push_back({a, b});
  return model_from_points(std::move(pts));
}

}  // namespace a2lab
