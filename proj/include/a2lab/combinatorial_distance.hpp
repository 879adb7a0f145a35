#pragma once

#include <vector>

#include "a2lab/apartment.hpp"
#include "a2lab/errors.hpp"
#include "a2lab/typed_complex.hpp"

namespace a2lab {

/// sigma(u,v) for vertices of a building ball (or any locally building-like
/// complex, including the thin model pieces). Determined by the 1-skeleton
/// distance L, the type difference, and the type classes of first steps of
/// geodesics: the dominant vector is unique with this data for L <= 6
/// except (5,1)/(2,4)-style clashes, which start at L = 6 with type
/// difference != 0; those raise DepthError.
inline ACoord sigma_vertices(const TypedComplex& X, Vertex u, Vertex v) {
  if (!X.has_vertex(u) || !X.has_vertex(v)) throw InputError("sigma: vertex not in complex");
  const int L = X.distance(u, v);
  if (L == 0) return {0, 0};
  const int t = ((X.type_of(v) - X.type_of(u)) % 3 + 3) % 3;

  int c1 = 0, c2 = 0;
  const auto& vrow = X.distance_row(v);
  for (Vertex w : X.neighbors(u)) {
    if (vrow[w] != L - 1) continue;
    int dt = ((X.type_of(w) - X.type_of(u)) % 3 + 3) % 3;
    if (dt == 1) ++c1;
    if (dt == 2) ++c2;
  }

  std::vector<ACoord> candidates;
  for (int m = 0; m <= L; ++m) {
    int n = L - m;
    if (((m - n - t) % 3 + 3) % 3 == 0) candidates.push_back({m, n});
  }

  if (c2 == 0) {
    for (ACoord c : candidates)
      if (c.b == 0) return c;
    throw StructureError("sigma: singular signature without singular candidate");
  }
  if (c1 == 0) {
    for (ACoord c : candidates)
      if (c.a == 0) return c;
    throw StructureError("sigma: singular signature without singular candidate");
  }
  ACoord generic{-1, -1};
  int count = 0;
  for (ACoord c : candidates)
    if (c.a >= 1 && c.b >= 1) {
      generic = c;
      ++count;
    }
  if (count != 1)
    throw DepthError("sigma: ambiguous generic candidates at distance " + std::to_string(L));
  return generic;
}

/// sigma-additivity: w lies "between" u and z in the sector sense.
inline bool sigma_additive(const TypedComplex& X, Vertex u, Vertex w, Vertex z) {
  // cheap scalar prefilter before the dominant-vector computation
  if (X.distance(u, w) + X.distance(w, z) != X.distance(u, z)) return false;
  ACoord a = sigma_vertices(X, u, w);
  ACoord b = sigma_vertices(X, w, z);
  ACoord c = sigma_vertices(X, u, z);
  return a.a + b.a == c.a && a.b + b.b == c.b;
}

}  // namespace a2lab
