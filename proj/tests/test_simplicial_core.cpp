#include <gtest/gtest.h>

#include "a2lab/apartment.hpp"
#include "a2lab/convexity.hpp"
#include "a2lab/embedding_search.hpp"
#include "a2lab/simplicial_map.hpp"
#include "a2lab/typed_complex.hpp"

namespace a2lab {
namespace {

// Independent BFS oracle used to freeze distance expectations.
int bfs_oracle(const TypedComplex& c, Vertex u, Vertex v) {
  std::vector<int> dist(c.vertex_count(), -1);
  std::vector<Vertex> queue = {u};
  dist[u] = 0;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Vertex w = queue[i];
    if (w == v) return dist[w];
    for (Vertex z : c.neighbors(w))
      if (dist[z] < 0) {
        dist[z] = dist[w] + 1;
        queue.push_back(z);
      }
  }
  return -1;
}

TEST(TypedComplex, ValidatesModelApartment) {
  ModelComplex sigma = model_apartment_ball(3);
  EXPECT_EQ(sigma.complex.validate(), "");
  // interior vertices of the triangular lattice have degree 6
  Vertex origin = sigma.vertex_at({0, 0});
  EXPECT_EQ(sigma.complex.degree(origin), 6);
}

TEST(TypedComplex, GraphDistanceMatchesOracleAndSpecExamples) {
  ModelComplex sigma = model_apartment_ball(4);
  Vertex origin = sigma.vertex_at({0, 0});
  EXPECT_EQ(graph_distance(sigma.complex, origin, origin), 0);
  EXPECT_EQ(graph_distance(sigma.complex, origin, sigma.vertex_at({1, 0})), 1);
  // vertex with sector coordinates (2,1) is at distance 3
  EXPECT_EQ(graph_distance(sigma.complex, origin, sigma.vertex_at({2, 1})), 3);
  for (Vertex v = 0; v < sigma.complex.vertex_count(); ++v)
    EXPECT_EQ(graph_distance(sigma.complex, origin, v), bfs_oracle(sigma.complex, origin, v));
}

TEST(TypedComplex, LengthEqualsBfsOnDominantVectors) {
  ModelComplex sigma = model_apartment_ball(6);
  Vertex origin = sigma.vertex_at({0, 0});
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b) {
      EXPECT_EQ(length_linear(ACoord{a, b}), a + b);
      EXPECT_EQ(graph_length(ACoord{a, b}),
                bfs_oracle(sigma.complex, origin, sigma.vertex_at({a, b})));
    }
}

TEST(TypedComplex, DominantRepresentativeIsUniqueOnOrbit) {
  for (int a = -4; a <= 4; ++a)
    for (int b = -4; b <= 4; ++b) {
      ACoord d = dominant(ACoord{a, b});
      EXPECT_TRUE(is_dominant(d));
      int found = 0;
      std::set<std::pair<int, int>> distinct;
      for (ACoord w : weyl_orbit(ACoord{a, b})) {
        distinct.insert({w.a, w.b});
        if (is_dominant(w)) ++found;
      }
      // boundary elements are fixed by a reflection, so count repeats
      for (ACoord w : weyl_orbit(ACoord{a, b}))
        if (is_dominant(w)) EXPECT_EQ(w, d);
      EXPECT_GE(found, 1);
      // types are preserved by the orbit
      EXPECT_EQ(coord_type(d), coord_type(ACoord{a, b}));
    }
}

TEST(IsometricEmbedding, IdentityAndCollapse) {
  ModelComplex sigma = model_apartment_ball(2);
  SimplicialMap id = SimplicialMap::identity(sigma.complex);
  EXPECT_TRUE(check_isometric_embedding(id));

  // collapsing two vertices fails injectivity
  std::vector<Vertex> collapse = id.vertex_map;
  collapse[1] = collapse[0];
  SimplicialMap bad(sigma.complex, sigma.complex, collapse);
  EXPECT_FALSE(check_isometric_embedding(bad));
}

TEST(IsometricEmbedding, HexagonBoundaryIntoFilledHexagonFailsSaturation) {
  // domain: the 6-cycle around the origin, as an abstract typed complex
  ModelComplex sigma = model_apartment_ball(2);
  std::vector<ACoord> ring = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
  std::vector<int> types;
  std::vector<Edge> edges;
  for (int i = 0; i < 6; ++i) types.push_back(coord_type(ring[i]));
  for (int i = 0; i < 6; ++i) {
    // ring neighbors are adjacent in the lattice
    edges.push_back(make_edge(i, (i + 1) % 6));
  }
  TypedComplex hexagon(types, edges, {});
  std::vector<Vertex> img;
  for (auto c : ring) img.push_back(sigma.vertex_at(c));
  SimplicialMap m(hexagon, sigma.complex, img);
  // distances differ (opposite ring vertices are at distance 3 in the cycle,
  // 2 in the lattice), and even locally the saturation would fail; the map
  // must be rejected
  EXPECT_FALSE(check_isometric_embedding(m));

  // a genuinely distance-compatible witness: drop the complex to the ring
  // plus center; boundary of each filled triangle is in the image, so the
  // saturation clause rejects the embedding that omits the interior
  std::vector<ACoord> pts = ring;
  pts.push_back({0, 0});
  ModelComplex filled = model_from_points(pts);
  for (int i = 0; i < 6; ++i) {
    std::vector<Vertex> sub;
    for (int j = 0; j < 6; ++j) sub.push_back(filled.vertex_at(ring[j]));
    TypedComplex ring_only = induced_complex(filled.complex, sub);
    SimplicialMap into_sigma(ring_only, sigma.complex, [&] {
      std::vector<Vertex> v;
      for (int j = 0; j < 6; ++j) v.push_back(sigma.vertex_at(ring[j]));
      return v;
    }());
    // the ring with its chords induced is distance-correct but the triangles
    // it bounds in sigma are not present in the domain
    EXPECT_FALSE(check_isometric_embedding(into_sigma));
  }
}

TEST(EnumerateExtensions, IdentityExtensionIsUnique) {
  ModelComplex rhombus = box_model(1, 1);
  ModelComplex sigma = model_apartment_ball(3);
  std::vector<std::pair<Vertex, Vertex>> pins;
  for (int v = 0; v < rhombus.complex.vertex_count(); ++v)
    pins.push_back({v, sigma.vertex_at(rhombus.coords[v])});
  auto res = enumerate_pinned(rhombus.complex, sigma.complex, pins);
  ASSERT_EQ(res.size(), 1u);
}

TEST(EnumerateExtensions, SectorGermsInModelApartment) {
  // In the thin model apartment there is exactly one type-rotating sector
  // germ per Weyl chamber at the origin: 6 alcove germs, 2 edge germs per
  // direction class... frozen from the first evaluated run after checking
  // against the 6 sectors at the origin by hand.
  ModelComplex sigma = model_apartment_ball(4);
  ModelComplex lambda1 = sector_ball_model(1);
  Vertex origin = sigma.vertex_at({0, 0});
  auto res = enumerate_pinned(lambda1.complex, sigma.complex,
                              {{lambda1.vertex_at({0, 0}), origin}});
  EXPECT_EQ(res.size(), 6u);
}

TEST(Convexity, SpecExamples) {
  ModelComplex sigma = model_apartment_ball(3);
  // the full complex is convex
  std::vector<Vertex> all;
  for (Vertex v = 0; v < sigma.complex.vertex_count(); ++v) all.push_back(v);
  EXPECT_TRUE(is_convex_subcomplex(sigma.complex, all));
  // two opposite corners of a rhombus without the interior are not convex
  std::vector<Vertex> corners = {sigma.vertex_at({0, 0}), sigma.vertex_at({1, 1})};
  EXPECT_FALSE(is_convex_subcomplex(sigma.complex, corners));
  EXPECT_THROW(is_convex_subcomplex(sigma.complex, {}), InputError);
  // hulls round-trip
  auto hull = convex_hull(sigma.complex, corners);
  EXPECT_TRUE(is_convex_subcomplex(sigma.complex, hull));
  EXPECT_EQ(hull.size(), 4u);  // the rhombus Conv(0,(1,1))
}

TEST(Convexity, EnumerationPostcondition) {
  ModelComplex small = model_from_points([] {
    std::vector<ACoord> pts;
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 2; ++b) pts.push_back({a, b});
    return pts;
  }());
  auto sets = enumerate_convex_subcomplexes(small.complex, 1);
  EXPECT_EQ(sets.size(), static_cast<std::size_t>(small.complex.vertex_count()));
  auto all = enumerate_convex_subcomplexes(small.complex, 6);
  for (const auto& s : all) EXPECT_TRUE(is_convex_subcomplex(small.complex, s));
}

// Double-counting (Lemma finiterestricted) on a chain of sector germs in the
// model apartment: counts through every intermediate match the direct count.
TEST(EnumerateExtensions, DoubleCountingThroughIntermediate) {
  ModelComplex sigma = model_apartment_ball(5);
  ModelComplex y0 = sector_ball_model(0);
  ModelComplex y1 = sector_ball_model(1);
  ModelComplex y2 = sector_ball_model(2);
  Vertex origin = sigma.vertex_at({0, 0});

  auto direct = enumerate_pinned(y2.complex, sigma.complex,
                                 {{y2.vertex_at({0, 0}), origin}});
  auto mids = enumerate_pinned(y1.complex, sigma.complex,
                               {{y1.vertex_at({0, 0}), origin}});
  std::size_t through = 0;
  for (const auto& alpha1 : mids) {
    std::vector<std::pair<Vertex, Vertex>> pins;
    for (int v = 0; v < y1.complex.vertex_count(); ++v)
      pins.push_back({y2.index.at(y1.coords[v]), alpha1[v]});
    through += enumerate_pinned(y2.complex, sigma.complex, pins).size();
  }
  EXPECT_EQ(direct.size(), through);
  EXPECT_GT(direct.size(), 0u);
}

}  // namespace
}  // namespace a2lab
