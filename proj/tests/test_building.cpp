#include <gtest/gtest.h>

#include "a2lab/building.hpp"
#include "a2lab/projective_plane.hpp"
#include "a2lab/triangle_presentation.hpp"

namespace a2lab {
namespace {

TEST(ProjectivePlane, FanoValidates) {
  ProjectivePlane pl = fano_plane();
  EXPECT_EQ(pl.validate(), "");
  EXPECT_EQ(pl.point_count(), 7);
  EXPECT_EQ(pl.incidence_girth(), 6);
}

TEST(ProjectivePlane, Opposition) {
  ProjectivePlane pl = fano_plane();
  // a point on a line is not opposite it; a point off it is
  int l = 0;
  int on = pl.line_points[l][0];
  EXPECT_FALSE(pl.vertices_opposite(on, l));
  for (int p = 0; p < 7; ++p)
    if (!pl.incident(p, l)) EXPECT_TRUE(pl.vertices_opposite(p, l));
  // chamber vs itself: distance 0, not opposite
  auto flags = pl.flags();
  EXPECT_FALSE(pl.chambers_opposite(flags[0], flags[0]));
  // each flag has q^3 = 8 opposite flags
  int opp = 0;
  for (const auto& f : flags)
    if (pl.chambers_opposite(flags[0], f)) ++opp;
  EXPECT_EQ(opp, 8);
}

TEST(TrianglePresentationTest, BuiltInValidatesAndFaultsAreCaught) {
  TrianglePresentation tp = cmsz_q2_presentation();
  EXPECT_TRUE(validate_triangle_presentation(tp));
  EXPECT_EQ(tp.triples.size(), 21u);

  // dropping one cyclic image breaks closure
  TrianglePresentation broken = tp;
  broken.triples.erase(broken.triples.begin());
  EXPECT_FALSE(validate_triangle_presentation(broken));

  // a non-bijective lambda is rejected
  TrianglePresentation bad_lambda = tp;
  bad_lambda.lambda[1] = bad_lambda.lambda[0];
  EXPECT_FALSE(validate_triangle_presentation(bad_lambda));
}

TEST(BuildBall, RadiusZeroAndOne) {
  TrianglePresentation tp = cmsz_q2_presentation();
  BuildingBall b0 = build_ball(tp, 0);
  EXPECT_EQ(b0.complex.vertex_count(), 1);
  EXPECT_EQ(b0.complex.edge_count(), 0);

  BuildingBall b1 = build_ball(tp, 1);
  EXPECT_EQ(b1.complex.vertex_count(), 15);  // 1 + 2(q^2+q+1)
  EXPECT_EQ(b1.complex.degree(b1.center), 14);
}

TEST(BuildBall, RadiusTwoLocalStructure) {
  TrianglePresentation tp = cmsz_q2_presentation();
  BuildingBall ball = build_ball(tp, 2);
  // sphere sizes frozen from the first enumeration; level 2 splits as
  // |V_(2,0)| = |V_(0,2)| = 28 and |V_(1,1)| = 42
  int level1 = 0, level2 = 0;
  for (Vertex v = 0; v < ball.complex.vertex_count(); ++v) {
    if (ball.dist_from_center[v] == 1) ++level1;
    if (ball.dist_from_center[v] == 2) ++level2;
  }
  EXPECT_EQ(level1, 14);
  EXPECT_EQ(level2, 98);

  LinkPlane link = extract_and_validate_link(ball, ball.center);
  EXPECT_EQ(link.plane.validate(), "");
  EXPECT_EQ(link.plane.point_count(), 7);
  EXPECT_EQ(link.plane.line_count(), 7);

  // boundary vertices are rejected
  for (Vertex v = 0; v < ball.complex.vertex_count(); ++v)
    if (ball.dist_from_center[v] == 2) {
      EXPECT_THROW(extract_and_validate_link(ball, v), InputError);
      break;
    }
}

TEST(BuildBall, RadiusThreeFullSweep) {
  TrianglePresentation tp = cmsz_q2_presentation();
  BuildingBall ball = build_ball(tp, 3);

  // every interior vertex: degree 14 and a valid Fano link
  for (Vertex v = 0; v < ball.complex.vertex_count(); ++v) {
    if (!ball.interior(v, 1)) continue;
    EXPECT_EQ(ball.complex.degree(v), 14) << "vertex " << v;
    EXPECT_NO_THROW(extract_and_validate_link(ball, v)) << "vertex " << v;
  }
  // every fully-interior edge lies in exactly q+1 = 3 triangles
  for (const auto& e : ball.complex.edges()) {
    if (!ball.interior(e[0], 1) || !ball.interior(e[1], 1)) continue;
    EXPECT_EQ(ball.complex.triangles_on_edge(e[0], e[1]).size(), 3u);
  }
}

TEST(BuildBall, DeterministicAndHashStable) {
  TrianglePresentation tp = cmsz_q2_presentation();
  BuildingBall a = build_ball(tp, 2);
  BuildingBall b = build_ball(tp, 2);
  EXPECT_EQ(a.complex.to_json().dump(), b.complex.to_json().dump());
  EXPECT_EQ(a.presentation_sha256, b.presentation_sha256);
  EXPECT_EQ(sha256_hex(a.complex.to_json().dump()), sha256_hex(b.complex.to_json().dump()));
}

TEST(BuildBall, SaveLoadRoundTrip) {
  TrianglePresentation tp = cmsz_q2_presentation();
  BuildingBall ball = build_ball(tp, 1);
  save_ball(ball, "/tmp/a2lab_test.complex.json", "/tmp/a2lab_test.meta.json");
  BuildingBall loaded = load_ball("/tmp/a2lab_test.complex.json", "/tmp/a2lab_test.meta.json");
  EXPECT_EQ(loaded.complex.to_json().dump(), ball.complex.to_json().dump());
  EXPECT_EQ(loaded.radius, 1);
  EXPECT_EQ(loaded.q, 2);
}

}  // namespace
}  // namespace a2lab
