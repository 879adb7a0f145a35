#include <gtest/gtest.h>

#include "a2lab/apartment.hpp"
#include "a2lab/catalog.hpp"
#include "a2lab/measures.hpp"

namespace a2lab {
namespace {

class MeasuresTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    ball3_ = new BuildingBall(build_ball(cmsz_q2_presentation(), 3));
    ball4_ = new BuildingBall(build_ball(cmsz_q2_presentation(), 4));
  }
  static void TearDownTestSuite() {
    delete ball3_;
    delete ball4_;
    ball3_ = ball4_ = nullptr;
  }
  static BuildingBall* ball3_;
  static BuildingBall* ball4_;
};

BuildingBall* MeasuresTest::ball3_ = nullptr;
BuildingBall* MeasuresTest::ball4_ = nullptr;

TEST_F(MeasuresTest, BallDistancesStableUnderRadiusGrowth) {
  // BFS discovery ids are a prefix: distances between deep pairs must agree,
  // which is the induced-distance-equals-building-distance check
  const TypedComplex& small = ball3_->complex;
  const TypedComplex& large = ball4_->complex;
  ASSERT_LE(small.vertex_count(), large.vertex_count());
  for (Vertex v = 0; v < small.vertex_count(); ++v)
    ASSERT_EQ(ball3_->dist_from_center[v], ball4_->dist_from_center[v]);
  for (Vertex u = 0; u < small.vertex_count(); u += 7) {
    const auto& r3 = small.distance_row(u);
    const auto& r4 = large.distance_row(u);
    for (Vertex v = 0; v < small.vertex_count(); ++v)
      if (ball3_->depth(u) + ball3_->depth(v) >= 2)
        EXPECT_EQ(r3[v], r4[v]) << u << " " << v;
  }
}

TEST_F(MeasuresTest, CatalogEntriesAreValidInclusions) {
  auto catalog = default_catalog_q2();
  EXPECT_GE(catalog.size(), 20u);
  for (const auto& e : catalog) {
    EXPECT_EQ(e.inc.diagnostic(), "") << e.name;
    CrazyDiamond big = realize_crazy_diamond(e.inc.big);
    EXPECT_LE(big.alcove_count(), 8) << e.name;
  }
}

TEST_F(MeasuresTest, ElementaryCountsMatchLemmas) {
  // one entry per elementary type, verified over every admissible alpha
  auto catalog = default_catalog_q2();
  auto run = [&](const std::string& name) -> SymmetryCheck {
    for (const auto& e : catalog)
      if (e.name == name) return extension_count_verify(e.inc, *ball4_, -1, e.name);
    throw std::runtime_error("no entry " + name);
  };
  auto expect_entry = [&](const std::string& name, long long expected) {
    SymmetryCheck c = run(name);
    EXPECT_TRUE(c.constant) << name;
    EXPECT_EQ(c.index.value, expected) << name;
    EXPECT_GT(c.index.alphas_swept, 0u) << name;
  };
  expect_entry("point->vertical edge, bottom (direction class +1)", 7);
  expect_entry("point->horizontal edge, y end (direction class +2)", 7);
  expect_entry("vertical edge ->C_v-> vertical column", 4);
  expect_entry("horizontal edge ->B^c-> horizontal path", 4);
  expect_entry("vertical edge ->B_z(v=0)-> alcove", 3);
  expect_entry("alcove ->B_z(v=1)-> bowtie", 2);
  expect_entry("bowtie ->B_z(v=2)-> tripod", 1);
  expect_entry("alcove ->C-> rhombus", 2);
  expect_entry("horizontal edge ->C-> alcove", 3);
}

TEST_F(MeasuresTest, RelativeIndexProductAndIdentityChain) {
  // [Y,Y]_id = 1 and the product over a two-step chain
  RelativeIndex one{1, true, 1};
  EXPECT_EQ(relative_index_product({}), 1);
  EXPECT_EQ(relative_index_product({one, one}), 1);
  RelativeIndex seven{7, true, 5}, three{3, true, 5};
  EXPECT_EQ(relative_index_product({seven, three}), 21);
  RelativeIndex unverified{2, false, 0};
  EXPECT_THROW(relative_index_product({unverified}), InputError);
}

TEST_F(MeasuresTest, PointIntoAlcoveCompositeIs21) {
  auto catalog = default_catalog_q2();
  for (const auto& e : catalog) {
    if (e.name != "point->alcove (composite)") continue;
    SymmetryCheck c = extension_count_verify(e.inc, *ball4_, -1, e.name);
    EXPECT_TRUE(c.constant);
    EXPECT_EQ(c.index.value, 21);  // flags at a vertex
  }
}

TEST_F(MeasuresTest, ChainProductOracleOnComposites) {
  auto catalog = default_catalog_q2();
  for (const auto& e : catalog) {
    if (e.name.find("composite") == std::string::npos &&
        e.name.find("boundary") == std::string::npos)
      continue;
    CrazyDiamond small = realize_crazy_diamond(e.inc.small);
    int m = inclusion_reach(e.inc);
    EnumOptions one;
    one.image_filter = [&, m](Vertex v) { return ball4_->depth(v) >= m; };
    one.max_results = 1;
    auto alphas = enumerate_pinned(small.realization, ball4_->complex, {}, one);
    ASSERT_FALSE(alphas.empty()) << e.name;
    ChainOracleResult oracle = chain_product_oracle(e.inc, *ball4_, alphas.front());
    EXPECT_EQ(oracle.direct, oracle.product) << e.name;
    EXPECT_TRUE(oracle.steps_match_lemmas) << e.name;
    if (e.expected >= 0) EXPECT_EQ(oracle.direct, e.expected) << e.name;
  }
}

TEST_F(MeasuresTest, UniformCylinderMeasureBasics) {
  // germ space at the center: whole space has mass 1, singletons 1/N
  ModelComplex lambda1 = sector_ball_model(1);
  EmbeddingSet set = make_embedding_set(lambda1.complex, ball3_->complex,
                                        {{lambda1.vertex_at({0, 0}), ball3_->center}});
  ASSERT_GT(set.cardinality(), 0u);
  CylinderMeasure mu = CylinderMeasure::uniform(set);
  EXPECT_EQ(mu.total(), Rat(1));
  EXPECT_EQ(cylinder_measure(mu, {}), Rat(1));
  std::vector<std::pair<Vertex, Vertex>> singleton;
  for (Vertex v = 0; v < lambda1.complex.vertex_count(); ++v)
    singleton.push_back({v, set.members[0][v]});
  EXPECT_EQ(cylinder_measure(mu, singleton),
            Rat(1, static_cast<long>(set.cardinality())));
  // empty cylinder: pin to an impossible target
  EXPECT_EQ(cylinder_measure(mu, {{0, set.members[0][1]}}), Rat(0));
}

TruncationChain lambda_chain(const BuildingBall& ball) {
  // {0} ⊂ Conv(0,(1,0)) ⊂ Conv(0,(1,1)) ⊂ Conv(0,(2,1)), pinned 0 -> center
  static std::vector<ModelComplex> models;
  models.clear();
  models.push_back(box_model(0, 0));
  models.push_back(box_model(1, 0));
  models.push_back(box_model(1, 1));
  models.push_back(box_model(2, 1));
  TruncationChain chain;
  for (auto& m : models) chain.complexes.push_back(&m.complex);
  for (int j = 0; j + 1 < 4; ++j) {
    std::vector<Vertex> up(models[j].complex.vertex_count());
    for (Vertex v = 0; v < models[j].complex.vertex_count(); ++v)
      up[v] = models[j + 1].vertex_at(models[j].coords[v]);
    chain.up.push_back(std::move(up));
  }
  chain.alpha0 = {{models[0].vertex_at({0, 0}), ball.center}};
  return chain;
}

TEST_F(MeasuresTest, RestrictionPushforwardOnLambdaChain) {
  TruncationChain chain = lambda_chain(*ball3_);
  for (int low = 0; low < 3; ++low)
    for (int high = low; high <= 3; ++high) {
      VerificationReport r =
          verify_restriction_pushforward(chain, ball3_->complex, low, high);
      EXPECT_TRUE(r.ok()) << low << "->" << high << ": " << r.to_json().dump();
    }
}

TEST_F(MeasuresTest, DisintegrationOnLambdaChain) {
  TruncationChain chain = lambda_chain(*ball3_);
  for (int mid = 0; mid <= 3; ++mid)
    for (int high = mid; high <= 3; ++high) {
      VerificationReport r = verify_disintegration(chain, ball3_->complex, mid, high);
      EXPECT_TRUE(r.ok()) << mid << "->" << high;
    }
}

TEST_F(MeasuresTest, DualityOnLambdaChain) {
  TruncationChain chain = lambda_chain(*ball3_);
  VerificationReport r = verify_duality(chain, ball3_->complex, 1, 3);
  EXPECT_TRUE(r.ok()) << r.to_json().dump();
  VerificationReport r2 = verify_duality(chain, ball3_->complex, 0, 2);
  EXPECT_TRUE(r2.ok());
}

TEST_F(MeasuresTest, CatalogJsonRoundTrip) {
  auto catalog = default_catalog_q2();
  auto loaded = catalog_from_json(catalog_to_json(catalog));
  ASSERT_EQ(loaded.size(), catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    EXPECT_EQ(loaded[i].name, catalog[i].name);
    EXPECT_EQ(loaded[i].expected, catalog[i].expected);
    EXPECT_EQ(diamond_canonical_code(loaded[i].inc.big),
              diamond_canonical_code(catalog[i].inc.big));
  }
}

}  // namespace
}  // namespace a2lab
