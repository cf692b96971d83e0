#include <gtest/gtest.h>

#include <algorithm>

#include "medianwalls/io/fixtures.hpp"
#include "medianwalls/wallspace.hpp"
#include "corpus.hpp"

namespace mw = medianwalls;
using mw::PointId;
using mw::Rational;
using mw::WallId;

namespace {

std::vector<std::string> wall_names(const mw::WallSpace& X, const std::vector<WallId>& ids) {
  std::vector<std::string> out;
  for (auto w : ids) out.push_back(X.wall(w).name);
  std::sort(out.begin(), out.end());
  return out;
}

using Names = std::vector<std::string>;

}  // namespace

TEST(SeparatingWalls, Path3EndpointsAreSeparatedByBothWalls) {
  const auto X = mw::fixtures::path(3);
  EXPECT_EQ(wall_names(X, mw::separating_walls(X, X.id("p0"), X.id("p2"))), (Names{"w01", "w12"}));
}

TEST(SeparatingWalls, EmptySecondSetGivesWallsNotCuttingFirst) {
  const auto X = mw::fixtures::path(3);
  EXPECT_EQ(wall_names(X, mw::separating_walls(X, X.set_of({"p1"}), X.empty_set())), (Names{"w01", "w12"}));
  EXPECT_EQ(wall_names(X, mw::separating_walls(X, X.set_of({"p0", "p1"}), X.empty_set())), (Names{"w12"}));
}

TEST(SeparatingWalls, OverlappingSetsAreRejected) {
  const auto X = mw::fixtures::path(3);
  EXPECT_THROW((void)mw::separating_walls(X, X.id("p1"), X.id("p1")), mw::DomainError);
  EXPECT_THROW((void)mw::separating_walls(X, X.set_of({"p0", "p1"}), X.set_of({"p1"})), mw::DomainError);
}

TEST(SeparatingWalls, TripodPairIsSeparatedByItsTwoLeafWalls) {
  const auto X = mw::fixtures::tripod_star(3);
  EXPECT_EQ(wall_names(X, mw::separating_walls(X, X.id("a"), X.id("b"))), (Names{"wa", "wb"}));
}

TEST(WallPdist, FixtureValues) {
  const auto P = mw::fixtures::path(3);
  EXPECT_EQ(mw::wall_pdist(P, P.id("p0"), P.id("p2")), Rational(2));
  EXPECT_EQ(mw::wall_pdist(P, P.id("p1"), P.id("p1")), Rational(0));
  const auto T = mw::fixtures::tripod_star(3);
  EXPECT_EQ(mw::wall_pdist(T, T.id("a"), T.id("b")), Rational(2));
  EXPECT_THROW((void)mw::wall_pdist(P, PointId{0}, PointId{7}), mw::DomainError);
  EXPECT_THROW((void)P.id("nope"), mw::DomainError);
}

TEST(WallsCutting, FixtureValues) {
  const auto P = mw::fixtures::path(3);
  EXPECT_EQ(wall_names(P, mw::walls_cutting(P, P.set_of({"p0", "p1"}))), (Names{"w01"}));
  EXPECT_TRUE(mw::walls_cutting(P, P.set_of({"p0"})).empty());
  const auto T = mw::fixtures::tripod_star(3);
  EXPECT_EQ(wall_names(T, mw::walls_cutting(T, T.all())), (Names{"wa", "wb", "wc"}));
}

TEST(LocalFiniteness, OpenBallProfile) {
  const auto P = mw::fixtures::path(3);
  const auto prof = mw::local_finiteness_profile(P, {Rational(1, 2), Rational(3, 2), Rational(1)});
  EXPECT_EQ(prof[0].value, Rational(0));
  // B(p1, 3/2) is the whole chain, cut by both walls.
  EXPECT_EQ(prof[1].value, Rational(2));
  EXPECT_EQ(prof[1].center, P.id("p1"));
  // open ball: radius 1 keeps singletons
  EXPECT_EQ(prof[2].value, Rational(0));
  const auto T = mw::fixtures::tripod_star(3);
  EXPECT_EQ(mw::local_finiteness(T, Rational(5, 2)), Rational(3));
  EXPECT_THROW((void)mw::local_finiteness_profile(P, {}), mw::DomainError);
  EXPECT_THROW((void)mw::local_finiteness_profile(P, {Rational(-1)}), mw::DomainError);
}

TEST(Convexity, NamedFixturesPass) {
  EXPECT_TRUE(mw::check_halfspace_convexity(mw::fixtures::path(3)).pass);
  EXPECT_TRUE(mw::check_halfspace_convexity(mw::fixtures::tripod_star(3)).pass);
  const auto r = mw::check_halfspace_convexity(mw::fixtures::hypercube(3));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.checked_half_spaces, 6U);
}

TEST(Convexity, WeightlessWallsAreExempt) {
  // {p0, p2} | {p1} carries no weight, so p1 stays between p0 and p2
  // while lying outside the half-space {p0, p2}.
  const auto X = mw::WallSpaceBuilder<Rational>({"p0", "p1", "p2"})
                     .wall({"p0"})
                     .wall({"p0", "p1"})
                     .wall({"p0", "p2"}, Rational(0), "ghost")
                     .build();
  const auto r = mw::check_halfspace_convexity(X);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.exempt_zero_weight, 2U);
}

TEST(Convexity, HoldsOnCorpus) {
  for (const auto& inst : mw::testing::corpus()) {
    EXPECT_TRUE(mw::check_halfspace_convexity(inst.space).pass) << inst.label;
  }
}

TEST(Construction, RejectsBadInput) {
  EXPECT_THROW(mw::WallSpace({"a", "a"}, {}), mw::DomainError);
  EXPECT_THROW((mw::WallSpaceBuilder<Rational>({"a", "b"}).wall({"c"}).build()), mw::DomainError);
  EXPECT_THROW((mw::WallSpaceBuilder<Rational>({"a", "b"}).wall({"a"}, Rational(-1)).build()), mw::DomainError);
  // trivial walls and repeated partitions are fine
  const auto X = mw::WallSpaceBuilder<Rational>({"a", "b"}).wall({"a"}).wall({"b"}).wall(std::vector<std::string>{}).build();
  EXPECT_EQ(X.pdist(X.id("a"), X.id("b")), Rational(2));
  EXPECT_TRUE(X.walls()[2].trivial());
}

TEST(PseudoMetric, AxiomsAndSubadditivityOnCorpus) {
  for (const auto& inst : mw::testing::corpus()) {
    const auto& X = inst.space;
    const auto n = X.size();
    for (std::size_t x = 0; x < n; ++x) {
      EXPECT_EQ(X.pdist(PointId{x}, PointId{x}), Rational(0));
      for (std::size_t y = 0; y < n; ++y) {
        ASSERT_EQ(X.pdist(PointId{x}, PointId{y}), X.pdist(PointId{y}, PointId{x})) << inst.label;
        if (x == y) continue;
        const auto wxy = mw::separating_walls(X, PointId{x}, PointId{y});
        ASSERT_EQ(mw::total_weight(X, wxy), X.pdist(PointId{x}, PointId{y})) << inst.label;
        for (std::size_t z = 0; z < n; ++z) {
          ASSERT_LE(X.pdist(PointId{x}, PointId{y}), X.pdist(PointId{x}, PointId{z}) + X.pdist(PointId{z}, PointId{y}))
              << inst.label;
          if (z == x || z == y) continue;
          const auto a = mw::separating_walls(X, PointId{x}, PointId{z});
          const auto b = mw::separating_walls(X, PointId{z}, PointId{y});
          for (auto w : wxy) {
            ASSERT_TRUE(std::find(a.begin(), a.end(), w) != a.end() || std::find(b.begin(), b.end(), w) != b.end())
                << inst.label;
          }
        }
      }
    }
  }
}

namespace {

mw::WallSpaceMap<Rational> diag_map(const mw::WallSpace& source, const mw::WallSpace& square) {
  return mw::WallSpaceMap<Rational>(source, square, {square.id("(0,0)"), square.id("(1,1)")});
}

}  // namespace

TEST(Homomorphism, IdentityAndDiag) {
  const auto P = mw::fixtures::path(3);
  const mw::WallSpaceMap<Rational> id(P, P, {PointId{0}, PointId{1}, PointId{2}});
  EXPECT_TRUE(mw::verify_homomorphism(id).pass);
  EXPECT_TRUE(mw::verify_monomorphism(id).pass);
  EXPECT_TRUE(mw::verify_coarse_surjectivity(id, Rational(0)).pass);

  const auto square = mw::fixtures::hypercube(2);
  const auto heavy = mw::fixtures::diag_source(Rational(2));
  const auto light = mw::fixtures::diag_source(Rational(1));
  const auto good = diag_map(heavy, square);
  EXPECT_TRUE(mw::verify_homomorphism(good).pass);
  EXPECT_TRUE(mw::is_isometric_embedding(good));
  EXPECT_TRUE(mw::verify_monomorphism(good).pass);
  const auto bad = diag_map(light, square);
  const auto v = mw::verify_homomorphism(bad);
  EXPECT_FALSE(v.pass);
  ASSERT_TRUE(v.wall.has_value());
  EXPECT_EQ(v.wall->value, 0U);
}

TEST(Homomorphism, RestrictionWithTrivialWallIsAMonomorphism) {
  const auto P = mw::fixtures::path(3);
  const auto sub = mw::WallSpaceBuilder<Rational>({"p0", "p1"}).wall({"p0"}).wall({"p0", "p1"}).build();
  const mw::WallSpaceMap<Rational> incl(sub, P, {P.id("p0"), P.id("p1")});
  EXPECT_TRUE(mw::verify_homomorphism(incl).pass);
  EXPECT_TRUE(mw::verify_monomorphism(incl).pass);
  // dropping the trivial wall leaves w12's pullback unmatched
  const auto bare = mw::WallSpaceBuilder<Rational>({"p0", "p1"}).wall({"p0"}).build();
  const mw::WallSpaceMap<Rational> incl2(bare, P, {P.id("p0"), P.id("p1")});
  EXPECT_FALSE(mw::verify_homomorphism(incl2).pass);
}

TEST(CoarseSurjectivity, DiagIntoSquare) {
  const auto square = mw::fixtures::hypercube(2);
  const auto heavy = mw::fixtures::diag_source(Rational(2));
  const auto m = diag_map(heavy, square);
  EXPECT_TRUE(mw::verify_coarse_surjectivity(m, Rational(1)).pass);
  EXPECT_FALSE(mw::verify_coarse_surjectivity(m, Rational(1, 2)).pass);
  EXPECT_EQ(mw::coarse_surjectivity_constant(m), Rational(1));
  EXPECT_THROW((void)mw::verify_coarse_surjectivity(m, Rational(-1)), mw::DomainError);
}

TEST(Homomorphism, PassingMapsPreserveDistancesOnCorpusSelfMaps) {
  // A permutation fixing every wall partition is a homomorphism; the
  // identity is the case available on every instance.
  for (const auto& inst : mw::testing::corpus()) {
    std::vector<PointId> ids;
    for (std::size_t i = 0; i < inst.space.size(); ++i) ids.push_back(PointId{i});
    const mw::WallSpaceMap<Rational> m(inst.space, inst.space, ids);
    ASSERT_TRUE(mw::verify_monomorphism(m).pass) << inst.label;
    EXPECT_TRUE(mw::is_isometric_embedding(m)) << inst.label;
  }
}

TEST(Product, TwoPathsMakeASquare) {
  const auto P2 = mw::fixtures::path(2);
  const auto S = mw::product(P2, P2);
  EXPECT_TRUE(mw::testing::isomorphic(S, mw::fixtures::hypercube(2)));
  const auto X = mw::fixtures::path(3);
  EXPECT_TRUE(mw::testing::isomorphic(mw::product(X, mw::fixtures::point()), X));
}

TEST(Product, DistancesAdd) {
  const auto X = mw::fixtures::path(3);
  const auto Y = mw::fixtures::path(2);
  const auto XY = mw::product(X, Y);
  EXPECT_EQ(XY.pdist(XY.id("(p0,p0)"), XY.id("(p2,p1)")), Rational(3));
  for (const auto& [A, B] : mw::testing::product_pairs()) {
    const auto AB = mw::product(A, B);
    for (std::size_t i = 0; i < AB.size(); ++i)
      for (std::size_t j = 0; j < AB.size(); ++j) {
        const auto expect = A.pdist(PointId{i / B.size()}, PointId{j / B.size()}) +
                            B.pdist(PointId{i % B.size()}, PointId{j % B.size()});
        ASSERT_EQ(AB.pdist(PointId{i}, PointId{j}), expect);
      }
  }
}
