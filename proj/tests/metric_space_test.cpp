#include <gtest/gtest.h>

#include <cmath>

#include "medianwalls/io/fixtures.hpp"
#include "medianwalls/medianization.hpp"
#include "medianwalls/metric_space.hpp"
#include "corpus.hpp"

namespace mw = medianwalls;
using mw::PointId;
using mw::Rational;

namespace {

using RMetric = mw::FiniteMetricSpace<Rational>;

RMetric metric_of(const mw::WallSpace& X) { return RMetric::from_wall_space(X); }

PointId pid(const mw::WallSpace& X, const char* name) { return X.id(name); }

}  // namespace

TEST(Construction, ValidatesAxioms) {
  EXPECT_THROW(RMetric::from_rows({"a", "b"}, {{Rational(0), Rational(1)}, {Rational(2), Rational(0)}}),
               mw::DomainError);
  EXPECT_THROW(RMetric::from_rows({"a", "b"}, {{Rational(1), Rational(1)}, {Rational(1), Rational(0)}}),
               mw::DomainError);
  EXPECT_THROW(RMetric::from_rows({"a", "b", "c"}, {{Rational(0), Rational(1), Rational(5)},
                                                    {Rational(1), Rational(0), Rational(1)},
                                                    {Rational(5), Rational(1), Rational(0)}}),
               mw::DomainError);
  // pseudo-metric: distinct points at distance zero are legal
  const auto S = RMetric::from_rows({"a", "b"}, {{Rational(0), Rational(0)}, {Rational(0), Rational(0)}});
  EXPECT_EQ(mw::interval(S, PointId{0}, PointId{0}).count(), 2U);
}

TEST(Betweenness, FixtureValues) {
  const auto P = mw::fixtures::path(3);
  const auto S = metric_of(P);
  EXPECT_EQ(mw::betweenness_defect(S, PointId{0}, PointId{0}, PointId{2}), Rational(0));
  EXPECT_EQ(mw::betweenness_defect(S, PointId{0}, PointId{1}, PointId{2}), Rational(0));
  const auto T = mw::fixtures::tripod_star(3);
  const auto ST = metric_of(T);
  EXPECT_EQ(mw::betweenness_defect(ST, pid(T, "a"), pid(T, "c"), pid(T, "b")), Rational(2));
}

TEST(Interval, FixtureValues) {
  const auto P = mw::fixtures::path(3);
  EXPECT_EQ(mw::interval(metric_of(P), PointId{0}, PointId{2}).count(), 3U);
  EXPECT_EQ(mw::interval(metric_of(P), PointId{1}, PointId{1}), P.set_of({"p1"}));
  const auto T = mw::fixtures::tripod_star(3);
  EXPECT_EQ(mw::interval(metric_of(T), pid(T, "a"), pid(T, "b")), T.set_of({"a", "b"}));
}

TEST(Interval, ContainsEndpointsOnCorpus) {
  for (const auto& inst : mw::testing::corpus()) {
    const auto S = metric_of(inst.space);
    for (std::size_t a = 0; a < S.size(); ++a)
      for (std::size_t b = 0; b < S.size(); ++b) {
        const auto I = mw::interval(S, PointId{a}, PointId{b});
        ASSERT_TRUE(I.test(a) && I.test(b)) << inst.label;
      }
  }
}

TEST(MedianSet, FixtureValues) {
  const auto C = mw::fixtures::hypercube(3);
  const auto S = metric_of(C);
  EXPECT_EQ(mw::median_set(S, pid(C, "(0,0,0)"), pid(C, "(1,1,0)"), pid(C, "(1,0,1)")), C.set_of({"(1,0,0)"}));
  EXPECT_EQ(mw::median_set(S, pid(C, "(0,0,0)"), pid(C, "(0,0,0)"), pid(C, "(1,1,1)")), C.set_of({"(0,0,0)"}));
  const auto T = mw::fixtures::tripod_star(3);
  EXPECT_TRUE(mw::median_set(metric_of(T), pid(T, "a"), pid(T, "b"), pid(T, "c")).none());
}

TEST(IsMedianSpace, FixtureVerdicts) {
  EXPECT_TRUE(mw::is_median_space(metric_of(mw::fixtures::path(3))).pass);
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_TRUE(mw::is_median_space(metric_of(mw::fixtures::hypercube(k))).pass);
  const auto T = mw::fixtures::tripod_star(3);
  const auto v = mw::is_median_space(metric_of(T));
  ASSERT_FALSE(v.pass);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(*v.witness, (mw::Triple{pid(T, "a"), pid(T, "b"), pid(T, "c")}));
}

TEST(Tripodal, FixtureValues) {
  EXPECT_EQ(mw::tripodal_constant(metric_of(mw::fixtures::hypercube(3))).delta, Rational(0));
  EXPECT_EQ(mw::tripodal_constant(metric_of(mw::fixtures::path(3))).delta, Rational(0));
  const auto T = mw::fixtures::tripod_star(3);
  const auto r = mw::tripodal_constant(metric_of(T));
  EXPECT_EQ(r.delta, Rational(2));
  ASSERT_EQ(r.median_spread.size(), 1U);
  EXPECT_EQ(r.median_spread[0].second, Rational(2));
}

TEST(Tripodal, ZeroExactlyOnMedianSpaces) {
  for (const auto& inst : mw::testing::corpus()) {
    const auto S = metric_of(inst.space);
    const bool median = mw::is_median_space(S).pass;
    const bool zero = mw::tripodal_constant(S).delta == Rational(0);
    if (median) {
      EXPECT_TRUE(zero) << inst.label;
    }
  }
}

TEST(Tripodal, EuclideanTriangleGrid) {
  // Equilateral triangle of side 2*sqrt(3); candidate grid of step 0.1 over
  // its bounding box, anchored at the barycenter (sqrt(3), 1).
  const double side = 2 * std::sqrt(3.0);
  const double h = side * std::sqrt(3.0) / 2;
  std::vector<std::pair<double, double>> pts{{0, 0}, {side, 0}, {side / 2, h}};
  const double step = 0.1;
  for (int i = -18; i <= 18; ++i)
    for (int j = -10; j <= 20; ++j) pts.emplace_back(std::sqrt(3.0) + i * step, 1 + j * step);
  std::vector<std::string> names(pts.size());
  std::vector<double> flat(pts.size() * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    names[i] = std::to_string(i);
    for (std::size_t j = 0; j < pts.size(); ++j)
      flat[i * pts.size() + j] = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  }
  const mw::FiniteMetricSpace<double> S(names, std::move(flat), mw::Validation::trusted);
  const auto tri = mw::make_point_set(pts.size(), {PointId{0}, PointId{1}, PointId{2}});
  const auto r = mw::tripodal_constant(S, tri, S.all());
  EXPECT_NEAR(r.delta, 4 - 2 * std::sqrt(3.0), 1e-9);
  const auto [d, m] = mw::tripod_defect(S, mw::Triple{PointId{0}, PointId{1}, PointId{2}}, S.all());
  EXPECT_NEAR(d, r.delta, 1e-12);
  EXPECT_NEAR(pts[m.value].first, side / 2, 1e-9);
  EXPECT_NEAR(pts[m.value].second, h / 3, 1e-9);
}

TEST(Tripodal, ProductIsAtMostSumOfFactors) {
  for (const auto& [A, B] : mw::testing::product_pairs()) {
    const auto dA = mw::tripodal_constant(metric_of(A)).delta;
    const auto dB = mw::tripodal_constant(metric_of(B)).delta;
    EXPECT_LE(mw::tripodal_constant(metric_of(mw::product(A, B))).delta, dA + dB);
  }
}

TEST(DeltaMedian, FixtureValues) {
  EXPECT_EQ(mw::delta_median_diameter(metric_of(mw::fixtures::hypercube(2)), Rational(0)), Rational(0));
  EXPECT_EQ(mw::delta_median_diameter(metric_of(mw::fixtures::path(3)), Rational(0)), Rational(0));
  const auto T = metric_of(mw::fixtures::tripod_star(3));
  EXPECT_EQ(mw::delta_median_diameter(T, Rational(2)), Rational(2));
  try {
    (void)mw::delta_median_diameter(T, Rational(1));
    FAIL() << "expected a domain error";
  } catch (const mw::DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("(a, b, c)"), std::string::npos);
  }
}

TEST(EpsilonProjection, FixtureValues) {
  const auto T = mw::fixtures::tripod_star(3);
  EXPECT_EQ(mw::epsilon_projection(metric_of(T), pid(T, "a"), T.set_of({"b", "c"}), Rational(1)), T.set_of({"b", "c"}));
  const auto P = mw::fixtures::path(3);
  const auto SP = metric_of(P);
  EXPECT_EQ(mw::epsilon_projection(SP, PointId{0}, P.set_of({"p1", "p2"}), Rational(1, 2)), P.set_of({"p1"}));
  // strict bound: p2 at distance min + 1 is excluded
  EXPECT_EQ(mw::epsilon_projection(SP, PointId{0}, P.set_of({"p1", "p2"}), Rational(1)), P.set_of({"p1"}));
  EXPECT_TRUE(mw::epsilon_projection(SP, PointId{1}, P.set_of({"p1", "p2"}), Rational(5)).test(1));
  EXPECT_THROW((void)mw::epsilon_projection(SP, PointId{0}, P.empty_set(), Rational(1)), mw::DomainError);
}

TEST(Rank, FixtureValues) {
  EXPECT_EQ(mw::rank(mw::enumerate_sections(mw::fixtures::path(3))), 1U);
  EXPECT_EQ(mw::rank(mw::enumerate_sections(mw::fixtures::tripod_star(3))), 1U);
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(mw::rank(mw::enumerate_sections(mw::fixtures::hypercube(k))), k);
  EXPECT_EQ(mw::rank(mw::enumerate_sections(mw::fixtures::point())), 0U);
  for (std::uint64_t s = 1; s <= 5; ++s) EXPECT_EQ(mw::rank(mw::enumerate_sections(mw::fixtures::tree(9, s))), 1U);
}
