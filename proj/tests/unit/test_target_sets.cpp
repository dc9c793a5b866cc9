#include <gtest/gtest.h>

#include <cmath>

#include "pdapprox/rng.hpp"
#include "pdapprox/target_sets.hpp"

using namespace pdapprox;

namespace {
const TargetSet kDisk = TargetSet::ball({0.0, 0.0}, 1.0);
const TargetSet kSquare = TargetSet::box({0.0, 0.0}, {1.0, 1.0});

double lens(double h) { return 2 * std::acos(h / 2) - (h / 2) * std::sqrt(4 - h * h); }
}  // namespace

TEST(TargetSet, Membership) {
  EXPECT_TRUE(contains(kDisk, std::vector<double>{0.5, 0.0}));
  EXPECT_FALSE(contains(kDisk, std::vector<double>{1.5, 0.0}));
  EXPECT_TRUE(contains(kSquare, std::vector<double>{1.0, 0.5}));
}

TEST(TargetSet, BasicQuantities) {
  EXPECT_NEAR(kDisk.volume(), M_PI, 1e-15);
  EXPECT_NEAR(kDisk.perimeter(), 2 * M_PI, 1e-15);
  EXPECT_EQ(kSquare.volume(), 1.0);
  EXPECT_EQ(kSquare.perimeter(), 4.0);
  EXPECT_EQ(kSquare.inradius(), 0.5);
  const auto e = TargetSet::ellipse({0, 0}, {2, 1});
  EXPECT_NEAR(e.volume(), 2 * M_PI, 1e-14);
  EXPECT_NEAR(e.inradius(), 1.0, 1e-14);
  // Ramanujan's second approximation is accurate to ~1e-10 at this ratio.
  const double h = 1.0 / 9.0;
  EXPECT_NEAR(e.perimeter(), M_PI * 3 * (1 + 3 * h / (10 + std::sqrt(4 - 3 * h))), 1e-8);
  const auto b3 = TargetSet::ball({0, 0, 0}, 2.0);
  EXPECT_NEAR(b3.volume(), 4.0 / 3 * M_PI * 8, 1e-12);
  EXPECT_NEAR(b3.perimeter(), 4 * M_PI * 4, 1e-12);
}

TEST(TargetSet, InvalidParametersThrow) {
  EXPECT_THROW(TargetSet::ball({0.0, 0.0}, -1.0), std::invalid_argument);
  EXPECT_THROW(TargetSet::box({0.0, 0.0}, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(TargetSet::polygon({{0, 0}, {1, 1}, {2, 2}}), std::invalid_argument);
  // Not convex.
  EXPECT_THROW(TargetSet::polygon({{0, 0}, {2, 0}, {1, 0.2}, {1, 2}}), std::invalid_argument);
}

TEST(TargetSet, PolygonIsNormalisedCounterClockwise) {
  const auto p = TargetSet::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  EXPECT_NEAR(p.volume(), 1.0, 1e-15);
  EXPECT_NEAR(p.perimeter(), 4.0, 1e-15);
  EXPECT_NEAR(p.inradius(), 0.5, 1e-12);
}

TEST(DistanceToBoundary, Examples) {
  EXPECT_DOUBLE_EQ(distance_to_boundary(kDisk, std::vector<double>{0, 0}), -1.0);
  EXPECT_DOUBLE_EQ(distance_to_boundary(kDisk, std::vector<double>{2, 0}), 1.0);
  EXPECT_NEAR(distance_to_boundary(kSquare, std::vector<double>{0.5, 0.2}), -0.2, 1e-15);
  EXPECT_NEAR(distance_to_boundary(kSquare, std::vector<double>{2, 2}), std::sqrt(2.0), 1e-15);
}

TEST(DistanceToBoundary, EllipseMatchesDenseBoundarySampling) {
  const auto e = TargetSet::ellipse({0.5, -0.25}, {2, 0.7});
  CounterRng rng(9);
  for (int k = 0; k < 50; ++k) {
    const std::vector<double> p{rng.uniform(-3, 4), rng.uniform(-2, 2)};
    double best = INFINITY;
    for (int i = 0; i < 200000; ++i) {
      const double th = 2 * M_PI * i / 200000;
      best = std::min(best, std::hypot(p[0] - 0.5 - 2 * std::cos(th),
                                       p[1] + 0.25 - 0.7 * std::sin(th)));
    }
    const double signed_best = contains(e, p) ? -best : best;
    EXPECT_NEAR(distance_to_boundary(e, p), signed_best, 1e-4);
  }
}

TEST(Steiner, Examples) {
  EXPECT_NEAR(steiner_volume(kDisk, 1.0), 4 * M_PI, 1e-13);
  EXPECT_NEAR(steiner_volume(kSquare, 1.0), 5 + M_PI, 1e-13);
  EXPECT_EQ(steiner_volume(kSquare, 0.0), 1.0);
  EXPECT_THROW(steiner_volume(kSquare, -0.1), std::invalid_argument);
}

TEST(Steiner, LinearCoefficientIsPerimeter) {
  for (const auto& a : {kSquare, TargetSet::box({0, 0, 0}, {1, 2, 3}),
                        TargetSet::ball({0, 0, 0}, 1.5)}) {
    const auto& v = a.intrinsic_volumes();
    const int d = a.dimension();
    EXPECT_NEAR(2 * v[d - 1], a.perimeter(), 1e-12);
  }
  // Box [0,1]x[0,2]x[0,3]: surface 22.
  EXPECT_NEAR(TargetSet::box({0, 0, 0}, {1, 2, 3}).perimeter(), 22.0, 1e-12);
}

TEST(Steiner, MatchesMonteCarloParallelVolume) {
  const auto p = TargetSet::polygon({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}});
  const double eps = 0.3;
  CounterRng rng(4);
  int hits = 0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const std::vector<double> x{rng.uniform(-1, 3), rng.uniform(-0.5, 2.5)};
    hits += distance_to_boundary(p, x) <= eps;
  }
  const double area = 12.0 * hits / n;
  const double se = 12.0 * std::sqrt(double(hits) / n * (1 - double(hits) / n) / n);
  EXPECT_NEAR(area, steiner_volume(p, eps), 4 * se);
}

TEST(Covariogram, Examples) {
  EXPECT_NEAR(covariogram(kSquare, std::vector<double>{0.3, 0}), 0.7, 1e-15);
  EXPECT_NEAR(covariogram(kDisk, std::vector<double>{0, 0}), M_PI, 1e-14);
  for (double h : {0.0, 0.25, 0.5, 1.0, 1.7, 2.0})
    EXPECT_NEAR(covariogram(kDisk, std::vector<double>{h, 0}), lens(h), 1e-12) << h;
  EXPECT_EQ(covariogram(kDisk, std::vector<double>{2.5, 0}), 0.0);
}

TEST(Covariogram, MonteCarloCrossChecks) {
  const auto mc = covariogram_mc(kDisk, std::vector<double>{0.5, 0}, 400000, 3);
  EXPECT_NEAR(mc.value, lens(0.5), 4 * mc.stderr_);
  const auto sq = covariogram_mc(kSquare, std::vector<double>{0.3, 0}, 400000, 4);
  EXPECT_NEAR(sq.value, 0.7, 4 * sq.stderr_);
  const auto e = TargetSet::ellipse({0, 0}, {2, 1});
  const std::vector<double> x{0.7, -0.4};
  const auto em = covariogram_mc(e, x, 400000, 5);
  EXPECT_NEAR(em.value, covariogram(e, x), 4 * em.stderr_);
  const auto p = TargetSet::polygon({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}});
  const auto pm = covariogram_mc(p, x, 400000, 6);
  EXPECT_NEAR(pm.value, covariogram(p, x), 4 * pm.stderr_);
  const auto b3 = TargetSet::ball({0, 0, 0}, 1.0);
  const std::vector<double> y{0.3, 0.4, 0.1};
  const auto bm = covariogram_mc(b3, y, 400000, 7);
  EXPECT_NEAR(bm.value, covariogram(b3, y), 4 * bm.stderr_);
}

TEST(Covariogram, EvenAndLipschitz) {
  const auto p = TargetSet::polygon({{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}});
  CounterRng rng(8);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const std::vector<double> mx{-x[0], -x[1]};
    EXPECT_NEAR(covariogram(p, x), covariogram(p, mx), 1e-12);
  }
  for (const auto& a : {p, kDisk, kSquare, TargetSet::ellipse({0, 0}, {2, 1})}) {
    for (int i = 0; i < 1000; ++i) {
      const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const std::vector<double> y{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      const double dist = std::hypot(x[0] - y[0], x[1] - y[1]);
      EXPECT_LE(std::abs(covariogram(a, x) - covariogram(a, y)),
                (a.perimeter() / 2 + 1e-9) * dist);
    }
  }
}

TEST(Covariogram, ClassInterface) {
  Covariogram g(kSquare);
  EXPECT_NEAR(g(std::vector<double>{0.3, 0}).value, 0.7, 1e-15);
  Covariogram m(kSquare, Covariogram::Method::monte_carlo, 100000, 1);
  const auto v = m(std::vector<double>{0.3, 0});
  EXPECT_GT(v.stderr_, 0.0);
  EXPECT_NEAR(v.value, 0.7, 4 * v.stderr_);
}

TEST(PerimeterFromCovariogram, RecoversAnalyticPerimeter) {
  EXPECT_NEAR(perimeter_from_covariogram(kDisk), 2 * M_PI, 0.01 * 2 * M_PI);
  EXPECT_NEAR(perimeter_from_covariogram(kSquare), 4.0, 0.04);
  const auto e = TargetSet::ellipse({0, 0}, {2, 1});
  EXPECT_NEAR(perimeter_from_covariogram(e), e.perimeter(), 0.01 * e.perimeter());
  const auto b3 = TargetSet::ball({0, 0, 0}, 1.0);
  EXPECT_NEAR(perimeter_from_covariogram(b3, 2000), 4 * M_PI, 0.01 * 4 * M_PI);
}

TEST(SampleUniformIn, StaysInside) {
  CounterRng rng(2);
  const auto e = TargetSet::ellipse({1, 1}, {2, 0.5});
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(contains(e, sample_uniform_in(e, rng)));
}
