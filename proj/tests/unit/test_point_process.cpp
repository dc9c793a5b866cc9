#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "pdapprox/point_process.hpp"
#include "pdapprox/stats.hpp"

using namespace pdapprox;

namespace {
Window<2> unit_square() {
  Window<2> w;
  w.lower = {0, 0};
  w.upper = {1, 1};
  return w;
}
}  // namespace

TEST(SamplePoisson, DeterministicGivenSeed) {
  const auto a = sample_poisson<2>(unit_square(), 100, 42);
  const auto b = sample_poisson<2>(unit_square(), 100, 42);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) EXPECT_EQ(a.points[i], b.points[i]);
}

TEST(SamplePoisson, CountsArePoisson) {
  RunningStats s;
  for (std::uint64_t r = 0; r < 2000; ++r)
    s.add(double(sample_poisson<2>(unit_square(), 100, split_seed(1, r)).points.size()));
  EXPECT_NEAR(s.mean(), 100.0, 4 * std::sqrt(100.0 / 2000));
  const double dispersion = s.variance() / s.mean();
  EXPECT_GE(dispersion, 0.9);
  EXPECT_LE(dispersion, 1.1);
}

TEST(SamplePoisson, UniformOverGrid) {
  std::vector<double> counts(100, 0.0);
  double total = 0;
  for (std::uint64_t r = 0; r < 200; ++r) {
    for (const auto& p : sample_poisson<2>(unit_square(), 500, split_seed(2, r)).points) {
      ASSERT_TRUE(unit_square().contains(p));
      counts[std::size_t(p[0] * 10) * 10 + std::size_t(p[1] * 10)] += 1;
      total += 1;
    }
  }
  double chi2 = 0;
  for (double c : counts) chi2 += (c - total / 100) * (c - total / 100) / (total / 100);
  boost::math::chi_squared_distribution<> dist(99);
  EXPECT_GT(boost::math::cdf(boost::math::complement(dist, chi2)), 0.001);
}

TEST(SamplePoisson, InvalidInputThrows) {
  EXPECT_THROW(sample_poisson<2>(unit_square(), -1, 1), std::invalid_argument);
  Window<2> bad = unit_square();
  bad.upper[0] = -1;
  EXPECT_THROW(sample_poisson<2>(bad, 10, 1), std::invalid_argument);
}

TEST(ExtendSample, KeepsPointsAndMatchesIntensity) {
  const auto inner = sample_poisson<2>(unit_square(), 200, 5);
  const Window<2> outer = inflate<2>(unit_square(), 0.5);
  RunningStats added;
  for (std::uint64_t r = 0; r < 400; ++r) {
    const auto ext = extend_sample<2>(inner, outer, split_seed(6, r));
    ASSERT_GE(ext.points.size(), inner.points.size());
    for (std::size_t i = 0; i < inner.points.size(); ++i)
      ASSERT_EQ(ext.points[i], inner.points[i]);
    for (std::size_t i = inner.points.size(); i < ext.points.size(); ++i)
      ASSERT_FALSE(unit_square().contains(ext.points[i]));
    added.add(double(ext.points.size() - inner.points.size()));
  }
  // Ring area 4 - 1 = 3.
  EXPECT_NEAR(added.mean(), 600.0, 4 * std::sqrt(600.0 / 400));
}

TEST(PaddingMargin, PositiveAndDecreasingInT) {
  const auto disk = TargetSet::ball({0, 0}, 1.0);
  double prev = INFINITY;
  for (double t : {100.0, 1000.0, 10000.0, 100000.0}) {
    const double m = padding_margin(disk, t, 1e-6);
    EXPECT_GT(m, 0.0);
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(PaddingMargin, GrowsWithoutBoundAsTailMassVanishes) {
  const auto disk = TargetSet::ball({0, 0}, 1.0);
  double prev = 0.0;
  for (double eps : {1e-2, 1e-6, 1e-12, 1e-50, 1e-200}) {
    const double m = padding_margin(disk, 1000, eps);
    EXPECT_GT(m, prev);
    prev = m;
  }
  EXPECT_GT(prev, 1.0);
}

TEST(PaddingMargin, SolvesTheDefiningInequalityTightly) {
  const auto disk = TargetSet::ball({0, 0}, 1.0);
  const double t = 1000, eps = 1e-6;
  const double m = padding_margin(disk, t, eps);
  auto lhs = [&](double x) {
    return std::exp(-t * M_PI * (x / 4) * (x / 4)) * t * (2 + 2 * x) * (2 + 2 * x);
  };
  EXPECT_LE(lhs(m), eps * (1 + 1e-9));
  EXPECT_GT(lhs(m * (1 - 1e-6)), eps);
}

TEST(PaddingMargin, RegressionValue) {
  // Frozen from the bisection (d=2, t=1000, eps=1e-6, unit disk).
  const double m = padding_margin(TargetSet::ball({0, 0}, 1.0), 1000, 1e-6);
  EXPECT_NEAR(m, 0.33997646202048692, 1e-12);
}

TEST(PaddedWindow, ContainsTargetWithMargin) {
  const auto e = TargetSet::ellipse({1, 2}, {3, 1});
  const Window<2> w = padded_window<2>(e, 500, 1e-6);
  EXPECT_GT(w.margin, 0.0);
  EXPECT_NEAR(w.lower[0], -2 - w.margin, 1e-12);
  EXPECT_NEAR(w.upper[1], 3 + w.margin, 1e-12);
  EXPECT_NEAR(w.volume(), (6 + 2 * w.margin) * (2 + 2 * w.margin), 1e-12);
  EXPECT_NEAR(w.distance_to_boundary(Vec<2>{1, 2}), 1 + w.margin, 1e-12);
}
