#include <gtest/gtest.h>

#include <cmath>

#include "pdapprox/approximation.hpp"
#include "pdapprox/stats.hpp"

using namespace pdapprox;

namespace {

using P2 = std::array<double, 2>;

// Sutherland-Hodgman clip of a convex polygon by a convex CCW polygon.
std::vector<P2> clip(std::vector<P2> poly, const std::vector<P2>& by) {
  for (std::size_t e = 0; e < by.size() && !poly.empty(); ++e) {
    const P2 a = by[e], b = by[(e + 1) % by.size()];
    auto side = [&](const P2& p) {
      return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    };
    std::vector<P2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const P2 p = poly[i], q = poly[(i + 1) % poly.size()];
      const double sp = side(p), sq = side(q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double u = sp / (sp - sq);
        out.push_back({p[0] + u * (q[0] - p[0]), p[1] + u * (q[1] - p[1])});
      }
    }
    poly = out;
  }
  return poly;
}

double area(const std::vector<P2>& p) {
  double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    s += p[i][0] * p[(i + 1) % p.size()][1] - p[i][1] * p[(i + 1) % p.size()][0];
  return 0.5 * std::abs(s);
}

struct Sampled {
  Triangulation<2> tri;
  ApproximationResult ap;
  Window<2> w;
};

Sampled run(const TargetSet& a, double t, std::uint64_t seed) {
  const Window<2> w = padded_window<2>(a, t, 1e-6);
  const auto sample = sample_poisson<2>(w, t, seed);
  Sampled r{triangulate<2>(sample), {}, w};
  r.ap = build_approximation<2>(r.tri, a, w);
  return r;
}

}  // namespace

TEST(BuildApproximation, FarAwayTargetSelectsNothing) {
  std::vector<Vec<2>> p{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.4, 0.6}};
  const auto tri = triangulate<2>(std::span<const Vec<2>>(p));
  Window<2> w;
  w.lower = {-10, -10};
  w.upper = {10, 10};
  const auto r = build_approximation<2>(tri, TargetSet::ball({8, 8}, 0.5), w);
  EXPECT_TRUE(r.selected.empty());
  EXPECT_EQ(r.volume, 0.0);
}

TEST(BuildApproximation, TargetCoveringEverythingGivesHullVolume) {
  std::vector<Vec<2>> p{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0.4, 0.6}, {0.7, 0.2}};
  const auto tri = triangulate<2>(std::span<const Vec<2>>(p));
  Window<2> w;
  w.lower = {-10, -10};
  w.upper = {10, 10};
  const auto r = build_approximation<2>(tri, TargetSet::box({-5, -5}, {5, 5}), w);
  EXPECT_EQ(r.selected.size(), tri.size());
  EXPECT_EQ(r.leakage, 0u);
  EXPECT_NEAR(r.volume, 1.0, 1e-15);
}

TEST(BuildApproximation, WindowMustContainTarget) {
  std::vector<Vec<2>> p{{0, 0}, {1, 0}, {0, 1}};
  const auto tri = triangulate<2>(std::span<const Vec<2>>(p));
  Window<2> w;
  w.upper = {1, 1};
  EXPECT_THROW(build_approximation<2>(tri, TargetSet::ball({0, 0}, 2), w),
               std::invalid_argument);
}

TEST(BuildApproximation, LeakageFlagsCellsNearTheWindowEdge) {
  std::vector<Vec<2>> p{{0, 0}, {1, 0}, {0, 1}};
  const auto tri = triangulate<2>(std::span<const Vec<2>>(p));
  Window<2> w;
  w.upper = {1, 1};
  const auto r = build_approximation<2>(tri, TargetSet::box({0, 0}, {1, 1}), w);
  ASSERT_EQ(r.selected.size(), 1u);
  EXPECT_EQ(r.leakage, 1u);
}

TEST(BuildApproximation, MeanVolumeIsUnbiasedAtSmallScale) {
  const auto disk = TargetSet::ball({0, 0}, 1.0);
  RunningStats s;
  for (std::uint64_t r = 0; r < 300; ++r) s.add(run(disk, 200, split_seed(3, r)).ap.volume);
  EXPECT_NEAR(s.mean(), M_PI, 3.5 * s.stderr_mean());
}

TEST(SymdiffVolume, SelectedCellIsTheTarget) {
  // A = one Delaunay cell, selected by construction: symmetric difference 0.
  std::vector<Vec<2>> p{{0, 0}, {1, 0}, {0.5, 0.9}};
  const auto tri = triangulate<2>(std::span<const Vec<2>>(p));
  const auto a = TargetSet::polygon({{0, 0}, {1, 0}, {0.5, 0.9}});
  ApproximationResult ap;
  ap.selected = {0};
  ap.volume = tri.simplex(0).volume;
  const auto e = symdiff_volume<2>(tri, ap, a, SymdiffOptions{}, 1);
  EXPECT_NEAR(e.value, 0.0, 1e-3);
  EXPECT_EQ(e.outside, 0.0);
}

TEST(SymdiffVolume, CellsDeepInsideHaveNoOutsidePart) {
  std::vector<Vec<2>> p{{-0.1, -0.1}, {0.1, -0.1}, {0, 0.1}};
  const auto tri = triangulate<2>(std::span<const Vec<2>>(p));
  ApproximationResult ap;
  ap.selected = {0};
  const auto e = symdiff_volume<2>(tri, ap, TargetSet::ball({0, 0}, 5), SymdiffOptions{}, 2);
  EXPECT_EQ(e.outside, 0.0);
  EXPECT_EQ(e.outside_stderr, 0.0);
}

TEST(SymdiffVolume, MatchesExactPolygonClipping) {
  const std::vector<P2> verts{{0, 0}, {2, 0}, {2.5, 1}, {1, 2}, {-0.5, 1}};
  const auto a = TargetSet::polygon(verts);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Sampled r = run(a, 300, split_seed(9, seed));
    double inter = 0.0;
    for (std::size_t c : r.ap.selected) {
      const auto& v = r.tri.simplex(c).vertices;
      inter += area(clip({{v[0][0], v[0][1]}, {v[1][0], v[1][1]}, {v[2][0], v[2][1]}}, verts));
    }
    const double exact_out = r.ap.volume - inter;
    const double exact_in = a.volume() - inter;
    SymdiffOptions opt;
    opt.samples_per_cell = 256;
    opt.inside_samples = 1 << 18;
    const auto e = symdiff_volume<2>(r.tri, r.ap, a, opt, seed);
    EXPECT_NEAR(e.outside, exact_out, 4 * e.outside_stderr + 1e-12) << seed;
    EXPECT_NEAR(e.inside, exact_in, 4 * e.inside_stderr + 1e-12) << seed;
    EXPECT_NEAR(e.value, exact_out + exact_in, 4 * e.stderr_ + 1e-12) << seed;
    // Volume identity: lambda(A_eta) - lambda(A) = outside - inside.
    EXPECT_NEAR(r.ap.volume - a.volume(), exact_out - exact_in, 1e-12);
  }
}

TEST(SymdiffVolume, InsideAndOutsideBalanceInMean) {
  const auto disk = TargetSet::ball({0, 0}, 1.0);
  RunningStats diff;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Sampled r = run(disk, 300, split_seed(12, s));
    SymdiffOptions opt;
    opt.inside_samples = 1 << 14;
    const auto e = symdiff_volume<2>(r.tri, r.ap, disk, opt, s);
    diff.add(e.outside - e.inside);
  }
  EXPECT_LT(std::abs(diff.mean()), 3.5 * diff.stderr_mean());
}

TEST(SymdiffVolume, RejectsZeroSamples) {
  std::vector<Vec<2>> p{{0, 0}, {1, 0}, {0, 1}};
  const auto tri = triangulate<2>(std::span<const Vec<2>>(p));
  SymdiffOptions bad;
  bad.samples_per_cell = 0;
  EXPECT_THROW(symdiff_volume<2>(tri, {}, TargetSet::ball({0, 0}, 1), bad, 1),
               std::invalid_argument);
}

TEST(SymdiffVolume, WorksIn3D) {
  const auto ball = TargetSet::ball({0, 0, 0}, 1.0);
  const Window<3> w = padded_window<3>(ball, 200, 1e-6);
  const auto tri = triangulate<3>(sample_poisson<3>(w, 200, 4));
  const auto ap = build_approximation<3>(tri, ball, w);
  SymdiffOptions opt;
  opt.inside_samples = 1 << 14;
  const auto e = symdiff_volume<3>(tri, ap, ball, opt, 5);
  EXPECT_GT(e.value, 0.0);
  EXPECT_NEAR(ap.volume - ball.volume(), e.outside - e.inside,
              4 * e.stderr_ + 1e-12);
}
