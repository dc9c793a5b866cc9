#include <gtest/gtest.h>

#include <cmath>

#include "pdapprox/predicates.hpp"
#include "pdapprox/rng.hpp"

using namespace pdapprox;

TEST(Orient, SignsAndDegeneracy) {
  EXPECT_EQ(orient<2>({Vec<2>{0, 0}, Vec<2>{1, 0}, Vec<2>{0, 1}}), 1);
  EXPECT_EQ(orient<2>({Vec<2>{0, 0}, Vec<2>{0, 1}, Vec<2>{1, 0}}), -1);
  EXPECT_EQ(orient<2>({Vec<2>{0, 0}, Vec<2>{1, 1}, Vec<2>{3, 3}}), 0);
  EXPECT_EQ(orient<3>({Vec<3>{0, 0, 0}, Vec<3>{1, 0, 0}, Vec<3>{0, 1, 0}, Vec<3>{0, 0, 1}}), 1);
}

TEST(Orient, NearlyCollinearNeedsExactArithmetic) {
  // Points on the line y = x perturbed by one ulp: the float filter cannot
  // decide, the exact fallback must.
  const double a = 0.5, b = 12.0, c = 24.0;
  const Vec<2> p{a, a}, q{b, b}, r{c, std::nextafter(c, 100.0)};
  EXPECT_EQ(orient<2>({p, q, r}), 1);
  const Vec<2> s{c, std::nextafter(c, 0.0)};
  EXPECT_EQ(orient<2>({p, q, s}), -1);
  EXPECT_EQ(orient<2>({p, q, Vec<2>{c, c}}), 0);
}

template <int D>
void insphere_centroid_inside(std::uint64_t seed) {
  CounterRng rng(seed);
  for (int k = 0; k < 1000; ++k) {
    std::array<Vec<D>, D + 1> v;
    for (auto& p : v)
      for (auto& x : p) x = rng.uniform(-1, 1);
    const int o = orient<D>(v);
    if (o == 0) continue;
    Vec<D> c{};
    for (const auto& p : v) c = c + (1.0 / (D + 1)) * p;
    EXPECT_EQ(insphere<D>(v, c), o);
    Vec<D> far = v[0];
    far[0] += 1e6;
    EXPECT_EQ(insphere<D>(v, far), -o);
  }
}

TEST(Insphere, ParityCentroidInside2D) { insphere_centroid_inside<2>(1); }
TEST(Insphere, ParityCentroidInside3D) { insphere_centroid_inside<3>(2); }
TEST(Insphere, ParityCentroidInside4D) { insphere_centroid_inside<4>(3); }

TEST(Insphere, CocircularIsZero) {
  const std::array<Vec<2>, 3> v{Vec<2>{1, 0}, Vec<2>{0, 1}, Vec<2>{-1, 0}};
  EXPECT_EQ(insphere<2>(v, Vec<2>{0, -1}), 0);
  const std::array<Vec<3>, 4> w{Vec<3>{1, 0, 0}, Vec<3>{0, 1, 0}, Vec<3>{-1, 0, 0},
                                Vec<3>{0, 0, 1}};
  EXPECT_EQ(insphere<3>(w, Vec<3>{0, -1, 0}), 0);
  EXPECT_EQ(insphere<3>(w, Vec<3>{0, 0, -1}), 0);
}

TEST(Insphere, TinyPerturbationOfCocircularPoint) {
  const std::array<Vec<2>, 3> v{Vec<2>{1, 0}, Vec<2>{0, 1}, Vec<2>{-1, 0}};
  EXPECT_EQ(insphere<2>(v, Vec<2>{0, std::nextafter(-1.0, 0.0)}), 1);
  EXPECT_EQ(insphere<2>(v, Vec<2>{0, std::nextafter(-1.0, -2.0)}), -1);
}
