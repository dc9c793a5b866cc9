#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "pdapprox/constants.hpp"
#include "pdapprox/lemmas.hpp"

using namespace pdapprox;

namespace {

// Closed form of the tail bound through the upper incomplete gamma function:
// S t^d (1/d) (t kappa)^{-(d^2+k)/d} Gamma((d^2+k)/d, t kappa s^d).
double rx_closed_form(int d, int k, double s, double t) {
  const double a = double(d * d + k) / d;
  const double tk = t * kappa(d);
  return simplex_moment(d, 1) * std::pow(t, d) / d * std::pow(tk, -a) *
         boost::math::tgamma(a, tk * std::pow(s, d));
}

}  // namespace

TEST(SimplexLemma, NoViolationsIn2D) {
  const auto r = check_simplex_lemma<2>(1.0, 0.02, 1000, 4, 1);
  EXPECT_EQ(r.center_violations, 0);
  EXPECT_EQ(r.sphere_violations, 0);
  EXPECT_EQ(r.spheres_tested, 1000 * 3 * 4 * 2);
  EXPECT_LT(r.max_center_offset, 0.2);
  EXPECT_GT(r.min_sphere_distance, 0.8);
}

TEST(SimplexLemma, NoViolationsIn3D) {
  const auto r = check_simplex_lemma<3>(0.5, 0.02, 1000, 4, 2);
  EXPECT_EQ(r.center_violations, 0);
  EXPECT_EQ(r.sphere_violations, 0);
}

TEST(SimplexLemma, LargePerturbationsAreDetected) {
  // delta = 0.5 is far outside the lemma's regime; the checker must notice.
  const auto r = check_simplex_lemma<2>(1.0, 0.5, 300, 4, 3);
  EXPECT_GT(r.center_violations + r.sphere_violations, 0);
}

TEST(SimplexLemma, InvalidParametersThrow) {
  EXPECT_THROW(check_simplex_lemma<2>(0.0, 0.02, 10, 1, 1), std::invalid_argument);
  EXPECT_THROW(check_simplex_lemma<2>(1.0, 0.02, 0, 1, 1), std::invalid_argument);
}

TEST(SpheresThrough, PassThroughThePoints) {
  const std::array<Vec<3>, 3> pts{Vec<3>{1, 0, 0}, Vec<3>{0, 1, 0}, Vec<3>{0, 0, 1}};
  for (const auto& c : spheres_through<3>(pts, 5.0))
    for (const auto& p : pts) EXPECT_NEAR(distance<3>(c, p), 5.0, 1e-12);
  const std::array<Vec<2>, 2> seg{Vec<2>{-1, 0}, Vec<2>{1, 0}};
  const auto cs = spheres_through<2>(seg, std::sqrt(2.0));
  EXPECT_NEAR(std::abs(cs[0][1]), 1.0, 1e-12);
  EXPECT_NEAR(cs[0][1], -cs[1][1], 1e-12);
  EXPECT_THROW(spheres_through<2>(seg, 0.5), DegenerateError);
}

TEST(RxTailBound, MatchesIncompleteGammaClosedForm) {
  for (int d : {2, 3, 4})
    for (int k : {0, 1, 2, 4})
      for (double t : {1.0, 10.0, 100.0})
        for (double ss : {0.0, 0.5, 1.0, 2.0}) {
          const double s = ss * std::pow(t * kappa(d), -1.0 / d);
          const double exact = rx_closed_form(d, k, s, t);
          EXPECT_NEAR(rx_tail_bound(d, k, s, t) / exact, 1.0, 1e-10)
              << d << ' ' << k << ' ' << t << ' ' << ss;
        }
  EXPECT_NEAR(rx_tail_bound(2, 2, 0.3, 10), 0.17683, 1e-5);
}

TEST(RxTailBound, ZeroThresholdZerothMomentIsAtLeastOne) {
  for (int d : {2, 3, 4}) EXPECT_GE(rx_tail_bound(d, 0, 0.0, 10.0), 1.0);
  EXPECT_NEAR(rx_tail_bound(2, 0, 0.0, 1.0), 6.0, 1e-10);
}

TEST(RxTailBound, DecreasingInThreshold) {
  double prev = INFINITY;
  for (double s = 0; s < 3; s += 0.1) {
    const double b = rx_tail_bound(2, 1, s, 5.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
}
