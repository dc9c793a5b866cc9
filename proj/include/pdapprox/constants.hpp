#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "pdapprox/vec.hpp"

namespace pdapprox {

/// Volume of the unit ball in R^d, pi^{d/2} / Gamma(d/2 + 1). Throws for d < 1.
double kappa(int d);
/// Surface area of the unit sphere S^{d-1}, d * kappa(d).
double omega(int d);

/// pi^{n/2} / Gamma(n/2 + 1) for any real n with n/2 + 1 not a pole; used for
/// the index arithmetic in the simplex-moment closed form (kappa_0 = 1, ...).
double unit_ball_volume(double n);

/// S(d,d,k): integral of lambda_d([u_0,...,u_d])^k over (S^{d-1})^{d+1} with
/// respect to the unnormalised spherical measure.
double simplex_moment(int d, int k);

struct CdBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// Upper bound relaxed with Gamma(d+1+1/d) <= e Gamma(1/d) (d-1)!.
  double upper_relaxed = 0.0;
};

CdBounds c_d_bounds(int d);

/// Exact symmetric-difference constant of the Poisson-Voronoi approximation.
double c_d_voronoi(int d);

/// Prefactor 2/(d(d+1)) kappa_{d-1} kappa_d^{-d-1-1/d} Gamma(d+1+1/d) that
/// turns the spherical integral I_d into c_d.
double c_d_prefactor(int d);

struct McEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

/// Monte Carlo estimate of c_d. I_d = omega_d^{d+1} E[1(x e_1 in [U_0..U_d])
/// lambda_d([U_0..U_d]) x^d], U_i uniform on the sphere, x uniform on [0,1].
/// Samples are processed in fixed blocks with split seeds, so the result is
/// independent of `workers`.
McEstimate estimate_c_d(int d, std::uint64_t samples, std::uint64_t seed,
                        int workers = 1);

/// Monte Carlo estimate of S(d,d,k) by uniform sphere sampling.
McEstimate estimate_simplex_moment(int d, int k, std::uint64_t samples,
                                   std::uint64_t seed, int workers = 1);

/// Test function for the Blaschke-Petkantschin identities. `f` receives the
/// point tuple. The Monte Carlo proposals assume that f vanishes whenever the
/// circumradius exceeds `radius_bound` or the circumcenter lies farther than
/// `center_bound` from the origin, and that |f| is dominated by the standard
/// Gaussian window prod exp(-|x_i|^2/2).
template <int D>
struct BpTestFunction {
  std::function<double(std::span<const Vec<D>>)> f;
  double radius_bound = 1.0;
  double center_bound = 1.0;
};

/// Shipped fixture: prod exp(-|x_i|^2/2) * 1(circumradius <= 1)
/// * 1(|circumcenter| <= 1). With `with_origin`, the circumsphere is the one
/// through the origin and the d given points.
template <int D>
BpTestFunction<D> gaussian_window_fixture(bool with_origin = false);

struct BpCheck {
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;
  double rhs_stderr = 0.0;
  double relative_error = 0.0;
  /// Standard error of the relative error (delta method).
  double relative_error_stderr = 0.0;
};

/// Both sides of the (d+1)-point transformation
///   int f dx_0..dx_d = d! int_c int_r int_u f(c + r u_i) r^{d^2-1}
///                      lambda_d([u_0..u_d]) du dr dc.
template <int D>
BpCheck bp_identity_check(const BpTestFunction<D>& f, std::uint64_t samples,
                          std::uint64_t seed);

/// Both sides of the d-point transformation where the origin fixes the sphere:
///   int f dx_1..dx_d = d! int_r int_u int_{u_i} f(r u + r u_i) r^{d^2-1}
///                      lambda_d([u_1..u_d, -u]) du_i du dr.
template <int D>
BpCheck bp_origin_identity_check(const BpTestFunction<D>& f,
                                 std::uint64_t samples, std::uint64_t seed);

}  // namespace pdapprox
