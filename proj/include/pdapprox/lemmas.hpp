#pragma once

#include <cstdint>
#include <vector>

#include "pdapprox/geometry.hpp"
#include "pdapprox/vec.hpp"

namespace pdapprox {

struct SimplexLemmaReport {
  int trials = 0;
  int spheres_tested = 0;
  /// Perturbed circumcenters outside B(c, s/5).
  int center_violations = 0;
  /// Spheres through d perturbed vertices (radius >= 3 d^2 s) meeting B(c, 4s/5).
  int sphere_violations = 0;
  /// Largest |c' - c| / s seen.
  double max_center_offset = 0.0;
  /// Smallest distance from c to a tested sphere, divided by s.
  double min_sphere_distance = 0.0;
};

/// Perturbation check for a regular simplex T of inradius s centred at c:
/// each vertex is moved uniformly within B(a_i, delta s). For every trial the
/// perturbed circumcenter must stay in B(c, s/5), and every sphere of radius
/// R >= 3 d^2 s passing through exactly d of the perturbed vertices (both
/// admissible centers, `radii_per_subset` random radii with log-uniform
/// R / (3 d^2 s) in [1, 1e3]) must avoid B(c, 4s/5).
template <int D>
SimplexLemmaReport check_simplex_lemma(double inradius, double delta, int trials,
                                       int radii_per_subset, std::uint64_t seed);

/// Centers of the two spheres of radius R through the d points `pts` in R^d
/// (the points span a hyperplane). Throws DegenerateError when the points are
/// affinely dependent or R is smaller than their circumradius in the plane.
template <int D>
std::array<Vec<D>, 2> spheres_through(const std::array<Vec<D>, D>& pts, double radius);

/// Upper bound S(d,d,1) t^d int_s^inf exp(-t kappa_d r^d) r^{d^2+k-1} dr for
/// E r^k 1(r >= s), evaluated by adaptive Gauss-Kronrod quadrature.
double rx_tail_bound(int d, int k, double s, double t);

}  // namespace pdapprox
