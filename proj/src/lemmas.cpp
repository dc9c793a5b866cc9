#include "pdapprox/lemmas.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

#include "pdapprox/constants.hpp"
#include "pdapprox/rng.hpp"

namespace pdapprox {

namespace {

// Determinant of a small square matrix given as rows (n <= 4).
double small_det(std::vector<std::vector<double>> m) {
  const std::size_t n = m.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

template <int D>
Vec<D> uniform_in_ball(CounterRng& rng) {
  const Vec<D> u = uniform_on_sphere<D>(rng);
  return std::pow(rng.uniform(), 1.0 / D) * u;
}

}  // namespace

template <int D>
std::array<Vec<D>, 2> spheres_through(const std::array<Vec<D>, D>& pts, double radius) {
  // Edge vectors e_j = p_j - p_0 span the hyperplane through the points.
  std::array<Vec<D>, D - 1> e;
  for (int j = 0; j < D - 1; ++j) e[j] = pts[j + 1] - pts[0];

  // Circumcenter inside the hyperplane: m = p_0 + sum lambda_j e_j with
  // 2 e_i . (m - p_0) = |e_i|^2.
  std::array<std::array<double, D - 1>, D - 1> g;
  std::array<double, D - 1> lambda;
  for (int i = 0; i < D - 1; ++i) {
    for (int j = 0; j < D - 1; ++j) g[i][j] = 2.0 * dot<D>(e[i], e[j]);
    lambda[i] = norm2<D>(e[i]);
  }
  if (!solve_linear<D - 1>(g, lambda))
    throw DegenerateError("spheres_through: affinely dependent points");
  Vec<D> m = pts[0];
  for (int j = 0; j < D - 1; ++j) m = m + lambda[j] * e[j];
  const double rho2 = norm2<D>(m - pts[0]);

  // Unit normal as the generalised cross product of the edge vectors.
  Vec<D> n;
  for (int k = 0; k < D; ++k) {
    std::vector<std::vector<double>> minor(D - 1, std::vector<double>(D - 1));
    for (int r = 0; r < D - 1; ++r)
      for (int c = 0, cc = 0; c < D; ++c)
        if (c != k) minor[r][cc++] = e[r][c];
    n[k] = ((k % 2) ? -1.0 : 1.0) * small_det(minor);
  }
  const double len = norm<D>(n);
  if (!(len > 0.0)) throw DegenerateError("spheres_through: affinely dependent points");
  n = (1.0 / len) * n;

  if (radius * radius < rho2)
    throw DegenerateError("spheres_through: radius below the points' circumradius");
  const double h = std::sqrt(radius * radius - rho2);
  return {m + h * n, m + (-h) * n};
}

template <int D>
SimplexLemmaReport check_simplex_lemma(double inradius, double delta, int trials,
                                       int radii_per_subset, std::uint64_t seed) {
  if (!(inradius > 0.0) || !(delta > 0.0) || trials <= 0 || radii_per_subset <= 0)
    throw std::invalid_argument("check_simplex_lemma: invalid parameters");
  const double s = inradius;
  SimplexLemmaReport rep;
  rep.trials = trials;
  rep.min_sphere_distance = INFINITY;
  for (int trial = 0; trial < trials; ++trial) {
    CounterRng rng(split_seed(seed, std::uint64_t(trial)));
    // Random placement so the check is not tied to one coordinate frame.
    Vec<D> c;
    for (int i = 0; i < D; ++i) c[i] = rng.uniform(-10.0, 10.0);
    const Simplex<D> t = regular_simplex<D>(c, s, uniform_on_sphere<D>(rng));

    std::array<Vec<D>, D + 1> v;
    for (int i = 0; i <= D; ++i)
      v[i] = t.vertices[i] + (delta * s) * uniform_in_ball<D>(rng);

    const Ball<D> b = circumball<D>(v);
    const double offset = distance<D>(b.center, c) / s;
    rep.max_center_offset = std::max(rep.max_center_offset, offset);
    if (offset >= 0.2) ++rep.center_violations;

    for (int skip = 0; skip <= D; ++skip) {
      std::array<Vec<D>, D> face;
      for (int i = 0, k = 0; i <= D; ++i)
        if (i != skip) face[k++] = v[i];
      for (int r = 0; r < radii_per_subset; ++r) {
        const double radius = 3.0 * D * D * s * std::pow(1e3, rng.uniform());
        for (const Vec<D>& center : spheres_through<D>(face, radius)) {
          ++rep.spheres_tested;
          const double gap = std::abs(distance<D>(center, c) - radius) / s;
          rep.min_sphere_distance = std::min(rep.min_sphere_distance, gap);
          if (gap <= 0.8) ++rep.sphere_violations;
        }
      }
    }
  }
  return rep;
}

double rx_tail_bound(int d, int k, double s, double t) {
  if (d < 1 || k < 0 || !(s >= 0.0) || !(t > 0.0))
    throw std::invalid_argument("rx_tail_bound: invalid parameters");
  // Substitute r = u (t kappa_d)^{-1/d}.
  const double scale = t * kappa(d);
  const double power = double(d) * d + k - 1;
  const double u0 = s * std::pow(scale, 1.0 / d);
  auto f = [&](double u) { return std::exp(-std::pow(u, d)) * std::pow(u, power); };
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, u0, std::numeric_limits<double>::infinity(), 15, 1e-13);
  return simplex_moment(d, 1) * std::pow(t, d) *
         std::pow(scale, -(power + 1.0) / d) * integral;
}

#define PDAPPROX_INSTANTIATE(D)                                                  \
  template std::array<Vec<D>, 2> spheres_through<D>(const std::array<Vec<D>, D>&, \
                                                    double);                     \
  template SimplexLemmaReport check_simplex_lemma<D>(double, double, int, int,   \
                                                     std::uint64_t);

PDAPPROX_INSTANTIATE(2)
PDAPPROX_INSTANTIATE(3)
PDAPPROX_INSTANTIATE(4)

}  // namespace pdapprox
