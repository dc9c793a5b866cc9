#pragma once

#include <array>
#include <optional>
#include <vector>

#include "pdapprox/predicates.hpp"
#include "pdapprox/vec.hpp"

namespace pdapprox {

template <int D>
struct Ball {
  Vec<D> center{};
  double radius = 0.0;
};

/// A d-simplex with its circumball and volume precomputed. Construct with
/// make_simplex(); the fields are consistent by construction.
template <int D>
struct Simplex {
  std::array<Vec<D>, D + 1> vertices{};
  Vec<D> circumcenter{};
  double circumradius = 0.0;
  double volume = 0.0;
};

enum class Side { inside, on, outside };

/// Tolerance on barycentric coordinates used by point_in_simplex.
inline constexpr double kBarycentricEps = 1e-12;

/// Lebesgue measure of the convex hull of d+1 points, |det| / d!.
/// Exactly zero when the points are affinely dependent.
template <int D>
double simplex_volume(const std::array<Vec<D>, D + 1>& v);

/// Circumscribed ball. Throws DegenerateError on affinely dependent input.
template <int D>
Ball<D> circumball(const std::array<Vec<D>, D + 1>& v);

template <int D>
Simplex<D> make_simplex(const std::array<Vec<D>, D + 1>& v);

/// Exact classification of p against the circumsphere of s.
template <int D>
Side in_circumball(const Simplex<D>& s, const Vec<D>& p);

/// Barycentric coordinates of p with respect to the vertices of s.
template <int D>
std::array<double, D + 1> barycentric(const std::array<Vec<D>, D + 1>& v,
                                      const Vec<D>& p);

/// True iff every barycentric coordinate of p is >= -eps.
template <int D>
bool point_in_simplex(const Simplex<D>& s, const Vec<D>& p,
                      double eps = kBarycentricEps);

/// Regular simplex with the given center and inradius. Vertex 0 sits at
/// center + d * inradius * axis; the other d vertices span the hyperplane
/// orthogonal to axis at signed distance -inradius from the center.
template <int D>
Simplex<D> regular_simplex(const Vec<D>& center, double inradius, Vec<D> axis);

/// Solves a small dense linear system in place with partial pivoting.
/// Returns false when the matrix is numerically singular.
template <int N>
bool solve_linear(std::array<std::array<double, N>, N> a,
                  std::array<double, N>& rhs);

/// Runtime-dimension entry points (used by the Python bindings). Points are
/// given as rows; all rows must share the same length d and there must be
/// d + 1 of them.
double simplex_volume_dyn(const std::vector<std::vector<double>>& vertices);
std::pair<std::vector<double>, double> circumball_dyn(
    const std::vector<std::vector<double>>& vertices);

}  // namespace pdapprox
