#include "pdapprox/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pdapprox {

template <int N>
bool solve_linear(std::array<std::array<double, N>, N> a,
                  std::array<double, N>& rhs) {
  for (int col = 0; col < N; ++col) {
    int pivot = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) return false;
    std::swap(a[pivot], a[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (int r = col + 1; r < N; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < N; ++c) a[r][c] -= f * a[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = N - 1; r >= 0; --r) {
    double s = rhs[r];
    for (int c = r + 1; c < N; ++c) s -= a[r][c] * rhs[c];
    rhs[r] = s / a[r][r];
  }
  for (int i = 0; i < N; ++i)
    if (!std::isfinite(rhs[i])) return false;
  return true;
}

namespace {

constexpr double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

template <int D>
std::array<const Vec<D>*, D + 1> pointers(const std::array<Vec<D>, D + 1>& v) {
  std::array<const Vec<D>*, D + 1> p;
  for (int i = 0; i <= D; ++i) p[i] = &v[i];
  return p;
}

// Vertices of a regular m-simplex in R^m with unit circumradius, centred at
// the origin. Returned as m+1 rows of length m.
std::vector<std::vector<double>> unit_regular_simplex(int m) {
  if (m == 0) return {std::vector<double>{}};
  std::vector<std::vector<double>> out;
  std::vector<double> apex(m, 0.0);
  apex[0] = 1.0;
  out.push_back(apex);
  const double shift = -1.0 / m;
  const double scale = std::sqrt(1.0 - 1.0 / (double(m) * m));
  for (const auto& lower : unit_regular_simplex(m - 1)) {
    std::vector<double> v(m, 0.0);
    v[0] = shift;
    for (int i = 0; i < m - 1; ++i) v[i + 1] = scale * lower[i];
    out.push_back(v);
  }
  return out;
}

}  // namespace

template <int D>
double simplex_volume(const std::array<Vec<D>, D + 1>& v) {
  const auto ptr = pointers<D>(v);
  if (orient<D>(ptr.data()) == 0) return 0.0;
  detail::Mat<D> m;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) m[i][j] = v[i + 1][j] - v[0][j];
  double det = 0.0;
  double perm = 0.0;
  detail::det_perm<D>(m, det, perm);
  return std::abs(det) / factorial(D);
}

template <int D>
Ball<D> circumball(const std::array<Vec<D>, D + 1>& v) {
  const auto ptr = pointers<D>(v);
  if (orient<D>(ptr.data()) == 0)
    throw DegenerateError("circumball: vertices are affinely dependent");
  std::array<std::array<double, D>, D> a;
  std::array<double, D> rhs;
  for (int i = 0; i < D; ++i) {
    const Vec<D> e = v[i + 1] - v[0];
    for (int j = 0; j < D; ++j) a[i][j] = 2.0 * e[j];
    rhs[i] = norm2<D>(e);
  }
  if (!solve_linear<D>(a, rhs))
    throw DegenerateError("circumball: singular system");
  Ball<D> b;
  for (int j = 0; j < D; ++j) b.center[j] = v[0][j] + rhs[j];
  double r = 0.0;
  for (int i = 0; i <= D; ++i) r += distance<D>(b.center, v[i]);
  b.radius = r / (D + 1);
  return b;
}

template <int D>
Simplex<D> make_simplex(const std::array<Vec<D>, D + 1>& v) {
  Simplex<D> s;
  s.vertices = v;
  const Ball<D> b = circumball<D>(v);
  s.circumcenter = b.center;
  s.circumradius = b.radius;
  s.volume = simplex_volume<D>(v);
  return s;
}

template <int D>
Side in_circumball(const Simplex<D>& s, const Vec<D>& p) {
  const auto ptr = pointers<D>(s.vertices);
  const int o = orient<D>(ptr.data());
  const int sign = o * insphere<D>(ptr.data(), p);
  if (sign > 0) return Side::inside;
  if (sign < 0) return Side::outside;
  return Side::on;
}

template <int D>
std::array<double, D + 1> barycentric(const std::array<Vec<D>, D + 1>& v,
                                      const Vec<D>& p) {
  std::array<std::array<double, D>, D> a;
  std::array<double, D> rhs;
  for (int i = 0; i < D; ++i) {
    for (int j = 0; j < D; ++j) a[i][j] = v[j + 1][i] - v[0][i];
    rhs[i] = p[i] - v[0][i];
  }
  if (!solve_linear<D>(a, rhs))
    throw DegenerateError("barycentric: degenerate simplex");
  std::array<double, D + 1> lambda;
  double rest = 1.0;
  for (int j = 0; j < D; ++j) {
    lambda[j + 1] = rhs[j];
    rest -= rhs[j];
  }
  lambda[0] = rest;
  return lambda;
}

template <int D>
bool point_in_simplex(const Simplex<D>& s, const Vec<D>& p, double eps) {
  if (s.volume <= 0.0)
    throw DegenerateError("point_in_simplex: degenerate simplex");
  const auto lambda = barycentric<D>(s.vertices, p);
  return std::all_of(lambda.begin(), lambda.end(),
                     [eps](double l) { return l >= -eps; });
}

template <int D>
Simplex<D> regular_simplex(const Vec<D>& center, double inradius, Vec<D> axis) {
  if (!(inradius > 0.0))
    throw std::invalid_argument("regular_simplex: inradius must be positive");
  const double len = norm<D>(axis);
  if (!(len > 0.0) || !std::isfinite(len))
    throw std::invalid_argument("regular_simplex: zero axis direction");
  axis = (1.0 / len) * axis;

  // Orthonormal basis {axis, b_1, ..., b_{D-1}} by Gram-Schmidt on e_i.
  std::array<Vec<D>, D> basis{};
  basis[0] = axis;
  int filled = 1;
  for (int k = 0; k < D && filled < D; ++k) {
    Vec<D> e{};
    e[k] = 1.0;
    for (int b = 0; b < filled; ++b) e = e - dot<D>(e, basis[b]) * basis[b];
    const double n = norm<D>(e);
    if (n < 1e-8) continue;
    basis[filled++] = (1.0 / n) * e;
  }

  const double circum = D * inradius;
  const double ring = inradius * std::sqrt(double(D) * D - 1.0);
  const auto lower = unit_regular_simplex(D - 1);

  std::array<Vec<D>, D + 1> v;
  v[0] = center + circum * axis;
  for (int i = 0; i < D; ++i) {
    Vec<D> x = center + (-inradius) * axis;
    for (int b = 1; b < D; ++b) x = x + (ring * lower[i][b - 1]) * basis[b];
    v[i + 1] = x;
  }
  Simplex<D> s = make_simplex<D>(v);
  // The construction fixes the centre and radius; keep them exact.
  s.circumcenter = center;
  s.circumradius = circum;
  return s;
}

namespace {

template <int D>
std::array<Vec<D>, D + 1> to_fixed(const std::vector<std::vector<double>>& rows) {
  std::array<Vec<D>, D + 1> v;
  for (int i = 0; i <= D; ++i)
    for (int j = 0; j < D; ++j) v[i][j] = rows[i][j];
  return v;
}

int check_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DimensionError("expected d+1 vertices, got none");
  const std::size_t d = rows.front().size();
  for (const auto& r : rows)
    if (r.size() != d)
      throw DimensionError("vertices have mismatched dimensions");
  if (rows.size() != d + 1)
    throw DimensionError("expected " + std::to_string(d + 1) +
                         " vertices in dimension " + std::to_string(d));
  if (d < 2 || d > 4)
    throw DimensionError("supported dimensions are 2, 3 and 4");
  return static_cast<int>(d);
}

}  // namespace

double simplex_volume_dyn(const std::vector<std::vector<double>>& vertices) {
  switch (check_rows(vertices)) {
    case 2: return simplex_volume<2>(to_fixed<2>(vertices));
    case 3: return simplex_volume<3>(to_fixed<3>(vertices));
    default: return simplex_volume<4>(to_fixed<4>(vertices));
  }
}

std::pair<std::vector<double>, double> circumball_dyn(
    const std::vector<std::vector<double>>& vertices) {
  auto unpack = [](const auto& b) {
    return std::pair<std::vector<double>, double>{
        std::vector<double>(b.center.begin(), b.center.end()), b.radius};
  };
  switch (check_rows(vertices)) {
    case 2: return unpack(circumball<2>(to_fixed<2>(vertices)));
    case 3: return unpack(circumball<3>(to_fixed<3>(vertices)));
    default: return unpack(circumball<4>(to_fixed<4>(vertices)));
  }
}

template bool solve_linear<1>(std::array<std::array<double, 1>, 1>,
                              std::array<double, 1>&);
template bool solve_linear<2>(std::array<std::array<double, 2>, 2>,
                              std::array<double, 2>&);
template bool solve_linear<3>(std::array<std::array<double, 3>, 3>,
                              std::array<double, 3>&);
template bool solve_linear<4>(std::array<std::array<double, 4>, 4>,
                              std::array<double, 4>&);
template bool solve_linear<5>(std::array<std::array<double, 5>, 5>,
                              std::array<double, 5>&);

#define PDAPPROX_INSTANTIATE_GEOMETRY(D)                                      \
  template double simplex_volume<D>(const std::array<Vec<D>, D + 1>&);       \
  template Ball<D> circumball<D>(const std::array<Vec<D>, D + 1>&);          \
  template Simplex<D> make_simplex<D>(const std::array<Vec<D>, D + 1>&);     \
  template Side in_circumball<D>(const Simplex<D>&, const Vec<D>&);          \
  template std::array<double, D + 1> barycentric<D>(                         \
      const std::array<Vec<D>, D + 1>&, const Vec<D>&);                      \
  template bool point_in_simplex<D>(const Simplex<D>&, const Vec<D>&, double); \
  template Simplex<D> regular_simplex<D>(const Vec<D>&, double, Vec<D>);

PDAPPROX_INSTANTIATE_GEOMETRY(2)
PDAPPROX_INSTANTIATE_GEOMETRY(3)
PDAPPROX_INSTANTIATE_GEOMETRY(4)

}  // namespace pdapprox
