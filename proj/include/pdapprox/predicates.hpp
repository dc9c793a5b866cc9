#pragma once

// Orientation and in-sphere predicates with a static floating-point filter.
// When the filter cannot certify the sign, the determinant is re-evaluated
// in exact rational arithmetic, so the returned sign is always exact for
// double-precision inputs.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "pdapprox/vec.hpp"

namespace pdapprox {

/// Counters for how often the exact fallback was taken (per thread).
struct PredicateStats {
  std::uint64_t filtered = 0;
  std::uint64_t exact = 0;
};
PredicateStats& predicate_stats();

namespace detail {

template <int N>
using Mat = std::array<std::array<double, N>, N>;

// Laplace expansion that returns the determinant together with the
// permanent of |m|, the latter bounding the rounding error of the former.
template <int N, int K>
inline void det_perm(const Mat<N>& m, unsigned cols, double& det,
                     double& perm) {
  constexpr int row = N - K;
  if constexpr (K == 1) {
    const int c = std::countr_zero(cols);
    det = m[row][c];
    perm = std::abs(det);
  } else {
    det = 0.0;
    perm = 0.0;
    double sign = 1.0;
    for (unsigned rest = cols; rest != 0; rest &= rest - 1) {
      const int c = std::countr_zero(rest);
      double d = 0.0;
      double p = 0.0;
      det_perm<N, K - 1>(m, cols & ~(1u << c), d, p);
      det += sign * m[row][c] * d;
      perm += std::abs(m[row][c]) * p;
      sign = -sign;
    }
  }
}

template <int N>
inline void det_perm(const Mat<N>& m, double& det, double& perm) {
  det_perm<N, N>(m, (1u << N) - 1u, det, perm);
}

inline int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

// Exact fallbacks (GMP rationals); defined in predicates.cpp.
template <int D>
int orient_exact(const Vec<D>* const* v);
template <int D>
int insphere_exact(const Vec<D>* const* v, const Vec<D>& p);

// Forward-error bound for an N x N Laplace determinant whose entries carry a
// relative error of at most entry_ulps units of roundoff.
constexpr double error_factor(int n, int entry_ulps) {
  constexpr double u = std::numeric_limits<double>::epsilon() / 2.0;
  return 2.0 * n * (entry_ulps + n) * u;
}

constexpr double kTinyPermanent = 1e-250;

}  // namespace detail

/// Sign of det[v1 - v0, ..., vD - v0]. Positive for a positively oriented
/// simplex, zero for affinely dependent vertices.
template <int D>
inline int orient(const Vec<D>* const* v) {
  detail::Mat<D> m;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) m[i][j] = (*v[i + 1])[j] - (*v[0])[j];
  double det = 0.0;
  double perm = 0.0;
  detail::det_perm<D>(m, det, perm);
  const double bound = detail::error_factor(D, 1) * perm;
  if (std::abs(det) > bound && perm > detail::kTinyPermanent &&
      std::isfinite(perm)) {
    ++predicate_stats().filtered;
    return detail::sign_of(det);
  }
  ++predicate_stats().exact;
  return detail::orient_exact<D>(v);
}

template <int D>
inline int orient(const std::array<Vec<D>, D + 1>& v) {
  std::array<const Vec<D>*, D + 1> ptr;
  for (int i = 0; i <= D; ++i) ptr[i] = &v[i];
  return orient<D>(ptr.data());
}

/// Sign of the lifted in-sphere determinant, normalised so that for a
/// positively oriented simplex the result is +1 when p lies strictly inside
/// the circumsphere, 0 on it, and -1 outside. For a negatively oriented
/// simplex the sign flips.
template <int D>
inline int insphere(const Vec<D>* const* v, const Vec<D>& p) {
  constexpr int n = D + 1;
  detail::Mat<n> m;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < D; ++j) {
      const double x = (*v[i])[j] - p[j];
      m[i][j] = x;
      s += x * x;
    }
    m[i][D] = s;
  }
  double det = 0.0;
  double perm = 0.0;
  detail::det_perm<n>(m, det, perm);
  const double bound = detail::error_factor(n, D + 3) * perm;
  // The lifted determinant's sign relative to "inside" alternates with D.
  constexpr double parity = (D % 2 == 0) ? 1.0 : -1.0;
  if (std::abs(det) > bound && perm > detail::kTinyPermanent &&
      std::isfinite(perm)) {
    ++predicate_stats().filtered;
    return detail::sign_of(parity * det);
  }
  ++predicate_stats().exact;
  return detail::insphere_exact<D>(v, p);
}

template <int D>
inline int insphere(const std::array<Vec<D>, D + 1>& v, const Vec<D>& p) {
  std::array<const Vec<D>*, D + 1> ptr;
  for (int i = 0; i <= D; ++i) ptr[i] = &v[i];
  return insphere<D>(ptr.data(), p);
}

}  // namespace pdapprox
