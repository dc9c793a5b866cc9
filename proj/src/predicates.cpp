#include "pdapprox/predicates.hpp"

#include <gmpxx.h>

#include <array>

namespace pdapprox {

PredicateStats& predicate_stats() {
  thread_local PredicateStats stats;
  return stats;
}

namespace detail {
namespace {

template <int N>
using ExactMat = std::array<std::array<mpq_class, N>, N>;

template <int N>
mpq_class exact_det(const ExactMat<N>& m, int row, unsigned cols) {
  if (row == N - 1) return m[row][std::countr_zero(cols)];
  mpq_class det = 0;
  bool negative = false;
  for (unsigned rest = cols; rest != 0; rest &= rest - 1) {
    const int c = std::countr_zero(rest);
    if (sgn(m[row][c]) != 0) {
      mpq_class term = m[row][c] * exact_det<N>(m, row + 1, cols & ~(1u << c));
      if (negative)
        det -= term;
      else
        det += term;
    }
    negative = !negative;
  }
  return det;
}

}  // namespace

template <int D>
int orient_exact(const Vec<D>* const* v) {
  ExactMat<D> m;
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      m[i][j] = mpq_class((*v[i + 1])[j]) - mpq_class((*v[0])[j]);
  return sgn(exact_det<D>(m, 0, (1u << D) - 1u));
}

template <int D>
int insphere_exact(const Vec<D>* const* v, const Vec<D>& p) {
  constexpr int n = D + 1;
  ExactMat<n> m;
  for (int i = 0; i < n; ++i) {
    mpq_class s = 0;
    for (int j = 0; j < D; ++j) {
      m[i][j] = mpq_class((*v[i])[j]) - mpq_class(p[j]);
      s += m[i][j] * m[i][j];
    }
    m[i][D] = s;
  }
  const int sign = sgn(exact_det<n>(m, 0, (1u << n) - 1u));
  return (D % 2 == 0) ? sign : -sign;
}

template int orient_exact<2>(const Vec<2>* const*);
template int orient_exact<3>(const Vec<3>* const*);
template int orient_exact<4>(const Vec<4>* const*);
template int insphere_exact<2>(const Vec<2>* const*, const Vec<2>&);
template int insphere_exact<3>(const Vec<3>* const*, const Vec<3>&);
template int insphere_exact<4>(const Vec<4>* const*, const Vec<4>&);

}  // namespace detail
}  // namespace pdapprox
