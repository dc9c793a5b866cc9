#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace pdapprox {

/// Fixed-dimension point/vector. Dimension is a compile-time constant; the
/// library instantiates D = 2, 3, 4.
template <int D>
using Vec = std::array<double, D>;

template <int D>
using Point = Vec<D>;

/// Raised when an operation receives affinely dependent input it cannot handle.
class DegenerateError : public std::domain_error {
 public:
  explicit DegenerateError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when runtime dimensions disagree.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what)
      : std::invalid_argument(what) {}
};

template <std::size_t N>
constexpr std::array<double, N> operator-(const std::array<double, N>& a,
                                           const std::array<double, N>& b) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator+(const std::array<double, N>& a,
                                           const std::array<double, N>& b) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t N>
constexpr std::array<double, N> operator*(double s, const std::array<double, N>& a) {
  std::array<double, N> r{};
  for (std::size_t i = 0; i < N; ++i) r[i] = s * a[i];
  return r;
}

template <int D>
constexpr double dot(const Vec<D>& a, const Vec<D>& b) {
  double s = 0.0;
  for (int i = 0; i < D; ++i) s += a[i] * b[i];
  return s;
}

template <int D>
constexpr double norm2(const Vec<D>& a) {
  return dot<D>(a, a);
}

template <int D>
inline double norm(const Vec<D>& a) {
  return std::sqrt(norm2<D>(a));
}

template <int D>
inline double distance(const Vec<D>& a, const Vec<D>& b) {
  return norm<D>(a - b);
}

template <int D>
inline std::span<const double> as_span(const Vec<D>& v) {
  return {v.data(), static_cast<std::size_t>(D)};
}

}  // namespace pdapprox
