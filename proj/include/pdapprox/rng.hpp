#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "pdapprox/vec.hpp"

namespace pdapprox {

/// SplitMix64 output function: a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Seed of replication `index` under `base`. Injective in `index` for a fixed
/// base: the map index -> base + golden*(index+1) is injective mod 2^64
/// (golden is odd) and mix64 is a bijection.
constexpr std::uint64_t split_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base + kGolden * (index + 1));
}

/// Counter-based generator: the n-th output is mix64(seed + golden * n), so a
/// stream is fully determined by its seed and can be positioned anywhere.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return mix64(key_ + kGolden * ++counter_); }

  void discard(std::uint64_t n) { counter_ += n; }
  std::uint64_t position() const { return counter_; }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in the open interval (0, 1).
  double uniform_open() {
    return (double((*this)() >> 12) + 0.5) * 0x1.0p-52;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; one variate per call keeps the stream position simple.
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform point on the unit sphere S^{D-1} via a normalised Gaussian vector.
template <int D>
Vec<D> uniform_on_sphere(CounterRng& rng) {
  for (;;) {
    Vec<D> v;
    for (int i = 0; i < D; ++i) v[i] = rng.normal();
    const double n = norm<D>(v);
    if (n > 1e-300) return (1.0 / n) * v;
  }
}

/// Uniform point in the simplex with the given vertices (sorted-spacings
/// construction of a flat Dirichlet weight vector).
template <int D>
Vec<D> uniform_in_simplex(const std::array<Vec<D>, D + 1>& v, CounterRng& rng) {
  std::array<double, D + 1> w;
  double total = 0.0;
  for (int i = 0; i <= D; ++i) {
    w[i] = -std::log(rng.uniform_open());
    total += w[i];
  }
  Vec<D> x{};
  for (int i = 0; i <= D; ++i) x = x + (w[i] / total) * v[i];
  return x;
}

}  // namespace pdapprox
