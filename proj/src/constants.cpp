#include "pdapprox/constants.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "pdapprox/geometry.hpp"
#include "pdapprox/parallel.hpp"
#include "pdapprox/rng.hpp"
#include "pdapprox/stats.hpp"

namespace pdapprox {

double unit_ball_volume(double n) {
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double kappa(int d) {
  if (d < 1) throw std::invalid_argument("kappa: dimension must be >= 1");
  return unit_ball_volume(d);
}

double omega(int d) {
  if (d < 1) throw std::invalid_argument("omega: dimension must be >= 1");
  return d * unit_ball_volume(d);
}

double simplex_moment(int d, int k) {
  if (d < 1) throw std::invalid_argument("simplex_moment: d must be >= 1");
  if (k < 0) throw std::invalid_argument("simplex_moment: k must be >= 0");
  if (k == 0) return std::pow(omega(d), d + 1);
  // c_{(d+k)d} = (omega_{k+1} ... omega_{d+k}) / (omega_1 ... omega_d)
  double c = 1.0;
  for (int j = 1; j <= d; ++j) c *= omega(k + j) / omega(j);
  double dfact = 1.0;
  for (int j = 2; j <= d; ++j) dfact *= j;
  const double num = std::pow(omega(d + k), d + 1) *
                     unit_ball_volume(double(d) * (d + k - 2) + d - 2);
  const double den = std::pow(dfact, k) *
                     unit_ball_volume(double(d + 1) * (d + k - 2)) * c;
  return num / den;
}

double c_d_prefactor(int d) {
  if (d < 2) throw std::invalid_argument("c_d: dimension must be >= 2");
  const double kd = kappa(d);
  return 2.0 / (double(d) * (d + 1)) * kappa(d - 1) *
         std::pow(kd, -double(d) - 1.0 - 1.0 / d) *
         std::tgamma(d + 1.0 + 1.0 / d);
}

CdBounds c_d_bounds(int d) {
  if (d < 2) throw std::invalid_argument("c_d_bounds: dimension must be >= 2");
  const double kd = kappa(d);
  const double base = 2.0 / (double(d) * d) * kappa(d - 1) *
                      std::pow(kd, -1.0 - 1.0 / d);
  const double dm1_fact = std::tgamma(double(d));
  CdBounds b;
  b.upper = base * std::tgamma(d + 1.0 + 1.0 / d) / dm1_fact;
  const double ratio = simplex_moment(d, 2) / (d * kd * simplex_moment(d, 1));
  b.lower = b.upper * std::pow(ratio, 1.0 / (d - 1));
  b.upper_relaxed = std::exp(1.0) * base * std::tgamma(1.0 / d);
  return b;
}

double c_d_voronoi(int d) {
  if (d < 2) throw std::invalid_argument("c_d_voronoi: dimension must be >= 2");
  return 2.0 / (double(d) * d) * kappa(d - 1) *
         std::pow(kappa(d), -1.0 - 1.0 / d) * std::tgamma(1.0 / d);
}

namespace {

constexpr std::uint64_t kBlock = 1u << 16;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Runs `per_sample(rng)` over `samples` draws in fixed-size blocks; block b
// uses split_seed(seed, b). Returns the merged statistics of the draws.
template <class PerSample>
RunningStats block_mc(std::uint64_t samples, std::uint64_t seed, int workers,
                      PerSample per_sample) {
  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  auto stats = parallel_map<RunningStats>(
      blocks, workers, [&](std::size_t b) {
        CounterRng rng(split_seed(seed, b));
        const std::uint64_t n =
            std::min<std::uint64_t>(kBlock, samples - b * kBlock);
        RunningStats s;
        for (std::uint64_t i = 0; i < n; ++i) s.add(per_sample(rng));
        return s;
      });
  RunningStats total;
  for (const auto& s : stats) total.merge(s);
  return total;
}

template <int D>
std::array<Vec<D>, D + 1> sphere_tuple(CounterRng& rng) {
  std::array<Vec<D>, D + 1> u;
  for (auto& x : u) x = uniform_on_sphere<D>(rng);
  return u;
}

template <int D>
McEstimate estimate_c_d_fixed(std::uint64_t samples, std::uint64_t seed,
                              int workers) {
  const double weight = std::pow(omega(D), D + 1);
  const auto stats = block_mc(samples, seed, workers, [&](CounterRng& rng) {
    const auto u = sphere_tuple<D>(rng);
    const double x = rng.uniform();
    const double vol = simplex_volume<D>(u);
    if (vol <= 0.0) return 0.0;
    Vec<D> p{};
    p[0] = x;
    const auto lambda = barycentric<D>(u, p);
    for (double l : lambda)
      if (l < 0.0) return 0.0;
    return weight * vol * std::pow(x, D);
  });
  const double pre = c_d_prefactor(D);
  return {pre * stats.mean(), pre * stats.stderr_mean(), stats.count()};
}

template <int D>
McEstimate estimate_moment_fixed(int k, std::uint64_t samples,
                                 std::uint64_t seed, int workers) {
  const double weight = std::pow(omega(D), D + 1);
  const auto stats = block_mc(samples, seed, workers, [&](CounterRng& rng) {
    return weight * std::pow(simplex_volume<D>(sphere_tuple<D>(rng)), k);
  });
  return {stats.mean(), stats.stderr_mean(), stats.count()};
}

template <int D>
Vec<D> uniform_in_ball(CounterRng& rng, double radius) {
  const Vec<D> dir = uniform_on_sphere<D>(rng);
  return (radius * std::pow(rng.uniform(), 1.0 / D)) * dir;
}

// Importance weight of n i.i.d. standard Gaussian points in R^D.
template <int D>
double gaussian_inverse_density(std::span<const Vec<D>> x) {
  double s = 0.0;
  for (const auto& p : x) s += norm2<D>(p);
  return std::pow(2.0 * M_PI, 0.5 * D * double(x.size())) * std::exp(0.5 * s);
}

template <int D>
Vec<D> standard_gaussian(CounterRng& rng) {
  Vec<D> v;
  for (auto& c : v) c = rng.normal();
  return v;
}

BpCheck combine(const RunningStats& l, const RunningStats& r) {
  BpCheck c;
  c.lhs = l.mean();
  c.lhs_stderr = l.stderr_mean();
  c.rhs = r.mean();
  c.rhs_stderr = r.stderr_mean();
  if (c.lhs != 0.0) {
    c.relative_error = std::abs(c.lhs - c.rhs) / std::abs(c.lhs);
    const double a = c.rhs_stderr / c.lhs;
    const double b = c.rhs * c.lhs_stderr / (c.lhs * c.lhs);
    c.relative_error_stderr = std::sqrt(a * a + b * b);
  } else {
    c.relative_error = c.rhs == 0.0 ? 0.0 : INFINITY;
  }
  return c;
}

}  // namespace

McEstimate estimate_c_d(int d, std::uint64_t samples, std::uint64_t seed,
                        int workers) {
  if (samples == 0) throw std::invalid_argument("estimate_c_d: samples must be > 0");
  switch (d) {
    case 2: return estimate_c_d_fixed<2>(samples, seed, workers);
    case 3: return estimate_c_d_fixed<3>(samples, seed, workers);
    case 4: return estimate_c_d_fixed<4>(samples, seed, workers);
    default:
      throw std::invalid_argument("estimate_c_d: supported dimensions are 2-4");
  }
}

McEstimate estimate_simplex_moment(int d, int k, std::uint64_t samples,
                                   std::uint64_t seed, int workers) {
  if (samples == 0) throw std::invalid_argument("samples must be > 0");
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  switch (d) {
    case 2: return estimate_moment_fixed<2>(k, samples, seed, workers);
    case 3: return estimate_moment_fixed<3>(k, samples, seed, workers);
    case 4: return estimate_moment_fixed<4>(k, samples, seed, workers);
    default:
      throw std::invalid_argument("supported dimensions are 2-4");
  }
}

template <int D>
BpTestFunction<D> gaussian_window_fixture(bool with_origin) {
  BpTestFunction<D> t;
  t.radius_bound = 1.0;
  t.center_bound = 1.0;
  t.f = [with_origin](std::span<const Vec<D>> x) -> double {
    std::array<Vec<D>, D + 1> v;
    if (with_origin) {
      if (x.size() != std::size_t(D)) return 0.0;
      v[0] = Vec<D>{};
      for (int i = 0; i < D; ++i) v[i + 1] = x[i];
    } else {
      if (x.size() != std::size_t(D + 1)) return 0.0;
      for (int i = 0; i <= D; ++i) v[i] = x[i];
    }
    Ball<D> b;
    try {
      b = circumball<D>(v);
    } catch (const DegenerateError&) {
      return 0.0;
    }
    if (b.radius > 1.0 || norm<D>(b.center) > 1.0) return 0.0;
    double s = 0.0;
    for (const auto& p : x) s += norm2<D>(p);
    return std::exp(-0.5 * s);
  };
  return t;
}

template <int D>
BpCheck bp_identity_check(const BpTestFunction<D>& f, std::uint64_t samples,
                          std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("bp check: samples must be > 0");
  const RunningStats lhs =
      block_mc(samples, split_seed(seed, 0), 1, [&](CounterRng& rng) {
        std::array<Vec<D>, D + 1> x;
        for (auto& p : x) p = standard_gaussian<D>(rng);
        const double v = f.f(std::span<const Vec<D>>(x));
        if (v == 0.0) return 0.0;
        return v * gaussian_inverse_density<D>(std::span<const Vec<D>>(x));
      });
  const double c_max = f.center_bound;
  const double r_max = f.radius_bound;
  const double dd = double(D) * D;
  const double constant = factorial(D) * std::pow(omega(D), D + 1) *
                          kappa(D) * std::pow(c_max, D) *
                          std::pow(r_max, dd) / dd;
  const RunningStats rhs =
      block_mc(samples, split_seed(seed, 1), 1, [&](CounterRng& rng) {
        const Vec<D> c = uniform_in_ball<D>(rng, c_max);
        const double r = r_max * std::pow(rng.uniform_open(), 1.0 / dd);
        const auto u = sphere_tuple<D>(rng);
        std::array<Vec<D>, D + 1> x;
        for (int i = 0; i <= D; ++i) x[i] = c + r * u[i];
        const double v = f.f(std::span<const Vec<D>>(x));
        if (v == 0.0) return 0.0;
        return constant * v * simplex_volume<D>(u);
      });
  return combine(lhs, rhs);
}

template <int D>
BpCheck bp_origin_identity_check(const BpTestFunction<D>& f,
                                 std::uint64_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("bp check: samples must be > 0");
  const RunningStats lhs =
      block_mc(samples, split_seed(seed, 0), 1, [&](CounterRng& rng) {
        std::array<Vec<D>, D> x;
        for (auto& p : x) p = standard_gaussian<D>(rng);
        const double v = f.f(std::span<const Vec<D>>(x));
        if (v == 0.0) return 0.0;
        return v * gaussian_inverse_density<D>(std::span<const Vec<D>>(x));
      });
  const double r_max = f.radius_bound;
  const double dd = double(D) * D;
  const double constant = factorial(D) * std::pow(omega(D), D + 1) *
                          std::pow(r_max, dd) / dd;
  const RunningStats rhs =
      block_mc(samples, split_seed(seed, 1), 1, [&](CounterRng& rng) {
        const double r = r_max * std::pow(rng.uniform_open(), 1.0 / dd);
        const Vec<D> u = uniform_on_sphere<D>(rng);
        std::array<Vec<D>, D + 1> simplex;
        std::array<Vec<D>, D> x;
        for (int i = 0; i < D; ++i) {
          simplex[i] = uniform_on_sphere<D>(rng);
          x[i] = r * u + r * simplex[i];
        }
        simplex[D] = (-1.0) * u;
        const double v = f.f(std::span<const Vec<D>>(x));
        if (v == 0.0) return 0.0;
        return constant * v * simplex_volume<D>(simplex);
      });
  return combine(lhs, rhs);
}

#define PDAPPROX_INSTANTIATE_BP(D)                                            \
  template BpTestFunction<D> gaussian_window_fixture<D>(bool);               \
  template BpCheck bp_identity_check<D>(const BpTestFunction<D>&,            \
                                        std::uint64_t, std::uint64_t);       \
  template BpCheck bp_origin_identity_check<D>(const BpTestFunction<D>&,     \
                                               std::uint64_t, std::uint64_t);

PDAPPROX_INSTANTIATE_BP(2)
PDAPPROX_INSTANTIATE_BP(3)
PDAPPROX_INSTANTIATE_BP(4)

}  // namespace pdapprox
