#include "pdapprox/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pdapprox/constants.hpp"

namespace pdapprox {

template <int D>
double Window<D>::volume() const {
  double v = 1.0;
  for (int i = 0; i < D; ++i) v *= upper[i] - lower[i];
  return v;
}

template <int D>
bool Window<D>::contains(const Vec<D>& p) const {
  for (int i = 0; i < D; ++i)
    if (p[i] < lower[i] || p[i] > upper[i]) return false;
  return true;
}

template <int D>
double Window<D>::distance_to_boundary(const Vec<D>& p) const {
  double d = INFINITY;
  for (int i = 0; i < D; ++i) d = std::min({d, p[i] - lower[i], upper[i] - p[i]});
  return d;
}

template <int D>
void validate(const Window<D>& w) {
  for (int i = 0; i < D; ++i)
    if (!(w.upper[i] > w.lower[i]))
      throw std::invalid_argument("window: upper must exceed lower componentwise");
  if (!(w.margin >= 0.0)) throw std::invalid_argument("window: negative margin");
}

namespace {

template <int D>
Vec<D> uniform_in_box(const Vec<D>& lo, const Vec<D>& hi, CounterRng& rng) {
  Vec<D> p;
  for (int i = 0; i < D; ++i) p[i] = rng.uniform(lo[i], hi[i]);
  return p;
}

std::uint64_t poisson_count(double mean, CounterRng& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

}  // namespace

template <int D>
PointSample<D> sample_poisson(const Window<D>& window, double intensity,
                              std::uint64_t seed) {
  validate(window);
  if (!(intensity > 0.0)) throw std::invalid_argument("sample_poisson: t must be > 0");
  // Separate streams for the count and the positions so that the positions
  // of the first k points do not depend on how the count was drawn.
  CounterRng count_rng(split_seed(seed, 0));
  CounterRng pos_rng(split_seed(seed, 1));
  PointSample<D> s;
  s.intensity = intensity;
  s.seed = seed;
  s.window = window;
  const auto n = poisson_count(intensity * window.volume(), count_rng);
  s.points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i)
    s.points.push_back(uniform_in_box<D>(window.lower, window.upper, pos_rng));
  return s;
}

template <int D>
PointSample<D> extend_sample(const PointSample<D>& sample,
                             const Window<D>& outer, std::uint64_t seed) {
  validate(outer);
  const Window<D>& inner = sample.window;
  for (int i = 0; i < D; ++i)
    if (outer.lower[i] > inner.lower[i] || outer.upper[i] < inner.upper[i])
      throw std::invalid_argument("extend_sample: outer window must contain the sample window");
  CounterRng count_rng(split_seed(seed, 0));
  CounterRng pos_rng(split_seed(seed, 1));
  PointSample<D> s = sample;
  s.window = outer;
  const auto n = poisson_count(sample.intensity * (outer.volume() - inner.volume()),
                               count_rng);
  for (std::uint64_t k = 0; k < n;) {
    const auto p = uniform_in_box<D>(outer.lower, outer.upper, pos_rng);
    if (inner.contains(p)) continue;
    s.points.push_back(p);
    ++k;
  }
  return s;
}

double padding_margin(const TargetSet& target, double intensity, double tail_mass) {
  return padding_margin(target.bbox_lower(), target.bbox_upper(), intensity, tail_mass);
}

double padding_margin(const std::vector<double>& lo, const std::vector<double>& hi,
                      double intensity, double tail_mass) {
  if (!(intensity > 0.0)) throw std::invalid_argument("padded_window: t must be > 0");
  if (!(tail_mass > 0.0 && tail_mass < 1.0))
    throw std::invalid_argument("padded_window: tail mass must lie in (0, 1)");
  if (lo.size() != hi.size() || lo.empty())
    throw std::invalid_argument("padded_window: bad bounding box");
  const int d = int(lo.size());
  for (int i = 0; i < d; ++i)
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw std::invalid_argument("padded_window: unbounded target");
  const double kd = kappa(d);
  // log of the left-hand side; decreasing for m beyond its (small) maximiser.
  auto log_lhs = [&](double m) {
    double lv = std::log(intensity);
    for (int i = 0; i < d; ++i) lv += std::log(hi[i] - lo[i] + 2.0 * m);
    return -intensity * kd * std::pow(m / 4.0, d) + lv;
  };
  const double target_log = std::log(tail_mass);
  // log_lhs rises then falls (from -inf when the box is flat). Find a point
  // past the maximiser that satisfies the bound, then step back into the
  // violating region and bisect the single crossing in between.
  const double scale = std::pow(intensity * kd, -1.0 / d);
  double high = scale;
  while (log_lhs(high) > target_log || log_lhs(2.0 * high) >= log_lhs(high)) high *= 2.0;
  double low = high;
  while (log_lhs(low) <= target_log) {
    low *= 0.5;
    if (low < 1e-12 * scale) return 0.0;
  }
  for (int it = 0; it < 200 && high - low > 1e-13 * high; ++it) {
    const double mid = 0.5 * (low + high);
    (log_lhs(mid) > target_log ? low : high) = mid;
  }
  return high;
}

template <int D>
Window<D> padded_window(const TargetSet& target, double intensity,
                        double tail_mass) {
  if (target.dimension() != D) throw DimensionError("padded_window: dimension mismatch");
  const double m = padding_margin(target, intensity, tail_mass);
  const auto lo = target.bbox_lower();
  const auto hi = target.bbox_upper();
  Window<D> w;
  for (int i = 0; i < D; ++i) {
    w.lower[i] = lo[i] - m;
    w.upper[i] = hi[i] + m;
  }
  w.margin = m;
  return w;
}

template <int D>
Window<D> inflate(const Window<D>& w, double extra) {
  Window<D> out = w;
  for (int i = 0; i < D; ++i) {
    out.lower[i] -= extra;
    out.upper[i] += extra;
  }
  out.margin += extra;
  return out;
}

#define PDAPPROX_INSTANTIATE(D)                                                 \
  template struct Window<D>;                                                    \
  template void validate<D>(const Window<D>&);                                  \
  template PointSample<D> sample_poisson<D>(const Window<D>&, double,           \
                                            std::uint64_t);                     \
  template PointSample<D> extend_sample<D>(const PointSample<D>&,               \
                                           const Window<D>&, std::uint64_t);    \
  template Window<D> padded_window<D>(const TargetSet&, double, double);        \
  template Window<D> inflate<D>(const Window<D>&, double);

PDAPPROX_INSTANTIATE(2)
PDAPPROX_INSTANTIATE(3)
PDAPPROX_INSTANTIATE(4)

}  // namespace pdapprox
