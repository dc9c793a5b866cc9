#include "pdapprox/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace pdapprox {

double sum_compensated(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return sum_compensated(xs) / double(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  CompensatedSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return s.value() / double(xs.size() - 1);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_distance_to_normal(std::vector<double> sample) {
  if (sample.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = double(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
  }
  return d;
}

double ks_distance_standardized(std::span<const double> sample) {
  const double m = mean(sample);
  const double sd = std::sqrt(sample_variance(sample));
  if (!(sd > 0.0))
    throw std::domain_error("ks: zero sample variance, cannot standardise");
  std::vector<double> z(sample.size());
  std::transform(sample.begin(), sample.end(), z.begin(),
                 [&](double x) { return (x - m) / sd; });
  return ks_distance_to_normal(std::move(z));
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights) {
  const std::size_t n = x.size();
  if (n != y.size() || (!weights.empty() && weights.size() != n))
    throw std::invalid_argument("fit_line: size mismatch");
  if (n < 2) throw std::invalid_argument("fit_line: need at least two points");
  const bool weighted = !weights.empty();
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weighted ? weights[i] : 1.0;
    sw += w;
    sx += w * x[i];
    sy += w * y[i];
  }
  const double mx = sx / sw;
  const double my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weighted ? weights[i] : 1.0;
    sxx += w * (x[i] - mx) * (x[i] - mx);
    sxy += w * (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: degenerate x");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weighted ? weights[i] : 1.0;
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += w * r * r;
  }
  f.residual_variance = n > 2 ? rss / double(n - 2) : 0.0;
  const double scale = weighted ? 1.0 : f.residual_variance;
  f.slope_se = std::sqrt(scale / sxx);
  f.intercept_se = std::sqrt(scale * (1.0 / sw + mx * mx / sxx));
  return f;
}

}  // namespace pdapprox
