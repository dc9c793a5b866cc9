#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace pdapprox {

/// Streaming mean/variance (Welford) with an associative merge.
class RunningStats {
 public:
  void add(double x) {
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / double(n_);
    m2_ += delta * (x - mean_);
  }

  void merge(const RunningStats& o) {
    if (o.n_ == 0) return;
    if (n_ == 0) {
      *this = o;
      return;
    }
    const double total = double(n_ + o.n_);
    const double delta = o.mean_ - mean_;
    mean_ += delta * double(o.n_) / total;
    m2_ += o.m2_ + delta * delta * double(n_) * double(o.n_) / total;
    n_ += o.n_;
  }

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; zero for fewer than two samples.
  double variance() const { return n_ > 1 ? m2_ / double(n_ - 1) : 0.0; }
  double stddev() const { return std::sqrt(variance()); }
  double stderr_mean() const {
    return n_ > 1 ? std::sqrt(variance() / double(n_)) : 0.0;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Neumaier-compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

double sum_compensated(std::span<const double> xs);
double mean(std::span<const double> xs);
/// Unbiased sample variance.
double sample_variance(std::span<const double> xs);

/// Standard normal CDF.
double normal_cdf(double x);

/// Kolmogorov distance sup_x |F_n(x) - Phi(x)| of the raw sample to the
/// standard normal (no standardisation).
double ks_distance_to_normal(std::vector<double> sample);

/// Kolmogorov distance after standardising by the sample mean and standard
/// deviation. Throws std::domain_error for zero sample variance.
double ks_distance_standardized(std::span<const double> sample);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double intercept_se = 0.0;
  double slope_se = 0.0;
  double residual_variance = 0.0;
};

/// Ordinary (weights empty) or weighted least squares for y = a + b x.
/// Weighted fits treat weights as inverse variances; standard errors then
/// come from the weights alone.
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights = {});

}  // namespace pdapprox
