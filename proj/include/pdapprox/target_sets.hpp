#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pdapprox {

struct BallShape {
  std::vector<double> center;
  double radius = 1.0;
};

/// Axis-aligned box [lower, upper].
struct BoxShape {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Axis-aligned ellipse in the plane.
struct EllipseShape {
  std::array<double, 2> center{};
  std::array<double, 2> semi_axes{1.0, 1.0};
};

/// Convex polygon, stored counter-clockwise.
struct PolygonShape {
  std::vector<std::array<double, 2>> vertices;
};

using Shape = std::variant<BallShape, BoxShape, EllipseShape, PolygonShape>;

/// A compact convex target set with the quantities the approximation theory
/// refers to. Immutable once built; factory functions validate the input and
/// throw std::invalid_argument on bad parameters.
class TargetSet {
 public:
  static TargetSet ball(std::vector<double> center, double radius);
  static TargetSet box(std::vector<double> lower, std::vector<double> upper);
  static TargetSet ellipse(std::array<double, 2> center,
                           std::array<double, 2> semi_axes);
  static TargetSet polygon(std::vector<std::array<double, 2>> vertices);

  int dimension() const { return dim_; }
  const Shape& shape() const { return shape_; }
  std::string kind() const;

  double volume() const { return volume_; }
  double perimeter() const { return perimeter_; }
  double inradius() const { return inradius_; }
  /// Intrinsic volumes V_0, ..., V_d.
  const std::vector<double>& intrinsic_volumes() const { return intrinsic_; }

  std::vector<double> bbox_lower() const;
  std::vector<double> bbox_upper() const;

  /// The dilate f*A about the origin.
  TargetSet scaled(double f) const;

 private:
  explicit TargetSet(Shape s);
  void finish();

  Shape shape_;
  int dim_ = 0;
  double volume_ = 0.0;
  double perimeter_ = 0.0;
  double inradius_ = 0.0;
  std::vector<double> intrinsic_;
};

/// Closed-set membership.
bool contains(const TargetSet& a, std::span<const double> p);

/// Signed distance to the boundary: negative inside, positive outside.
double distance_to_boundary(const TargetSet& a, std::span<const double> p);

/// Parallel volume lambda_d(A + eps B_d) from the Steiner polynomial.
/// Throws std::invalid_argument for eps < 0.
double steiner_volume(const TargetSet& a, double eps);

struct CovariogramValue {
  double value = 0.0;
  double stderr_ = 0.0;
};

/// Set covariogram g_A(x) = lambda_d((A + x) cap A).
class Covariogram {
 public:
  enum class Method { analytic, monte_carlo };

  explicit Covariogram(TargetSet set, Method method = Method::analytic,
                       std::size_t samples = 0, std::uint64_t seed = 0);

  CovariogramValue operator()(std::span<const double> x) const;

  const TargetSet& set() const { return set_; }
  Method method() const { return method_; }

 private:
  TargetSet set_;
  Method method_;
  std::size_t samples_;
  std::uint64_t seed_;
};

/// Analytic covariogram (all catalog kinds have one).
double covariogram(const TargetSet& a, std::span<const double> x);

/// Monte Carlo covariogram with its binomial standard error.
CovariogramValue covariogram_mc(const TargetSet& a, std::span<const double> x,
                                std::size_t samples, std::uint64_t seed);

/// Perimeter recovered from the directional derivatives of the covariogram
/// at the origin, integrated over the sphere and divided by -kappa_{d-1}.
/// Derivatives use Richardson extrapolation over r = 1e-2, 5e-3, 2.5e-3;
/// `directions` controls the sphere quadrature size.
double perimeter_from_covariogram(const TargetSet& a, int directions = 720);

/// Uniform point in A by rejection from the bounding box.
template <class Rng>
std::vector<double> sample_uniform_in(const TargetSet& a, Rng& rng);

}  // namespace pdapprox

#include "pdapprox/rng.hpp"

namespace pdapprox {

template <class Rng>
std::vector<double> sample_uniform_in(const TargetSet& a, Rng& rng) {
  const auto lo = a.bbox_lower();
  const auto hi = a.bbox_upper();
  std::vector<double> p(lo.size());
  for (;;) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
    if (contains(a, p)) return p;
  }
}

}  // namespace pdapprox
