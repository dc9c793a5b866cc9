#pragma once

#include <cstdint>
#include <vector>

#include "pdapprox/rng.hpp"
#include "pdapprox/target_sets.hpp"
#include "pdapprox/vec.hpp"

namespace pdapprox {

/// Axis-aligned sampling window. `margin` records the padding that was added
/// around the target's bounding box (0 for user-specified windows).
template <int D>
struct Window {
  Vec<D> lower{};
  Vec<D> upper{};
  double margin = 0.0;

  double volume() const;
  bool contains(const Vec<D>& p) const;
  /// Smallest distance from p to the window boundary (p assumed inside).
  double distance_to_boundary(const Vec<D>& p) const;
};

template <int D>
struct PointSample {
  std::vector<Vec<D>> points;
  double intensity = 0.0;
  std::uint64_t seed = 0;
  Window<D> window;
};

/// Validates the window invariants; throws std::invalid_argument.
template <int D>
void validate(const Window<D>& w);

/// Stationary Poisson process of intensity t restricted to the window:
/// N ~ Poisson(t vol(W)), then N i.i.d. uniform points. Pure function of
/// (window, t, seed).
template <int D>
PointSample<D> sample_poisson(const Window<D>& window, double intensity,
                              std::uint64_t seed);

/// Enlarges a sample to the bigger window `outer` (which must contain the
/// sample's window) by adding an independent Poisson process on the
/// difference outer \ inner. The result is distributed as a Poisson sample on
/// `outer`; existing points are kept in place.
template <int D>
PointSample<D> extend_sample(const PointSample<D>& sample,
                             const Window<D>& outer, std::uint64_t seed);

/// Margin m solving exp(-t kappa_d (m/4)^d) * t * vol(bbox(A) + m) <= eps,
/// found by bisection on the smallest such m. Throws for t <= 0 or eps
/// outside (0, 1).
double padding_margin(const TargetSet& target, double intensity,
                      double tail_mass);

/// Same margin for an explicit bounding box [lower, upper].
double padding_margin(const std::vector<double>& lower,
                      const std::vector<double>& upper, double intensity,
                      double tail_mass);

/// Bounding box of A inflated by padding_margin.
template <int D>
Window<D> padded_window(const TargetSet& target, double intensity,
                        double tail_mass);

/// The window grown by `extra` on every side.
template <int D>
Window<D> inflate(const Window<D>& w, double extra);

}  // namespace pdapprox
