#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pdapprox/delaunay.hpp"
#include "pdapprox/point_process.hpp"
#include "pdapprox/target_sets.hpp"

namespace pdapprox {

struct SymdiffEstimate {
  double value = 0.0;
  double stderr_ = 0.0;
  /// lambda_d(A_eta \ A) and its standard error.
  double outside = 0.0;
  double outside_stderr = 0.0;
  /// lambda_d(A \ A_eta) and its standard error.
  double inside = 0.0;
  double inside_stderr = 0.0;
};

struct ApproximationResult {
  std::vector<std::size_t> selected;
  /// lambda_d(A_eta): sum of the selected cell volumes.
  double volume = 0.0;
  /// Selected cells whose circumball is not contained in the window.
  std::size_t leakage = 0;
  SymdiffEstimate symdiff;
  double intensity = 0.0;
  std::uint64_t seed = 0;
};

struct SymdiffOptions {
  int samples_per_cell = 64;
  int inside_samples = 1 << 16;
};

/// Selects the cells whose circumcenter lies in A (closed-set convention) and
/// sums their volumes. Throws std::invalid_argument when the window does not
/// contain A's bounding box.
template <int D>
ApproximationResult build_approximation(const Triangulation<D>& tri,
                                        const TargetSet& a,
                                        const Window<D>& window);

/// Monte Carlo estimate of lambda_d(A delta A_eta). Outside part: uniform
/// samples in each selected cell. Inside part: stratified samples over the
/// bounding box of A, located in the triangulation and counted when they fall
/// in A but not in a selected cell. Cells whose circumball lies inside A (or
/// strata lying outside A) are resolved without sampling.
template <int D>
SymdiffEstimate symdiff_volume(const Triangulation<D>& tri,
                               const ApproximationResult& result,
                               const TargetSet& a, const SymdiffOptions& options,
                               std::uint64_t seed);

}  // namespace pdapprox
