#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "pdapprox/geometry.hpp"
#include "pdapprox/point_process.hpp"

namespace pdapprox {

namespace detail {
template <int D>
class DelaunayBuilder;
}

/// Delaunay triangulation of a finite point set. Cells are finite, positively
/// oriented simplices; neighbors[c][i] is the cell across the facet opposite
/// vertex i, or -1 on the convex hull. Immutable once built.
template <int D>
class Triangulation {
 public:
  using Cell = std::array<int, D + 1>;

  const std::vector<Vec<D>>& points() const { return points_; }
  std::size_t size() const { return cells_.size(); }

  const Cell& vertices(std::size_t c) const { return cells_[c]; }
  const Cell& neighbors(std::size_t c) const { return neighbors_[c]; }
  const Simplex<D>& simplex(std::size_t c) const { return simplices_[c]; }
  const std::vector<Simplex<D>>& simplices() const { return simplices_; }

  /// Number of input points skipped because they duplicated an earlier one.
  std::size_t duplicates() const { return duplicates_; }

  /// Sum of cell volumes (compensated).
  double total_volume() const;

  /// Circumcenters, in cell order.
  std::vector<Vec<D>> cell_centers() const;

  /// A cell containing p (closed cells, ties to any incident cell), or
  /// nullopt outside the convex hull. Visibility walk from `hint` with a
  /// brute-force scan as fallback.
  std::optional<std::size_t> locate(const Vec<D>& p, std::size_t hint = 0) const;

  /// Brute-force counterpart of locate, for testing.
  std::optional<std::size_t> locate_brute_force(const Vec<D>& p) const;

  /// One cell per line: vertex indices, circumcenter, circumradius; tab-separated.
  void dump(std::ostream& os) const;

 private:
  friend class detail::DelaunayBuilder<D>;

  std::vector<Vec<D>> points_;
  std::vector<Cell> cells_;
  std::vector<Cell> neighbors_;
  std::vector<Simplex<D>> simplices_;
  std::size_t duplicates_ = 0;
};

/// Incremental Bowyer-Watson construction. Throws std::invalid_argument for
/// fewer than d+1 points and DegenerateError when all points are affinely
/// dependent. Exact duplicates are skipped.
template <int D>
Triangulation<D> triangulate(std::span<const Vec<D>> points);

template <int D>
Triangulation<D> triangulate(const PointSample<D>& sample) {
  return triangulate<D>(std::span<const Vec<D>>(sample.points));
}

/// Exhaustive empty-circumball audit: returns the number of (cell, point)
/// pairs with the point strictly inside the cell's circumball.
template <int D>
std::size_t count_delaunay_violations(const Triangulation<D>& tri);

/// Structural audit: neighbor symmetry, shared facets, positive orientation.
/// Returns the number of defects found.
template <int D>
std::size_t count_adjacency_defects(const Triangulation<D>& tri);

}  // namespace pdapprox
