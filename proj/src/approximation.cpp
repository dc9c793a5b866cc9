#include "pdapprox/approximation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pdapprox/rng.hpp"
#include "pdapprox/stats.hpp"

namespace pdapprox {

template <int D>
ApproximationResult build_approximation(const Triangulation<D>& tri,
                                        const TargetSet& a,
                                        const Window<D>& window) {
  if (a.dimension() != D) throw DimensionError("build_approximation: dimension mismatch");
  const auto lo = a.bbox_lower();
  const auto hi = a.bbox_upper();
  for (int i = 0; i < D; ++i)
    if (lo[i] < window.lower[i] || hi[i] > window.upper[i])
      throw std::invalid_argument("build_approximation: window does not contain A");
  ApproximationResult r;
  CompensatedSum vol;
  for (std::size_t c = 0; c < tri.size(); ++c) {
    const Simplex<D>& s = tri.simplex(c);
    if (!contains(a, as_span<D>(s.circumcenter))) continue;
    r.selected.push_back(c);
    vol.add(s.volume);
    if (!window.contains(s.circumcenter) ||
        window.distance_to_boundary(s.circumcenter) < s.circumradius)
      ++r.leakage;
  }
  r.volume = vol.value();
  return r;
}

template <int D>
SymdiffEstimate symdiff_volume(const Triangulation<D>& tri,
                               const ApproximationResult& result,
                               const TargetSet& a, const SymdiffOptions& options,
                               std::uint64_t seed) {
  if (a.dimension() != D) throw DimensionError("symdiff_volume: dimension mismatch");
  if (options.samples_per_cell <= 0 || options.inside_samples <= 0)
    throw std::invalid_argument("symdiff_volume: zero samples requested");
  SymdiffEstimate est;

  // Outside part, one independent stream per selected cell.
  CompensatedSum out_sum;
  CompensatedSum out_var;
  const int m = options.samples_per_cell;
  for (std::size_t c : result.selected) {
    const Simplex<D>& s = tri.simplex(c);
    if (distance_to_boundary(a, as_span<D>(s.circumcenter)) <= -s.circumradius)
      continue;  // circumball, hence the cell, inside A
    CounterRng rng(split_seed(seed, 2 * std::uint64_t(c)));
    int outside = 0;
    for (int k = 0; k < m; ++k) {
      const Vec<D> p = uniform_in_simplex<D>(s.vertices, rng);
      if (!contains(a, as_span<D>(p))) ++outside;
    }
    const double f = double(outside) / m;
    out_sum.add(s.volume * f);
    if (m > 1) out_var.add(s.volume * s.volume * f * (1.0 - f) / (m - 1));
  }
  est.outside = out_sum.value();
  est.outside_stderr = std::sqrt(out_var.value());

  // Inside part, stratified over the bounding box of A.
  std::vector<char> selected(tri.size(), 0);
  for (std::size_t c : result.selected) selected[c] = 1;
  const auto lo = a.bbox_lower();
  const auto hi = a.bbox_upper();
  const int per_side = std::max(
      1, int(std::floor(std::pow(options.inside_samples / 4.0, 1.0 / D) + 1e-9)));
  std::uint64_t strata = 1;
  for (int i = 0; i < D; ++i) strata *= std::uint64_t(per_side);
  const int per_stratum = std::max<int>(2, int(options.inside_samples / strata));
  Vec<D> width;
  double stratum_volume = 1.0;
  double half_diag = 0.0;
  for (int i = 0; i < D; ++i) {
    width[i] = (hi[i] - lo[i]) / per_side;
    stratum_volume *= width[i];
    half_diag += 0.25 * width[i] * width[i];
  }
  half_diag = std::sqrt(half_diag);

  CompensatedSum in_sum;
  CompensatedSum in_var;
  CounterRng rng(split_seed(seed, 1));
  std::size_t hint = 0;
  std::array<int, D> idx{};
  for (std::uint64_t s = 0; s < strata; ++s) {
    Vec<D> corner, center;
    for (int i = 0; i < D; ++i) {
      corner[i] = lo[i] + idx[i] * width[i];
      center[i] = corner[i] + 0.5 * width[i];
    }
    // Advance the multi-index (row-major, keeps consecutive strata adjacent).
    for (int i = 0; i < D; ++i) {
      if (++idx[i] < per_side) break;
      idx[i] = 0;
    }
    if (distance_to_boundary(a, as_span<D>(center)) > half_diag) continue;
    int hits = 0;
    for (int k = 0; k < per_stratum; ++k) {
      Vec<D> p;
      for (int i = 0; i < D; ++i) p[i] = corner[i] + width[i] * rng.uniform();
      if (!contains(a, as_span<D>(p))) continue;
      const auto cell = tri.locate(p, hint);
      if (cell) hint = *cell;
      if (!cell || !selected[*cell]) ++hits;
    }
    if (hits == 0) continue;
    const double f = double(hits) / per_stratum;
    in_sum.add(stratum_volume * f);
    in_var.add(stratum_volume * stratum_volume * f * (1.0 - f) / (per_stratum - 1));
  }
  est.inside = in_sum.value();
  est.inside_stderr = std::sqrt(in_var.value());
  est.value = est.outside + est.inside;
  est.stderr_ = std::hypot(est.outside_stderr, est.inside_stderr);
  return est;
}

#define PDAPPROX_INSTANTIATE(D)                                                 \
  template ApproximationResult build_approximation<D>(                          \
      const Triangulation<D>&, const TargetSet&, const Window<D>&);             \
  template SymdiffEstimate symdiff_volume<D>(const Triangulation<D>&,           \
                                             const ApproximationResult&,        \
                                             const TargetSet&,                  \
                                             const SymdiffOptions&, std::uint64_t);

PDAPPROX_INSTANTIATE(2)
PDAPPROX_INSTANTIATE(3)
PDAPPROX_INSTANTIATE(4)

}  // namespace pdapprox
