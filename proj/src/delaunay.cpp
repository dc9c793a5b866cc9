#include "pdapprox/delaunay.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "pdapprox/stats.hpp"

namespace pdapprox {

namespace {

// Morton key of p quantised on a 2^(64/D) grid over the bounding box.
template <int D>
std::uint64_t morton_key(const Vec<D>& p, const Vec<D>& lo, const Vec<D>& scale) {
  constexpr int kBits = 64 / D;
  constexpr double kCells = double((std::uint64_t(1) << kBits) - 1);
  std::uint64_t key = 0;
  std::array<std::uint64_t, D> q;
  for (int i = 0; i < D; ++i)
    q[i] = std::uint64_t(std::clamp((p[i] - lo[i]) * scale[i], 0.0, 1.0) * kCells);
  for (int b = kBits - 1; b >= 0; --b)
    for (int i = 0; i < D; ++i) key = (key << 1) | ((q[i] >> b) & 1u);
  return key;
}

template <int D>
std::vector<int> spatial_order(const std::vector<Vec<D>>& pts) {
  Vec<D> lo, hi;
  lo.fill(INFINITY);
  hi.fill(-INFINITY);
  for (const auto& p : pts)
    for (int i = 0; i < D; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  Vec<D> scale;
  for (int i = 0; i < D; ++i) scale[i] = hi[i] > lo[i] ? 1.0 / (hi[i] - lo[i]) : 0.0;
  std::vector<std::pair<std::uint64_t, int>> keyed(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k)
    keyed[k] = {morton_key<D>(pts[k], lo, scale), int(k)};
  std::sort(keyed.begin(), keyed.end());
  std::vector<int> order(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) order[k] = keyed[k].second;
  return order;
}

// First d+1 affinely independent points in `order`, found by exact rational
// elimination of the difference vectors.
template <int D>
std::array<int, D + 1> initial_simplex(const std::vector<Vec<D>>& pts,
                                       const std::vector<int>& order) {
  std::array<int, D + 1> chosen{};
  chosen[0] = order[0];
  int found = 1;
  std::vector<std::array<mpq_class, D>> basis;
  std::vector<int> pivots;
  for (std::size_t k = 1; k < order.size() && found <= D; ++k) {
    std::array<mpq_class, D> r;
    for (int i = 0; i < D; ++i)
      r[i] = mpq_class(pts[order[k]][i]) - mpq_class(pts[chosen[0]][i]);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const int j = pivots[b];
      if (sgn(r[j]) == 0) continue;
      const mpq_class f = r[j] / basis[b][j];
      for (int i = 0; i < D; ++i) r[i] -= f * basis[b][i];
    }
    int pivot = -1;
    for (int i = 0; i < D; ++i)
      if (sgn(r[i]) != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    basis.push_back(r);
    pivots.push_back(pivot);
    chosen[found++] = order[k];
  }
  if (found <= D) throw DegenerateError("triangulate: all points are affinely dependent");
  return chosen;
}

}  // namespace

namespace detail {

template <int D>
class DelaunayBuilder {
 public:
  static constexpr int kInf = -1;
  struct Cell {
    std::array<int, D + 1> v;
    std::array<int, D + 1> n;
  };

  explicit DelaunayBuilder(std::span<const Vec<D>> pts) : pts_(pts.begin(), pts.end()) {}

  Triangulation<D> run() {
    if (pts_.size() < std::size_t(D + 1))
      throw std::invalid_argument("triangulate: need at least d+1 points");
    for (const auto& p : pts_)
      for (double x : p)
        if (!std::isfinite(x)) throw std::invalid_argument("triangulate: non-finite coordinate");
    const auto order = spatial_order<D>(pts_);
    const auto first = initial_simplex<D>(pts_, order);
    start(first);
    std::vector<char> used(pts_.size(), 0);
    for (int v : first) used[v] = 1;
    for (int idx : order)
      if (!used[idx]) insert(idx);
    return finish();
  }

 private:
  static int inf_index(const Cell& c) {
    for (int i = 0; i <= D; ++i)
      if (c.v[i] == kInf) return i;
    return -1;
  }

  int new_cell() {
    if (!free_.empty()) {
      const int c = free_.back();
      free_.pop_back();
      alive_[c] = 1;
      return c;
    }
    cells_.emplace_back();
    alive_.push_back(1);
    mark_.push_back(0);
    return int(cells_.size()) - 1;
  }

  std::uint32_t next_random() {
    rng_ ^= rng_ << 13;
    rng_ ^= rng_ >> 17;
    rng_ ^= rng_ << 5;
    return rng_;
  }

  void start(const std::array<int, D + 1>& first) {
    Cell c0;
    c0.v = first;
    if (orient<D>(pointers(c0).data()) < 0) std::swap(c0.v[0], c0.v[1]);
    const int base = new_cell();
    cells_[base] = c0;
    // Infinite cell across facet i of the base: vertex i replaced by the
    // infinite vertex, orientation flipped so that replacing it by a point
    // beyond the facet is positive.
    std::array<int, D + 1> inf_cells;
    for (int i = 0; i <= D; ++i) {
      Cell c;
      c.v = c0.v;
      c.v[i] = kInf;
      const int a = i == 0 ? 1 : 0;
      const int b = i <= 1 ? 2 : 1;
      std::swap(c.v[a], c.v[b]);
      inf_cells[i] = new_cell();
      cells_[inf_cells[i]] = c;
    }
    for (int i = 0; i <= D; ++i) cells_[base].n[i] = inf_cells[i];
    for (int i = 0; i <= D; ++i) {
      Cell& c = cells_[inf_cells[i]];
      for (int j = 0; j <= D; ++j) {
        if (c.v[j] == kInf) {
          c.n[j] = base;
          continue;
        }
        // Facet opposite vertex w = c.v[j] contains the infinite vertex; it
        // is shared with the infinite cell whose missing base vertex is w.
        const int w = c.v[j];
        int k = 0;
        while (c0.v[k] != w) ++k;
        c.n[j] = inf_cells[k];
      }
    }
    last_ = base;
  }

  std::array<const Vec<D>*, D + 1> pointers(const Cell& c) const {
    std::array<const Vec<D>*, D + 1> p;
    for (int i = 0; i <= D; ++i) p[i] = c.v[i] == kInf ? nullptr : &pts_[c.v[i]];
    return p;
  }

  bool in_conflict(int ci, const Vec<D>& p) const {
    const Cell& c = cells_[ci];
    auto ptr = pointers(c);
    const int inf = inf_index(c);
    if (inf < 0) return insphere<D>(ptr.data(), p) > 0;
    ptr[inf] = &p;
    const int o = orient<D>(ptr.data());
    if (o != 0) return o > 0;
    // p on the hull facet's hyperplane: in conflict iff it lies inside the
    // facet's circumball, i.e. strictly inside the finite neighbor's sphere.
    const int f = c.n[inf];
    return insphere<D>(pointers(cells_[f]).data(), p) > 0;
  }

  int brute_force_conflict(const Vec<D>& p) const {
    for (std::size_t c = 0; c < cells_.size(); ++c)
      if (alive_[c] && in_conflict(int(c), p)) return int(c);
    return -1;
  }

  // Remembering stochastic visibility walk; ends in a finite cell whose
  // closure contains p, or in an infinite cell whose hull facet p sees.
  int walk(int c, const Vec<D>& p) {
    int prev = -1;
    const std::size_t cap = 64 + 4 * cells_.size();
    for (std::size_t step = 0; step < cap; ++step) {
      const Cell& cl = cells_[c];
      if (inf_index(cl) >= 0) return c;
      auto ptr = pointers(cl);
      const int offset = int(next_random() % (D + 1));
      int next = -1;
      for (int k = 0; k <= D; ++k) {
        const int i = (offset + k) % (D + 1);
        if (cl.n[i] == prev) continue;
        const Vec<D>* saved = ptr[i];
        ptr[i] = &p;
        const int o = orient<D>(ptr.data());
        ptr[i] = saved;
        if (o < 0) {
          next = cl.n[i];
          break;
        }
      }
      if (next < 0) return c;
      prev = c;
      c = next;
    }
    ++walk_fallbacks_;
    return brute_force_conflict(p);
  }

  void insert(int pi) {
    const Vec<D>& p = pts_[pi];
    const int c = walk(last_, p);
    if (c < 0 || !in_conflict(c, p)) {
      // Only an exact duplicate of a vertex has no conflicting cell.
      ++duplicates_;
      return;
    }
    epoch_ += 2;
    const std::uint64_t conf = epoch_;
    const std::uint64_t nonconf = epoch_ + 1;
    conflict_.clear();
    boundary_.clear();
    conflict_.push_back(c);
    mark_[c] = conf;
    for (std::size_t k = 0; k < conflict_.size(); ++k) {
      const int cc = conflict_[k];
      for (int i = 0; i <= D; ++i) {
        const int nb = cells_[cc].n[i];
        if (mark_[nb] == conf) continue;
        if (mark_[nb] != nonconf) {
          if (in_conflict(nb, p)) {
            mark_[nb] = conf;
            conflict_.push_back(nb);
            continue;
          }
          mark_[nb] = nonconf;
        }
        boundary_.emplace_back(cc, i);
      }
    }

    ridges_.clear();
    int finite_new = -1;
    for (const auto& [cc, i] : boundary_) {
      const int nc = new_cell();
      Cell cell = cells_[cc];
      const int outside = cell.n[i];
      cell.v[i] = pi;
      cell.n.fill(kInf);
      cell.n[i] = outside;
      Cell& o = cells_[outside];
      for (int j = 0; j <= D; ++j) {
        if (std::find(cell.v.begin(), cell.v.end(), o.v[j]) == cell.v.end()) {
          o.n[j] = nc;
          break;
        }
      }
      cells_[nc] = cell;
      if (finite_new < 0 && inf_index(cell) < 0) finite_new = nc;
      for (int j = 0; j <= D; ++j) {
        if (j == i) continue;
        Ridge r;
        int m = 0;
        for (int k = 0; k <= D; ++k)
          if (k != i && k != j) r.key[m++] = cell.v[k];
        std::sort(r.key.begin(), r.key.end());
        r.cell = nc;
        r.facet = j;
        ridges_.push_back(r);
      }
    }
    std::sort(ridges_.begin(), ridges_.end(),
              [](const Ridge& a, const Ridge& b) { return a.key < b.key; });
    for (std::size_t k = 0; k + 1 < ridges_.size(); k += 2) {
      const Ridge& a = ridges_[k];
      const Ridge& b = ridges_[k + 1];
      if (a.key != b.key) throw std::logic_error("triangulate: unmatched cavity ridge");
      cells_[a.cell].n[a.facet] = b.cell;
      cells_[b.cell].n[b.facet] = a.cell;
    }
    for (int cc : conflict_) {
      alive_[cc] = 0;
      mark_[cc] = 0;
      free_.push_back(cc);
    }
    if (finite_new < 0) throw std::logic_error("triangulate: cavity without finite cell");
    last_ = finite_new;
  }

  Triangulation<D> finish() {
    Triangulation<D> out;
    std::vector<int> remap(cells_.size(), -1);
    int count = 0;
    for (std::size_t c = 0; c < cells_.size(); ++c)
      if (alive_[c] && inf_index(cells_[c]) < 0) remap[c] = count++;
    out.cells_.reserve(count);
    out.neighbors_.reserve(count);
    out.simplices_.reserve(count);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      if (remap[c] < 0) continue;
      const Cell& cl = cells_[c];
      typename Triangulation<D>::Cell nb;
      std::array<Vec<D>, D + 1> verts;
      for (int i = 0; i <= D; ++i) {
        nb[i] = remap[cl.n[i]];
        verts[i] = pts_[cl.v[i]];
      }
      out.cells_.push_back(cl.v);
      out.neighbors_.push_back(nb);
      out.simplices_.push_back(make_simplex<D>(verts));
    }
    out.duplicates_ = duplicates_;
    out.points_ = std::move(pts_);
    return out;
  }

  struct Ridge {
    std::array<int, D - 1> key;
    int cell;
    int facet;
  };

  std::vector<Vec<D>> pts_;
  std::vector<Cell> cells_;
  std::vector<char> alive_;
  std::vector<std::uint64_t> mark_;
  std::vector<int> free_;
  std::vector<int> conflict_;
  std::vector<std::pair<int, int>> boundary_;
  std::vector<Ridge> ridges_;
  std::uint64_t epoch_ = 0;
  std::uint32_t rng_ = 0x9e3779b9u;
  int last_ = 0;
  std::size_t duplicates_ = 0;
  std::size_t walk_fallbacks_ = 0;
};

}  // namespace detail

template <int D>
Triangulation<D> triangulate(std::span<const Vec<D>> points) {
  return detail::DelaunayBuilder<D>(points).run();
}

template <int D>
double Triangulation<D>::total_volume() const {
  CompensatedSum s;
  for (const auto& c : simplices_) s.add(c.volume);
  return s.value();
}

template <int D>
std::vector<Vec<D>> Triangulation<D>::cell_centers() const {
  std::vector<Vec<D>> out;
  out.reserve(simplices_.size());
  for (const auto& s : simplices_) out.push_back(s.circumcenter);
  return out;
}

template <int D>
std::optional<std::size_t> Triangulation<D>::locate(const Vec<D>& p,
                                                    std::size_t hint) const {
  if (cells_.empty()) return std::nullopt;
  std::size_t c = hint < cells_.size() ? hint : 0;
  long prev = -1;
  std::uint32_t rng = 0x2545f491u;
  const std::size_t cap = 64 + 4 * cells_.size();
  for (std::size_t step = 0; step < cap; ++step) {
    std::array<const Vec<D>*, D + 1> ptr;
    for (int i = 0; i <= D; ++i) ptr[i] = &points_[cells_[c][i]];
    rng ^= rng << 13;
    rng ^= rng >> 17;
    rng ^= rng << 5;
    const int offset = int(rng % (D + 1));
    long next = -2;
    for (int k = 0; k <= D; ++k) {
      const int i = (offset + k) % (D + 1);
      const int nb = neighbors_[c][i];
      if (nb >= 0 && nb == prev) continue;
      const Vec<D>* saved = ptr[i];
      ptr[i] = &p;
      const int o = orient<D>(ptr.data());
      ptr[i] = saved;
      if (o < 0) {
        next = nb;
        break;
      }
    }
    if (next == -2) return c;
    if (next == -1) return std::nullopt;  // strictly beyond a hull facet
    prev = long(c);
    c = std::size_t(next);
  }
  return locate_brute_force(p);
}

template <int D>
std::optional<std::size_t> Triangulation<D>::locate_brute_force(const Vec<D>& p) const {
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    std::array<const Vec<D>*, D + 1> ptr;
    for (int i = 0; i <= D; ++i) ptr[i] = &points_[cells_[c][i]];
    bool inside = true;
    for (int i = 0; i <= D && inside; ++i) {
      const Vec<D>* saved = ptr[i];
      ptr[i] = &p;
      inside = orient<D>(ptr.data()) >= 0;
      ptr[i] = saved;
    }
    if (inside) return c;
  }
  return std::nullopt;
}

template <int D>
void Triangulation<D>::dump(std::ostream& os) const {
  char buf[64];
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    for (int i = 0; i <= D; ++i) os << cells_[c][i] << '\t';
    for (int i = 0; i < D; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", simplices_[c].circumcenter[i]);
      os << buf << '\t';
    }
    std::snprintf(buf, sizeof buf, "%.17g", simplices_[c].circumradius);
    os << buf << '\n';
  }
}

template <int D>
std::size_t count_delaunay_violations(const Triangulation<D>& tri) {
  const auto& pts = tri.points();
  std::size_t bad = 0;
  for (std::size_t c = 0; c < tri.size(); ++c) {
    std::array<const Vec<D>*, D + 1> ptr;
    for (int i = 0; i <= D; ++i) ptr[i] = &pts[tri.vertices(c)[i]];
    for (const auto& p : pts)
      if (insphere<D>(ptr.data(), p) > 0) ++bad;
  }
  return bad;
}

template <int D>
std::size_t count_adjacency_defects(const Triangulation<D>& tri) {
  const auto& pts = tri.points();
  std::size_t bad = 0;
  for (std::size_t c = 0; c < tri.size(); ++c) {
    const auto& v = tri.vertices(c);
    std::array<const Vec<D>*, D + 1> ptr;
    for (int i = 0; i <= D; ++i) ptr[i] = &pts[v[i]];
    if (orient<D>(ptr.data()) <= 0) ++bad;
    for (int i = 0; i <= D; ++i) {
      const int nb = tri.neighbors(c)[i];
      if (nb < 0) continue;
      const auto& w = tri.vertices(nb);
      int back = -1;
      for (int j = 0; j <= D; ++j)
        if (tri.neighbors(nb)[j] == int(c)) back = j;
      if (back < 0) {
        ++bad;
        continue;
      }
      // Shared facet: v minus v[i] must equal w minus w[back].
      std::array<int, D> fa, fb;
      for (int k = 0, m = 0; k <= D; ++k)
        if (k != i) fa[m++] = v[k];
      for (int k = 0, m = 0; k <= D; ++k)
        if (k != back) fb[m++] = w[k];
      std::sort(fa.begin(), fa.end());
      std::sort(fb.begin(), fb.end());
      if (fa != fb) ++bad;
    }
  }
  return bad;
}

#define PDAPPROX_INSTANTIATE(D)                                                  \
  template class Triangulation<D>;                                               \
  template Triangulation<D> triangulate<D>(std::span<const Vec<D>>);             \
  template std::size_t count_delaunay_violations<D>(const Triangulation<D>&);    \
  template std::size_t count_adjacency_defects<D>(const Triangulation<D>&);

PDAPPROX_INSTANTIATE(2)
PDAPPROX_INSTANTIATE(3)
PDAPPROX_INSTANTIATE(4)

}  // namespace pdapprox
