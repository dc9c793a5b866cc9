#include "pdapprox/target_sets.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pdapprox/constants.hpp"

namespace pdapprox {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

using P2 = std::array<double, 2>;

double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double polygon_area(const std::vector<P2>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * s;
}

double segment_distance(const P2& p, const P2& a, const P2& b) {
  const double ex = b[0] - a[0];
  const double ey = b[1] - a[1];
  const double len2 = ex * ex + ey * ey;
  double t = len2 > 0 ? ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - t * ex, p[1] - a[1] - t * ey);
}

// Largest inscribed circle of a convex polygon: the optimum of the LP
// max r s.t. n_i . c + r <= h_i is attained where three constraints are
// active, so enumerate triples.
double polygon_inradius(const std::vector<P2>& v) {
  const std::size_t m = v.size();
  std::vector<std::array<double, 3>> lines;  // n_x, n_y, h with unit n
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % m];
    double nx = b[1] - a[1];
    double ny = a[0] - b[0];
    const double len = std::hypot(nx, ny);
    nx /= len;
    ny /= len;
    lines.push_back({nx, ny, nx * a[0] + ny * a[1]});
  }
  double best = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (std::size_t k = j + 1; k < m; ++k) {
        // Solve [n_x n_y 1] [cx cy r]^T = h for the three lines.
        double a[3][4];
        for (int row = 0; row < 3; ++row) {
          const auto& l = lines[row == 0 ? i : (row == 1 ? j : k)];
          a[row][0] = l[0];
          a[row][1] = l[1];
          a[row][2] = 1.0;
          a[row][3] = l[2];
        }
        bool ok = true;
        for (int col = 0; col < 3 && ok; ++col) {
          int piv = col;
          for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
          if (std::abs(a[piv][col]) < 1e-14) {
            ok = false;
            break;
          }
          for (int c = 0; c < 4; ++c) std::swap(a[piv][c], a[col][c]);
          for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
          }
        }
        if (!ok) continue;
        const double cx = a[0][3] / a[0][0];
        const double cy = a[1][3] / a[1][1];
        const double r = a[2][3] / a[2][2];
        if (!(r > best)) continue;
        bool feasible = true;
        for (const auto& l : lines)
          if (l[0] * cx + l[1] * cy + r > l[2] + 1e-12 * (1.0 + std::abs(l[2]))) {
            feasible = false;
            break;
          }
        if (feasible) best = r;
      }
  return best;
}

// Sutherland-Hodgman clip of `subject` against the convex CCW `clip`.
std::vector<P2> clip_convex(std::vector<P2> subject, const std::vector<P2>& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const P2& a = clip[e];
    const P2& b = clip[(e + 1) % clip.size()];
    std::vector<P2> out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const P2& p = subject[i];
      const P2& q = subject[(i + 1) % subject.size()];
      const double sp = cross(a, b, p);
      const double sq = cross(a, b, q);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) {
        const double t = sp / (sp - sq);
        out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
      }
    }
    subject = std::move(out);
  }
  return subject;
}

// Volume of the intersection of two d-balls of radius r at distance h:
// twice a cap of height r - h/2, via the regularised incomplete beta.
double ball_lens(int d, double r, double h) {
  if (h >= 2.0 * r) return 0.0;
  const double a = h / (2.0 * r);
  return kappa(d) * std::pow(r, d) *
         boost::math::ibeta((d + 1) / 2.0, 0.5, 1.0 - a * a);
}

// Distance from (y0, y1) in the first quadrant to the ellipse with semi-axes
// e0 >= e1 (robust bisection on the Lagrange-multiplier equation).
double ellipse_distance_quadrant(double e0, double e1, double y0, double y1) {
  auto root = [](double r0, double z0, double z1, double g) {
    const double n0 = r0 * z0;
    double s0 = z1 - 1.0;
    double s1 = g < 0 ? 0.0 : std::hypot(n0, z1) - 1.0;
    double s = 0.0;
    for (int i = 0; i < 200; ++i) {
      s = 0.5 * (s0 + s1);
      if (s == s0 || s == s1) break;
      const double ratio0 = n0 / (s + r0);
      const double ratio1 = z1 / (s + 1.0);
      const double gs = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
      if (gs > 0)
        s0 = s;
      else if (gs < 0)
        s1 = s;
      else
        break;
    }
    return s;
  };
  if (y1 > 0) {
    if (y0 > 0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double r0 = (e0 / e1) * (e0 / e1);
      const double s = root(r0, z0, z1, g);
      const double x0 = r0 * y0 / (s + r0);
      const double x1 = y1 / (s + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - e1);
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    const double x0 = e0 * xde0;
    const double x1 = e1 * std::sqrt(1.0 - xde0 * xde0);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - e0);
}

double elementary_symmetric(const std::vector<double>& l, int j) {
  std::vector<double> e(l.size() + 1, 0.0);
  e[0] = 1.0;
  for (double x : l)
    for (std::size_t k = l.size(); k >= 1; --k) e[k] += x * e[k - 1];
  return e[j];
}

void require_dim(const TargetSet& a, std::span<const double> p) {
  if (p.size() != std::size_t(a.dimension()))
    throw std::invalid_argument("target set: dimension mismatch");
}

}  // namespace

TargetSet::TargetSet(Shape s) : shape_(std::move(s)) { finish(); }

TargetSet TargetSet::ball(std::vector<double> center, double radius) {
  if (center.size() < 2) throw std::invalid_argument("ball: dimension must be >= 2");
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  return TargetSet(BallShape{std::move(center), radius});
}

TargetSet TargetSet::box(std::vector<double> lower, std::vector<double> upper) {
  if (lower.size() != upper.size() || lower.size() < 2)
    throw std::invalid_argument("box: corners must share a dimension >= 2");
  for (std::size_t i = 0; i < lower.size(); ++i)
    if (!(upper[i] > lower[i]))
      throw std::invalid_argument("box: upper must exceed lower componentwise");
  return TargetSet(BoxShape{std::move(lower), std::move(upper)});
}

TargetSet TargetSet::ellipse(std::array<double, 2> center,
                             std::array<double, 2> semi_axes) {
  if (!(semi_axes[0] > 0.0 && semi_axes[1] > 0.0))
    throw std::invalid_argument("ellipse: semi-axes must be positive");
  return TargetSet(EllipseShape{center, semi_axes});
}

TargetSet TargetSet::polygon(std::vector<std::array<double, 2>> v) {
  if (v.size() < 3) throw std::invalid_argument("polygon: need >= 3 vertices");
  if (polygon_area(v) < 0) std::reverse(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const auto& c = v[(i + 2) % v.size()];
    if (!(cross(a, b, c) > 0.0))
      throw std::invalid_argument("polygon: vertices must form a strictly convex polygon");
  }
  return TargetSet(PolygonShape{std::move(v)});
}

void TargetSet::finish() {
  std::visit(
      overloaded{
          [&](const BallShape& b) {
            dim_ = int(b.center.size());
            volume_ = kappa(dim_) * std::pow(b.radius, dim_);
            perimeter_ = omega(dim_) * std::pow(b.radius, dim_ - 1);
            inradius_ = b.radius;
            intrinsic_.assign(dim_ + 1, 0.0);
            for (int j = 0; j <= dim_; ++j) {
              const double binom = std::tgamma(dim_ + 1.0) /
                                   (std::tgamma(j + 1.0) * std::tgamma(dim_ - j + 1.0));
              intrinsic_[j] = binom * kappa(dim_) /
                              unit_ball_volume(dim_ - j) * std::pow(b.radius, j);
            }
          },
          [&](const BoxShape& b) {
            dim_ = int(b.lower.size());
            std::vector<double> len(dim_);
            for (int i = 0; i < dim_; ++i) len[i] = b.upper[i] - b.lower[i];
            intrinsic_.assign(dim_ + 1, 0.0);
            for (int j = 0; j <= dim_; ++j) intrinsic_[j] = elementary_symmetric(len, j);
            volume_ = intrinsic_[dim_];
            perimeter_ = 2.0 * intrinsic_[dim_ - 1];
            inradius_ = 0.5 * *std::min_element(len.begin(), len.end());
          },
          [&](const EllipseShape& e) {
            dim_ = 2;
            const double a = std::max(e.semi_axes[0], e.semi_axes[1]);
            const double b = std::min(e.semi_axes[0], e.semi_axes[1]);
            volume_ = M_PI * a * b;
            perimeter_ = 4.0 * a * std::comp_ellint_2(std::sqrt(1.0 - (b * b) / (a * a)));
            inradius_ = b;
            intrinsic_ = {1.0, 0.5 * perimeter_, volume_};
          },
          [&](const PolygonShape& p) {
            dim_ = 2;
            volume_ = polygon_area(p.vertices);
            perimeter_ = 0.0;
            for (std::size_t i = 0; i < p.vertices.size(); ++i) {
              const auto& a = p.vertices[i];
              const auto& b = p.vertices[(i + 1) % p.vertices.size()];
              perimeter_ += std::hypot(b[0] - a[0], b[1] - a[1]);
            }
            inradius_ = polygon_inradius(p.vertices);
            intrinsic_ = {1.0, 0.5 * perimeter_, volume_};
          }},
      shape_);
}

std::string TargetSet::kind() const {
  return std::visit(overloaded{[](const BallShape&) { return "ball"; },
                               [](const BoxShape&) { return "box"; },
                               [](const EllipseShape&) { return "ellipse"; },
                               [](const PolygonShape&) { return "polygon"; }},
                    shape_);
}

std::vector<double> TargetSet::bbox_lower() const {
  return std::visit(
      overloaded{
          [](const BallShape& b) {
            auto lo = b.center;
            for (auto& x : lo) x -= b.radius;
            return lo;
          },
          [](const BoxShape& b) { return b.lower; },
          [](const EllipseShape& e) {
            return std::vector<double>{e.center[0] - e.semi_axes[0],
                                       e.center[1] - e.semi_axes[1]};
          },
          [](const PolygonShape& p) {
            std::vector<double> lo{INFINITY, INFINITY};
            for (const auto& v : p.vertices)
              for (int i = 0; i < 2; ++i) lo[i] = std::min(lo[i], v[i]);
            return lo;
          }},
      shape_);
}

std::vector<double> TargetSet::bbox_upper() const {
  return std::visit(
      overloaded{
          [](const BallShape& b) {
            auto hi = b.center;
            for (auto& x : hi) x += b.radius;
            return hi;
          },
          [](const BoxShape& b) { return b.upper; },
          [](const EllipseShape& e) {
            return std::vector<double>{e.center[0] + e.semi_axes[0],
                                       e.center[1] + e.semi_axes[1]};
          },
          [](const PolygonShape& p) {
            std::vector<double> hi{-INFINITY, -INFINITY};
            for (const auto& v : p.vertices)
              for (int i = 0; i < 2; ++i) hi[i] = std::max(hi[i], v[i]);
            return hi;
          }},
      shape_);
}

TargetSet TargetSet::scaled(double f) const {
  if (!(f > 0.0)) throw std::invalid_argument("scaled: factor must be positive");
  return std::visit(
      overloaded{
          [f](BallShape b) {
            for (auto& x : b.center) x *= f;
            return TargetSet::ball(b.center, b.radius * f);
          },
          [f](BoxShape b) {
            for (auto& x : b.lower) x *= f;
            for (auto& x : b.upper) x *= f;
            return TargetSet::box(b.lower, b.upper);
          },
          [f](EllipseShape e) {
            return TargetSet::ellipse({e.center[0] * f, e.center[1] * f},
                                      {e.semi_axes[0] * f, e.semi_axes[1] * f});
          },
          [f](PolygonShape p) {
            for (auto& v : p.vertices) v = {v[0] * f, v[1] * f};
            return TargetSet::polygon(p.vertices);
          }},
      shape_);
}

bool contains(const TargetSet& a, std::span<const double> p) {
  require_dim(a, p);
  return std::visit(
      overloaded{
          [&](const BallShape& b) {
            double s = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
              s += (p[i] - b.center[i]) * (p[i] - b.center[i]);
            return s <= b.radius * b.radius;
          },
          [&](const BoxShape& b) {
            for (std::size_t i = 0; i < p.size(); ++i)
              if (p[i] < b.lower[i] || p[i] > b.upper[i]) return false;
            return true;
          },
          [&](const EllipseShape& e) {
            const double x = (p[0] - e.center[0]) / e.semi_axes[0];
            const double y = (p[1] - e.center[1]) / e.semi_axes[1];
            return x * x + y * y <= 1.0;
          },
          [&](const PolygonShape& poly) {
            const P2 q{p[0], p[1]};
            const auto& v = poly.vertices;
            for (std::size_t i = 0; i < v.size(); ++i)
              if (cross(v[i], v[(i + 1) % v.size()], q) < 0.0) return false;
            return true;
          }},
      a.shape());
}

double distance_to_boundary(const TargetSet& a, std::span<const double> p) {
  require_dim(a, p);
  return std::visit(
      overloaded{
          [&](const BallShape& b) {
            double s = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i)
              s += (p[i] - b.center[i]) * (p[i] - b.center[i]);
            return std::sqrt(s) - b.radius;
          },
          [&](const BoxShape& b) {
            double outside = 0.0;
            double inside = -INFINITY;
            for (std::size_t i = 0; i < p.size(); ++i) {
              const double c = 0.5 * (b.lower[i] + b.upper[i]);
              const double h = 0.5 * (b.upper[i] - b.lower[i]);
              const double q = std::abs(p[i] - c) - h;
              outside += std::max(q, 0.0) * std::max(q, 0.0);
              inside = std::max(inside, q);
            }
            return std::sqrt(outside) + std::min(inside, 0.0);
          },
          [&](const EllipseShape& e) {
            double y0 = std::abs(p[0] - e.center[0]);
            double y1 = std::abs(p[1] - e.center[1]);
            double e0 = e.semi_axes[0];
            double e1 = e.semi_axes[1];
            if (e0 < e1) {
              std::swap(e0, e1);
              std::swap(y0, y1);
            }
            const double dist = ellipse_distance_quadrant(e0, e1, y0, y1);
            const double level = (y0 / e0) * (y0 / e0) + (y1 / e1) * (y1 / e1);
            return level <= 1.0 ? -dist : dist;
          },
          [&](const PolygonShape& poly) {
            const P2 q{p[0], p[1]};
            const auto& v = poly.vertices;
            double dmin = INFINITY;
            for (std::size_t i = 0; i < v.size(); ++i)
              dmin = std::min(dmin, segment_distance(q, v[i], v[(i + 1) % v.size()]));
            return contains(a, p) ? -dmin : dmin;
          }},
      a.shape());
}

double steiner_volume(const TargetSet& a, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("steiner_volume: eps must be >= 0");
  const int d = a.dimension();
  const auto& v = a.intrinsic_volumes();
  double s = 0.0;
  for (int i = 0; i <= d; ++i)
    s += unit_ball_volume(i) * v[d - i] * std::pow(eps, i);
  return s;
}

double covariogram(const TargetSet& a, std::span<const double> x) {
  require_dim(a, x);
  return std::visit(
      overloaded{
          [&](const BallShape& b) {
            double h = 0.0;
            for (double c : x) h += c * c;
            return ball_lens(a.dimension(), b.radius, std::sqrt(h));
          },
          [&](const BoxShape& b) {
            double g = 1.0;
            for (std::size_t i = 0; i < x.size(); ++i)
              g *= std::max(0.0, (b.upper[i] - b.lower[i]) - std::abs(x[i]));
            return g;
          },
          [&](const EllipseShape& e) {
            // Affine image of the unit disk.
            const double u = x[0] / e.semi_axes[0];
            const double v = x[1] / e.semi_axes[1];
            return e.semi_axes[0] * e.semi_axes[1] * ball_lens(2, 1.0, std::hypot(u, v));
          },
          [&](const PolygonShape& p) {
            std::vector<P2> shifted = p.vertices;
            for (auto& v : shifted) v = {v[0] + x[0], v[1] + x[1]};
            const auto inter = clip_convex(shifted, p.vertices);
            return inter.size() < 3 ? 0.0 : std::abs(polygon_area(inter));
          }},
      a.shape());
}

CovariogramValue covariogram_mc(const TargetSet& a, std::span<const double> x,
                                std::size_t samples, std::uint64_t seed) {
  require_dim(a, x);
  if (samples == 0) throw std::invalid_argument("covariogram_mc: zero samples");
  CounterRng rng(seed);
  std::size_t hits = 0;
  std::vector<double> q(x.size());
  for (std::size_t s = 0; s < samples; ++s) {
    const auto y = sample_uniform_in(a, rng);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = y[i] - x[i];
    if (contains(a, q)) ++hits;
  }
  const double p = double(hits) / double(samples);
  return {a.volume() * p, a.volume() * std::sqrt(p * (1.0 - p) / double(samples))};
}

Covariogram::Covariogram(TargetSet set, Method method, std::size_t samples,
                         std::uint64_t seed)
    : set_(std::move(set)), method_(method), samples_(samples), seed_(seed) {
  if (method_ == Method::monte_carlo && samples_ == 0)
    throw std::invalid_argument("Covariogram: Monte Carlo needs samples > 0");
}

CovariogramValue Covariogram::operator()(std::span<const double> x) const {
  if (method_ == Method::analytic) return {covariogram(set_, x), 0.0};
  return covariogram_mc(set_, x, samples_, seed_);
}

double perimeter_from_covariogram(const TargetSet& a, int directions) {
  if (directions < 8) throw std::invalid_argument("need at least 8 directions");
  const int d = a.dimension();
  std::vector<double> zero(d, 0.0);
  const double g0 = covariogram(a, zero);
  auto derivative = [&](const std::vector<double>& u) {
    auto quotient = [&](double r) {
      std::vector<double> x(d);
      for (int i = 0; i < d; ++i) x[i] = r * u[i];
      return (covariogram(a, x) - g0) / r;
    };
    const double d1 = quotient(1e-2);
    const double d2 = quotient(5e-3);
    const double d3 = quotient(2.5e-3);
    const double r1 = 2.0 * d2 - d1;
    const double r2 = 2.0 * d3 - d2;
    return (4.0 * r2 - r1) / 3.0;
  };

  double integral = 0.0;
  if (d == 2) {
    // Trapezoid rule on the circle (periodic integrand).
    for (int k = 0; k < directions; ++k) {
      const double th = 2.0 * M_PI * (k + 0.5) / directions;
      integral += derivative({std::cos(th), std::sin(th)});
    }
    integral *= 2.0 * M_PI / directions;
  } else {
    // Fibonacci lattice on S^2 for d = 3; for d > 3 a deterministic
    // quasi-random set of Gaussian directions.
    if (d == 3) {
      const double golden = M_PI * (3.0 - std::sqrt(5.0));
      for (int k = 0; k < directions; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / directions;
        const double rad = std::sqrt(1.0 - z * z);
        const double phi = golden * k;
        integral += derivative({rad * std::cos(phi), rad * std::sin(phi), z});
      }
    } else {
      CounterRng rng(0x5eedULL);
      for (int k = 0; k < directions; ++k) {
        std::vector<double> u(d);
        double n = 0.0;
        for (auto& c : u) {
          c = rng.normal();
          n += c * c;
        }
        n = std::sqrt(n);
        for (auto& c : u) c /= n;
        integral += derivative(u);
      }
    }
    integral *= omega(d) / directions;
  }
  return -integral / kappa(d - 1);
}

}  // namespace pdapprox
