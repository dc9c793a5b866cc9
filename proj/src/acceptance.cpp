#include "pdapprox/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pdapprox/constants.hpp"
#include "pdapprox/delaunay.hpp"
#include "pdapprox/experiments.hpp"
#include "pdapprox/lemmas.hpp"
#include "pdapprox/rng.hpp"

namespace pdapprox {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string failed_checks(const ExperimentReport& rep) {
  std::string out;
  for (const auto& c : rep.checks)
    out += (out.empty() ? "" : "; ") + c.name + (c.passed ? " ok: " : " FAILED: ") + c.detail;
  return out;
}

template <class F>
CriterionResult timed(int id, std::string name, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

double cross(const std::array<double, 2>& o, const std::array<double, 2>& a,
             const std::array<double, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

template <int D>
std::vector<Vec<D>> random_points(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Vec<D>> p(n);
  for (auto& x : p)
    for (int i = 0; i < D; ++i) x[i] = rng.uniform();
  return p;
}

}  // namespace

double hull_area_2d(std::vector<std::array<double, 2>> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return 0.0;
  std::vector<std::array<double, 2>> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, lo = k + 1; i-- > 0;) {
    while (k >= lo && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  double a = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& p = h[i];
    const auto& q = h[(i + 1) % h.size()];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * std::abs(a);
}

double hull_volume_3d(const std::vector<std::array<double, 3>>& pts) {
  const std::size_t n = pts.size();
  if (n < 4) return 0.0;
  std::array<double, 3> g{0, 0, 0};
  for (const auto& p : pts)
    for (int i = 0; i < 3; ++i) g[i] += p[i] / double(n);
  auto sub = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[0] - b[0], a[1] - b[1], a[2] - b[2]};
  };
  auto det = [](const std::array<double, 3>& a, const std::array<double, 3>& b,
                const std::array<double, 3>& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
  };
  double vol = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const auto u = sub(pts[j], pts[i]);
        const auto v = sub(pts[k], pts[i]);
        int pos = 0, neg = 0;
        for (std::size_t m = 0; m < n && !(pos && neg); ++m) {
          if (m == i || m == j || m == k) continue;
          const double s = det(u, v, sub(pts[m], pts[i]));
          if (s > 0) ++pos;
          else if (s < 0) ++neg;
        }
        if (pos && neg) continue;
        // Supporting facet: add the cone from the centroid.
        vol += std::abs(det(u, v, sub(g, pts[i]))) / 6.0;
      }
  return vol;
}

CriterionResult criterion_unbiasedness(const AcceptanceOptions& opt) {
  return timed(1, "unbiasedness", [&](CriterionResult& r) {
    ExperimentConfig cfg;
    cfg.experiment = "unbiasedness";
    cfg.t_grid = {500.0};
    cfg.replications = 1000;
    cfg.seed = split_seed(opt.seed, 1);
    cfg.workers = opt.workers;
    const auto start = std::chrono::steady_clock::now();
    cfg.target = TargetSet::ball({0.0, 0.0}, 1.0);
    const ExperimentReport disk = run_unbiasedness(cfg);
    cfg.target = TargetSet::box({0.0, 0.0}, {1.0, 1.0});
    cfg.seed = split_seed(opt.seed, 2);
    const ExperimentReport box = run_unbiasedness(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& a = disk.per_t[0];
    const auto& b = box.per_t[0];
    r.passed = disk.passed() && box.passed() && secs <= 120.0;
    r.detail = "disk mean " + num(a.mean_volume) + " (pi), z = " + num(a.z_score) +
               "; box mean " + num(b.mean_volume) + " (1), z = " + num(b.z_score) +
               "; runtime " + num(secs) + " s (limit 120)";
    if (!disk.passed()) r.detail += "; disk: " + failed_checks(disk);
    if (!box.passed()) r.detail += "; box: " + failed_checks(box);
  });
}

CriterionResult criterion_variance_exponent(const AcceptanceOptions& opt) {
  return timed(2, "variance exponent", [&](CriterionResult& r) {
    ExperimentConfig cfg;
    cfg.experiment = "variance";
    // Radius 1.2 so that t = 250 satisfies t >= (8d/r_A)^d = 177.8.
    cfg.target = TargetSet::ball({0.0, 0.0}, 1.2);
    cfg.t_grid = {250.0, 500.0, 1000.0, 2000.0, 4000.0};
    cfg.replications = 1000;
    cfg.seed = split_seed(opt.seed, 3);
    cfg.workers = opt.workers;
    cfg.slope_tolerance = 0.15;
    const auto start = std::chrono::steady_clock::now();
    const ExperimentReport rep = run_variance_scaling(cfg);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double slope = rep.fits.at("slope");
    r.passed = rep.passed() && slope >= -1.65 && slope <= -1.35 && secs <= 900.0;
    r.detail = failed_checks(rep) + "; runtime " + num(secs) + " s (limit 900)";
  });
}

CriterionResult criterion_clt(const AcceptanceOptions& opt) {
  return timed(3, "CLT Kolmogorov distance", [&](CriterionResult& r) {
    ExperimentConfig cfg;
    cfg.experiment = "clt";
    cfg.target = TargetSet::ball({0.0, 0.0}, 1.2);
    cfg.t_grid = {250.0, 500.0, 1000.0, 2000.0, 4000.0};
    cfg.replications = 2000;
    cfg.coupled = true;
    cfg.seed = split_seed(opt.seed, 4);
    cfg.workers = opt.workers;
    cfg.ks_threshold = 0.05;
    const ExperimentReport rep = run_clt(cfg);
    r.passed = rep.passed();
    r.detail = failed_checks(rep);
  });
}

CriterionResult criterion_symdiff_limit(const AcceptanceOptions& opt) {
  return timed(4, "symmetric-difference limit", [&](CriterionResult& r) {
    ExperimentConfig cfg;
    cfg.experiment = "symdiff";
    cfg.target = TargetSet::ball({0.0, 0.0}, 1.0);
    cfg.t_grid = {250.0, 500.0, 1000.0, 2000.0, 4000.0};
    cfg.replications = 500;
    cfg.seed = split_seed(opt.seed, 5);
    cfg.workers = opt.workers;
    cfg.constant_samples = 10'000'000;
    const ExperimentReport rep = run_symdiff_scaling(cfg);
    // The balance and strict-decrease diagnostics are reported but the
    // criterion is stabilization, limit agreement and bound bracketing.
    bool ok = true;
    for (const auto& c : rep.checks)
      if (c.name == "stabilization" || c.name == "limit_vs_c_hat" ||
          c.name == "c_hat_in_bounds" || c.name == "leakage")
        ok = ok && c.passed;
    std::string ratios;
    for (const auto& s : rep.per_t) ratios += (ratios.empty() ? "" : ", ") + num(s.ratio);
    r.passed = ok;
    r.detail = "ratios [" + ratios + "]; " + failed_checks(rep);
  });
}

CriterionResult criterion_constants(const AcceptanceOptions& opt) {
  return timed(5, "constants", [&](CriterionResult& r) {
    double worst = 0.0;
    for (int d = 2; d <= 6; ++d) {
      double fact = 1.0;
      for (int i = 2; i <= d - 1; ++i) fact *= i;
      const double expected = (d + 1) / fact * std::pow(kappa(d), d + 1);
      worst = std::max(worst, std::abs(simplex_moment(d, 2) / expected - 1.0));
    }
    const McEstimate mc = estimate_simplex_moment(2, 1, 1'000'000, split_seed(opt.seed, 6),
                                                  opt.workers);
    const double exact = simplex_moment(2, 1);
    const double rel = std::abs(mc.value / exact - 1.0);
    r.passed = worst <= 1e-12 && rel <= 0.01;
    r.detail = "max rel. error of S(d,d,2) identity over d=2..6: " + num(worst) +
               "; S(2,2,1) = " + num(exact) + " vs MC " + num(mc.value) + " +- " +
               num(mc.stderr_) + " (rel. diff " + num(rel) + ")";
  });
}

CriterionResult criterion_blaschke_petkantschin(const AcceptanceOptions& opt) {
  return timed(6, "Blaschke-Petkantschin identities", [&](CriterionResult& r) {
    const std::uint64_t n = 10'000'000;
    bool ok = true;
    std::string detail;
    auto report = [&](const char* label, const BpCheck& c) {
      ok = ok && c.relative_error <= 0.02;
      detail += std::string(detail.empty() ? "" : "; ") + label + " lhs " + num(c.lhs) +
                " rhs " + num(c.rhs) + " rel " + num(c.relative_error);
    };
    report("d=2 full", bp_identity_check<2>(gaussian_window_fixture<2>(false), n,
                                            split_seed(opt.seed, 7)));
    report("d=2 origin", bp_origin_identity_check<2>(gaussian_window_fixture<2>(true), n,
                                                     split_seed(opt.seed, 8)));
    report("d=3 full", bp_identity_check<3>(gaussian_window_fixture<3>(false), n,
                                            split_seed(opt.seed, 9)));
    report("d=3 origin", bp_origin_identity_check<3>(gaussian_window_fixture<3>(true), n,
                                                     split_seed(opt.seed, 10)));
    r.passed = ok;
    r.detail = detail;
  });
}

CriterionResult criterion_delaunay(const AcceptanceOptions& opt) {
  return timed(7, "Delaunay correctness", [&](CriterionResult& r) {
    std::size_t violations = 0, defects = 0;
    double worst2 = 0.0, worst3 = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      {
        const std::size_t n = 10 + s * 190 / 99;  // 10..200
        const auto pts = random_points<2>(n, split_seed(opt.seed, 100 + s));
        const auto tri = triangulate<2>(std::span<const Vec<2>>(pts));
        violations += count_delaunay_violations<2>(tri);
        defects += count_adjacency_defects<2>(tri);
        std::vector<std::array<double, 2>> q(pts.begin(), pts.end());
        const double hull = hull_area_2d(q);
        worst2 = std::max(worst2, std::abs(tri.total_volume() / hull - 1.0));
      }
      {
        const std::size_t n = 10 + s / 2;  // 10..59
        const auto pts = random_points<3>(n, split_seed(opt.seed, 300 + s));
        const auto tri = triangulate<3>(std::span<const Vec<3>>(pts));
        violations += count_delaunay_violations<3>(tri);
        defects += count_adjacency_defects<3>(tri);
        std::vector<std::array<double, 3>> q(pts.begin(), pts.end());
        const double hull = hull_volume_3d(q);
        worst3 = std::max(worst3, std::abs(tri.total_volume() / hull - 1.0));
      }
    }
    r.passed = violations == 0 && defects == 0 && worst2 <= 1e-9 && worst3 <= 1e-9;
    r.detail = "100 seeds in d=2 (n <= 200) and d=3 (n < 60): " + std::to_string(violations) +
               " empty-ball violations, " + std::to_string(defects) +
               " adjacency defects, max hull-volume rel. error " + num(worst2) + " (2D), " +
               num(worst3) + " (3D)";
  });
}

CriterionResult criterion_simplex_lemma(const AcceptanceOptions& opt) {
  return timed(8, "simplex perturbation lemma", [&](CriterionResult& r) {
    const auto a = check_simplex_lemma<2>(1.0, 0.02, 1000, 4, split_seed(opt.seed, 11));
    const auto b = check_simplex_lemma<3>(1.0, 0.02, 1000, 4, split_seed(opt.seed, 12));
    r.passed = a.center_violations + a.sphere_violations + b.center_violations +
                   b.sphere_violations ==
               0;
    auto line = [](const char* d, const SimplexLemmaReport& x) {
      return std::string(d) + ": " + std::to_string(x.center_violations) + " center and " +
             std::to_string(x.sphere_violations) + " sphere violations over " +
             std::to_string(x.spheres_tested) + " spheres, max offset " +
             num(x.max_center_offset) + " s, min gap " + num(x.min_sphere_distance) + " s";
    };
    r.detail = line("d=2", a) + "; " + line("d=3", b);
  });
}

CriterionResult criterion_rx_tail(const AcceptanceOptions& opt) {
  return timed(9, "circumradius tail bound", [&](CriterionResult& r) {
    ExperimentConfig cfg;
    cfg.experiment = "rxtail";
    cfg.t_grid = {1.0, 10.0, 100.0};
    cfg.replications = 4000;
    cfg.seed = split_seed(opt.seed, 13);
    cfg.workers = opt.workers;
    const ExperimentReport rep = run_rx_tail(cfg);
    r.passed = rep.passed();
    double worst = 0.0;
    for (const auto& row : rep.rx)
      if (row.bound > 0) worst = std::max(worst, row.empirical / row.bound);
    r.detail = failed_checks(rep) + "; max empirical/bound " + num(worst);
  });
}

CriterionResult criterion_determinism(const AcceptanceOptions& opt) {
  return timed(10, "determinism", [&](CriterionResult& r) {
    ExperimentConfig cfg;
    cfg.experiment = "unbiasedness";
    cfg.t_grid = {100.0, 200.0};
    cfg.replications = 24;
    cfg.compute_symdiff = true;
    cfg.symdiff.inside_samples = 1 << 12;
    cfg.seed = split_seed(opt.seed, 14);
    namespace fs = std::filesystem;
    const fs::path base = fs::temp_directory_path() /
                          ("pdapprox-determinism-" + std::to_string(opt.seed));
    auto run = [&](int workers, const std::string& sub) {
      cfg.workers = workers;
      const fs::path dir = base / sub;
      write_outputs(run_unbiasedness(cfg), dir.string());
      std::ifstream f(dir / "records.csv", std::ios::binary);
      std::ostringstream ss;
      ss << f.rdbuf();
      return ss.str();
    };
    const std::string a = run(1, "a");
    const std::string b = run(1, "b");
    const std::string c = run(std::max(2, opt.workers), "c");
    std::error_code ec;
    fs::remove_all(base, ec);
    r.passed = !a.empty() && a == b && a == c;
    r.detail = "records.csv " + std::to_string(a.size()) + " bytes; repeat run " +
               (a == b ? "identical" : "DIFFERENT") + "; multi-worker run " +
               (a == c ? "identical" : "DIFFERENT");
  });
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  switch (id) {
    case 1: return criterion_unbiasedness(opt);
    case 2: return criterion_variance_exponent(opt);
    case 3: return criterion_clt(opt);
    case 4: return criterion_symdiff_limit(opt);
    case 5: return criterion_constants(opt);
    case 6: return criterion_blaschke_petkantschin(opt);
    case 7: return criterion_delaunay(opt);
    case 8: return criterion_simplex_lemma(opt);
    case 9: return criterion_rx_tail(opt);
    case 10: return criterion_determinism(opt);
    default: throw std::invalid_argument("criterion id must be in 1..10");
  }
}

std::vector<int> fast_criteria() { return {5, 6, 7, 8, 9, 10}; }
std::vector<int> all_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "%s [%d] ", r.passed ? "PASS" : "FAIL", r.id);
  return head + r.name + " (" + num(r.seconds) + " s): " + r.detail;
}

}  // namespace pdapprox
