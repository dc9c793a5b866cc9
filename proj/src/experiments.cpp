#include "pdapprox/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "pdapprox/config.hpp"
#include "pdapprox/constants.hpp"
#include "pdapprox/delaunay.hpp"
#include "pdapprox/lemmas.hpp"
#include "pdapprox/parallel.hpp"
#include "pdapprox/stats.hpp"

namespace pdapprox {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Outcome {
  double volume = 0.0;
  std::size_t leakage = 0;
  std::optional<SymdiffEstimate> symdiff;
  std::size_t points = 0;
  std::size_t cells = 0;
  std::size_t selected = 0;
};

constexpr int kMaxExtensions = 8;

// Triangulates, selects, and grows the window (keeping the existing points)
// until no selected cell leaks. `leakage` reports the first attempt.
template <int D>
Outcome evaluate(PointSample<D> sample, const TargetSet& a,
                 const SymdiffOptions* symdiff, std::uint64_t seed) {
  Outcome out;
  for (int attempt = 0;; ++attempt) {
    const Triangulation<D> tri = triangulate<D>(sample);
    const ApproximationResult ap = build_approximation<D>(tri, a, sample.window);
    if (attempt == 0) out.leakage = ap.leakage;
    if (ap.leakage == 0) {
      out.volume = ap.volume;
      out.points = sample.points.size();
      out.cells = tri.size();
      out.selected = ap.selected.size();
      if (symdiff) out.symdiff = symdiff_volume<D>(tri, ap, a, *symdiff, split_seed(seed, 0x5d));
      return out;
    }
    if (attempt == kMaxExtensions)
      throw std::runtime_error("replication still leaks after repeated window growth");
    const double grow =
        std::max(sample.window.margin, std::pow(sample.intensity, -1.0 / D));
    sample = extend_sample<D>(sample, inflate<D>(sample.window, grow),
                              split_seed(seed, 0xe0 + std::uint64_t(attempt)));
  }
}

template <int D>
std::vector<Record> simulate(const ExperimentConfig& cfg, bool with_symdiff) {
  const std::size_t nt = cfg.t_grid.size();
  const SymdiffOptions* sd = with_symdiff ? &cfg.symdiff : nullptr;
  auto per_rep = parallel_map<std::vector<Record>>(
      std::size_t(cfg.replications), cfg.workers, [&](std::size_t r) {
        const std::uint64_t rs = split_seed(cfg.seed, r);
        std::vector<Record> out(nt);
        auto fill = [&](std::size_t ti, std::uint64_t seed, const Outcome& o) {
          Record& rec = out[ti];
          rec.experiment = cfg.experiment;
          rec.d = D;
          rec.t = cfg.t_grid[ti];
          rec.replication = int(r);
          rec.seed = seed;
          rec.volume = o.volume;
          rec.symdiff = o.symdiff;
          rec.leakage = o.leakage;
        };
        if (cfg.coupled) {
          const double t_max = cfg.t_grid.back();
          const Window<D> w = padded_window<D>(cfg.target, cfg.t_grid.front(), cfg.tail_mass);
          const PointSample<D> base = sample_poisson<D>(w, t_max, rs);
          CounterRng marks(split_seed(rs, 0x3a));
          std::vector<double> mark(base.points.size());
          for (auto& m : mark) m = marks.uniform();
          for (std::size_t ti = 0; ti < nt; ++ti) {
            const double t = cfg.t_grid[ti];
            PointSample<D> s;
            s.intensity = t;
            s.seed = rs;
            s.window = w;
            for (std::size_t i = 0; i < base.points.size(); ++i)
              if (mark[i] * t_max < t) s.points.push_back(base.points[i]);
            fill(ti, rs, evaluate<D>(std::move(s), cfg.target, sd, split_seed(rs, ti + 1)));
          }
        } else {
          for (std::size_t ti = 0; ti < nt; ++ti) {
            const double t = cfg.t_grid[ti];
            const std::uint64_t seed = split_seed(rs, ti + 1);
            const Window<D> w = padded_window<D>(cfg.target, t, cfg.tail_mass);
            fill(ti, seed, evaluate<D>(sample_poisson<D>(w, t, seed), cfg.target, sd, seed));
          }
        }
        return out;
      });
  std::vector<Record> records;
  records.reserve(nt * per_rep.size());
  for (std::size_t ti = 0; ti < nt; ++ti)
    for (auto& rep : per_rep) records.push_back(std::move(rep[ti]));
  return records;
}

std::vector<Record> simulate_dispatch(const ExperimentConfig& cfg, bool with_symdiff) {
  switch (cfg.target.dimension()) {
    case 2: return simulate<2>(cfg, with_symdiff);
    case 3: return simulate<3>(cfg, with_symdiff);
    case 4: return simulate<4>(cfg, with_symdiff);
    default: throw ConfigError("supported dimensions are 2, 3 and 4");
  }
}

std::vector<double> volumes_at(const std::vector<Record>& recs, double t) {
  std::vector<double> v;
  for (const auto& r : recs)
    if (r.t == t) v.push_back(r.volume);
  return v;
}

std::vector<TSummary> summarise(const ExperimentConfig& cfg,
                                const std::vector<Record>& recs) {
  const int d = cfg.target.dimension();
  std::vector<TSummary> out;
  for (double t : cfg.t_grid) {
    TSummary s;
    s.t = t;
    std::vector<double> vol, sym, outside, inside, diff;
    for (const auto& r : recs) {
      if (r.t != t) continue;
      vol.push_back(r.volume);
      if (r.leakage > 0) ++s.leaky_replications;
      if (r.symdiff) {
        sym.push_back(r.symdiff->value);
        outside.push_back(r.symdiff->outside);
        inside.push_back(r.symdiff->inside);
        diff.push_back(r.symdiff->outside - r.symdiff->inside);
      }
    }
    s.n = vol.size();
    s.mean_volume = mean(vol);
    s.variance_volume = sample_variance(vol);
    s.stderr_volume = std::sqrt(s.variance_volume / double(std::max<std::size_t>(s.n, 1)));
    s.z_score = s.stderr_volume > 0
                    ? (s.mean_volume - cfg.target.volume()) / s.stderr_volume
                    : 0.0;
    s.ks = s.variance_volume > 0 ? ks_distance_standardized(vol) : 0.5;
    if (!sym.empty()) {
      const double n = double(sym.size());
      s.symdiff_mean = mean(sym);
      s.symdiff_stderr = std::sqrt(sample_variance(sym) / n);
      const double scale = std::pow(t, 1.0 / d) / cfg.target.perimeter();
      s.ratio = scale * s.symdiff_mean;
      s.ratio_stderr = scale * s.symdiff_stderr;
      s.outside_mean = mean(outside);
      s.inside_mean = mean(inside);
      const double se = std::sqrt(sample_variance(diff) / n);
      s.balance_z = se > 0 ? (s.outside_mean - s.inside_mean) / se : 0.0;
    }
    out.push_back(s);
  }
  return out;
}

void leakage_check(ExperimentReport& rep) {
  std::size_t leaky = 0;
  for (const auto& r : rep.records) leaky += r.leakage > 0;
  const double frac = rep.records.empty() ? 0.0 : double(leaky) / rep.records.size();
  rep.checks.push_back({"leakage", frac <= 1e-3,
                        std::to_string(leaky) + " of " + std::to_string(rep.records.size()) +
                            " replications needed window growth"});
}

ExperimentReport make_report(const ExperimentConfig& cfg, bool with_symdiff) {
  validate(cfg);
  ExperimentReport rep;
  rep.config = cfg;
  rep.d = cfg.target.dimension();
  rep.records = simulate_dispatch(cfg, with_symdiff);
  rep.per_t = summarise(cfg, rep.records);
  return rep;
}

}  // namespace

void validate(const ExperimentConfig& c) {
  static const std::vector<std::string> kNames{"unbiasedness", "variance", "clt",
                                               "symdiff", "rxtail", "estimate"};
  if (std::find(kNames.begin(), kNames.end(), c.experiment) == kNames.end())
    throw ConfigError("unknown experiment '" + c.experiment + "'");
  const int d = c.target.dimension();
  if (d < 2 || d > 4) throw ConfigError("supported dimensions are 2, 3 and 4");
  if (c.t_grid.empty()) throw ConfigError("t_grid must not be empty");
  for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
    if (!(c.t_grid[i] > 0.0) || !std::isfinite(c.t_grid[i]))
      throw ConfigError("t_grid entries must be positive and finite");
    if (i > 0 && !(c.t_grid[i] > c.t_grid[i - 1]))
      throw ConfigError("t_grid must be strictly increasing");
  }
  if (c.replications < 1) throw ConfigError("replications must be >= 1");
  if (!(c.tail_mass > 0.0 && c.tail_mass < 1.0))
    throw ConfigError("tail_mass must lie in (0, 1)");
  if (c.symdiff.samples_per_cell < 1 || c.symdiff.inside_samples < 1)
    throw ConfigError("symmetric-difference sample counts must be >= 1");
  if (c.workers < 1) throw ConfigError("workers must be >= 1");
  if (c.bootstrap < 0) throw ConfigError("bootstrap must be >= 0");
  if (c.pilot_replications < 0) throw ConfigError("pilot_replications must be >= 0");
  if (c.constant_samples < 1) throw ConfigError("constant_samples must be >= 1");
  for (int k : c.rx_k)
    if (k < 0) throw ConfigError("rx_k entries must be >= 0");
  for (double s : c.rx_s)
    if (!(s >= 0.0)) throw ConfigError("rx_s entries must be >= 0");

  const std::string& e = c.experiment;
  if (e == "variance" || e == "clt") {
    const double t_min = std::pow(8.0 * d / c.target.inradius(), d);
    if (c.t_grid.front() < t_min)
      throw ConfigError("every t must satisfy t >= (8d/r_A)^d = " + fmt_short(t_min) +
                        " for the variance and CLT experiments");
  }
  if (e == "variance") {
    if (c.t_grid.size() < 2 || c.t_grid.back() / c.t_grid.front() < 16.0)
      throw ConfigError("variance: t_grid must span at least a factor 16");
    if (c.replications < 2) throw ConfigError("variance: need >= 2 replications");
  }
  if (e == "clt" && c.replications < 1000)
    throw ConfigError("clt: need >= 1000 replications per t");
  if (e == "symdiff" && c.t_grid.size() < 2)
    throw ConfigError("symdiff: t_grid needs at least two values");
  if (e == "rxtail" && c.t_grid.front() < 1.0)
    throw ConfigError("rxtail: t must be >= 1");
}

bool ExperimentReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

ExperimentReport run_unbiasedness(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = "unbiasedness";
  ExperimentReport rep = make_report(cfg, cfg.compute_symdiff);
  for (const auto& s : rep.per_t) {
    rep.checks.push_back({"unbiasedness t=" + fmt_short(s.t), std::abs(s.z_score) <= 3.0,
                          "mean " + fmt_short(s.mean_volume) + " vs " +
                              fmt_short(cfg.target.volume()) + ", z = " +
                              fmt_short(s.z_score)});
  }
  leakage_check(rep);
  return rep;
}

SlopeFit fit_variance_exponent(const std::vector<double>& t_grid,
                               const std::vector<std::vector<double>>& samples,
                               int bootstrap, std::uint64_t seed) {
  if (t_grid.size() != samples.size() || t_grid.size() < 2)
    throw std::invalid_argument("fit_variance_exponent: need >= 2 grid points");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double v = sample_variance(samples[i]);
    if (!(v > 0.0)) throw std::domain_error("fit_variance_exponent: zero variance");
    x.push_back(std::log(t_grid[i]));
    y.push_back(std::log(v));
  }
  const LinearFit f = fit_line(x, y);
  SlopeFit out;
  out.slope = f.slope;
  out.intercept = f.intercept;
  out.slope_se = f.slope_se;
  if (bootstrap <= 0) {
    out.ci_low = f.slope - 1.96 * f.slope_se;
    out.ci_high = f.slope + 1.96 * f.slope_se;
    return out;
  }
  CounterRng rng(seed);
  std::vector<double> slopes;
  slopes.reserve(bootstrap);
  std::vector<double> resample;
  for (int b = 0; b < bootstrap; ++b) {
    std::vector<double> yb;
    for (const auto& s : samples) {
      resample.resize(s.size());
      for (auto& v : resample) v = s[std::size_t(rng.uniform() * s.size()) % s.size()];
      yb.push_back(std::log(std::max(sample_variance(resample), 1e-300)));
    }
    slopes.push_back(fit_line(x, yb).slope);
  }
  std::sort(slopes.begin(), slopes.end());
  auto quantile = [&](double q) {
    const double pos = q * (slopes.size() - 1);
    const std::size_t lo = std::size_t(pos);
    const std::size_t hi = std::min(lo + 1, slopes.size() - 1);
    return slopes[lo] + (pos - lo) * (slopes[hi] - slopes[lo]);
  };
  out.ci_low = quantile(0.025);
  out.ci_high = quantile(0.975);
  return out;
}

ExperimentReport run_variance_scaling(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = "variance";
  ExperimentReport rep = make_report(cfg, cfg.compute_symdiff);
  std::vector<std::vector<double>> samples;
  for (double t : cfg.t_grid) samples.push_back(volumes_at(rep.records, t));
  const SlopeFit f = fit_variance_exponent(cfg.t_grid, samples, cfg.bootstrap,
                                           split_seed(cfg.seed, 0xb007));
  const double target = -1.0 - 1.0 / rep.d;
  rep.fits["slope"] = f.slope;
  rep.fits["slope_se"] = f.slope_se;
  rep.fits["slope_ci_low"] = f.ci_low;
  rep.fits["slope_ci_high"] = f.ci_high;
  rep.fits["intercept"] = f.intercept;
  rep.fits["target_slope"] = target;
  const bool ok = f.slope >= target - cfg.slope_tolerance && f.slope <= target + cfg.slope_tolerance;
  rep.checks.push_back({"variance_exponent", ok,
                        "slope " + fmt_short(f.slope) + " (95% CI " + fmt_short(f.ci_low) +
                            ", " + fmt_short(f.ci_high) + "), accepted band [" +
                            fmt_short(target - cfg.slope_tolerance) + ", " +
                            fmt_short(target + cfg.slope_tolerance) + "]"});
  leakage_check(rep);
  return rep;
}

bool monotone_with_one_inversion(const std::vector<double>& values, double tolerance,
                                 int* inversions) {
  int count = 0;
  bool within = true;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (values[i + 1] > values[i]) {
      ++count;
      if (values[i + 1] - values[i] > tolerance) within = false;
    }
  }
  if (inversions) *inversions = count;
  return count <= 1 && within;
}

ExperimentReport run_clt(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = "clt";
  ExperimentReport rep = make_report(cfg, cfg.compute_symdiff);
  std::vector<double> ks;
  for (const auto& s : rep.per_t) ks.push_back(s.ks);
  // 95% band of the Kolmogorov statistic at this sample size.
  const double tol = 1.358 / std::sqrt(double(cfg.replications));
  int inversions = 0;
  const bool mono = monotone_with_one_inversion(ks, tol, &inversions);
  std::string seq;
  for (double k : ks) seq += (seq.empty() ? "" : ", ") + fmt_short(k);
  rep.fits["ks_tolerance"] = tol;
  rep.fits["ks_inversions"] = inversions;
  rep.fits["ks_last"] = ks.back();
  rep.checks.push_back({"ks_monotone", mono,
                        "d_K = [" + seq + "], " + std::to_string(inversions) +
                            " increase(s), tolerance " + fmt_short(tol)});
  rep.checks.push_back({"ks_largest_t", ks.back() <= cfg.ks_threshold,
                        "d_K(t=" + fmt_short(cfg.t_grid.back()) + ") = " +
                            fmt_short(ks.back()) + " vs " + fmt_short(cfg.ks_threshold)});
  leakage_check(rep);
  return rep;
}

ExperimentReport run_symdiff_scaling(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = "symdiff";
  cfg.compute_symdiff = true;
  ExperimentReport rep = make_report(cfg, true);
  const int d = rep.d;
  const auto& pt = rep.per_t;

  std::vector<double> x, y, w;
  for (const auto& s : pt) {
    x.push_back(std::pow(s.t, -1.0 / d));
    y.push_back(s.ratio);
    w.push_back(s.ratio_stderr > 0 ? 1.0 / (s.ratio_stderr * s.ratio_stderr) : 1.0);
  }
  const LinearFit f = fit_line(x, y, w);
  rep.fits["limit"] = f.intercept;
  rep.fits["limit_se"] = f.intercept_se;
  rep.fits["correction_slope"] = f.slope;

  const std::size_t n = pt.size();
  const double change = n >= 2 ? std::abs(pt[n - 1].ratio / pt[n - 2].ratio - 1.0) : 0.0;
  rep.fits["last_relative_change"] = change;
  rep.checks.push_back({"stabilization", n >= 2 && change <= 0.10,
                        "relative change over the last step " + fmt_short(change)});

  const McEstimate c = estimate_c_d(d, cfg.constant_samples, split_seed(cfg.seed, 0xc0), cfg.workers);
  const CdBounds b = c_d_bounds(d);
  rep.fits["c_hat"] = c.value;
  rep.fits["c_hat_se"] = c.stderr_;
  rep.fits["c_lower"] = b.lower;
  rep.fits["c_upper"] = b.upper;
  rep.fits["c_voronoi"] = c_d_voronoi(d);
  const double se = std::hypot(f.intercept_se, c.stderr_);
  const double z = se > 0 ? (f.intercept - c.value) / se : 0.0;
  rep.fits["limit_z"] = z;
  rep.checks.push_back({"limit_vs_c_hat", std::abs(z) <= 3.0,
                        "fitted limit " + fmt_short(f.intercept) + " +- " +
                            fmt_short(f.intercept_se) + " vs c_hat " + fmt_short(c.value) +
                            " +- " + fmt_short(c.stderr_) + ", z = " + fmt_short(z)});
  rep.checks.push_back({"c_hat_in_bounds", c.value >= b.lower && c.value <= b.upper,
                        "c_hat " + fmt_short(c.value) + " in [" + fmt_short(b.lower) + ", " +
                            fmt_short(b.upper) + "]"});

  double worst = 0.0;
  for (const auto& s : pt) worst = std::max(worst, std::abs(s.balance_z));
  rep.checks.push_back({"inside_outside_balance", worst <= 3.0,
                        "max |z| of mean(outside) - mean(inside): " + fmt_short(worst)});
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(pt[i + 1].symdiff_mean < pt[i].symdiff_mean)) decreasing = false;
  rep.checks.push_back({"symdiff_decreasing", decreasing,
                        "mean symmetric difference decreases along the t grid"});
  leakage_check(rep);
  return rep;
}

namespace {

template <int D>
double origin_circumradius(double t, double tail_mass, std::uint64_t seed) {
  const std::vector<double> zero(D, 0.0);
  const double m = padding_margin(zero, zero, t, tail_mass);
  Window<D> w;
  w.lower.fill(-m);
  w.upper.fill(m);
  w.margin = m;
  PointSample<D> s = sample_poisson<D>(w, t, seed);
  for (int attempt = 0;; ++attempt) {
    std::vector<Vec<D>> pts = s.points;
    pts.push_back(Vec<D>{});
    const int origin = int(pts.size()) - 1;
    const bool enough = pts.size() >= std::size_t(D + 1);
    double r0 = 0.0;
    bool leak = !enough;
    if (enough) {
      const Triangulation<D> tri = triangulate<D>(std::span<const Vec<D>>(pts));
      bool incident = false;
      for (std::size_t c = 0; c < tri.size(); ++c) {
        const auto& v = tri.vertices(c);
        if (std::find(v.begin(), v.end(), origin) == v.end()) continue;
        incident = true;
        const Simplex<D>& sx = tri.simplex(c);
        r0 = std::max(r0, sx.circumradius);
        if (!w.contains(sx.circumcenter) ||
            w.distance_to_boundary(sx.circumcenter) < sx.circumradius)
          leak = true;
        for (int i = 0; i <= D; ++i)
          if (tri.neighbors(c)[i] < 0 && v[i] != origin) leak = true;  // origin on hull
      }
      if (!incident) leak = true;
    }
    if (!leak) return r0;
    if (attempt == kMaxExtensions)
      throw std::runtime_error("origin cell still leaks after repeated window growth");
    w = inflate<D>(w, std::max(w.margin, std::pow(t, -1.0 / D)));
    s = extend_sample<D>(s, w, split_seed(seed, 0xe0 + std::uint64_t(attempt)));
  }
}

}  // namespace

double sample_origin_circumradius(int d, double t, double tail_mass, std::uint64_t seed) {
  switch (d) {
    case 2: return origin_circumradius<2>(t, tail_mass, seed);
    case 3: return origin_circumradius<3>(t, tail_mass, seed);
    case 4: return origin_circumradius<4>(t, tail_mass, seed);
    default: throw ConfigError("supported dimensions are 2, 3 and 4");
  }
}

ExperimentReport run_rx_tail(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = "rxtail";
  validate(cfg);
  ExperimentReport rep;
  rep.config = cfg;
  rep.d = cfg.target.dimension();
  const int d = rep.d;
  for (std::size_t ti = 0; ti < cfg.t_grid.size(); ++ti) {
    const double t = cfg.t_grid[ti];
    const std::uint64_t ts = split_seed(cfg.seed, ti);
    const auto r0 = parallel_map<double>(std::size_t(cfg.replications), cfg.workers,
                                         [&](std::size_t r) {
                                           return sample_origin_circumradius(
                                               d, t, cfg.tail_mass, split_seed(ts, r));
                                         });
    for (std::size_t r = 0; r < r0.size(); ++r) {
      Record rec;
      rec.experiment = cfg.experiment;
      rec.d = d;
      rec.t = t;
      rec.replication = int(r);
      rec.seed = split_seed(ts, r);
      rec.volume = r0[r];
      rep.records.push_back(rec);
    }
    const double unit = std::pow(t * kappa(d), -1.0 / d);
    for (int k : cfg.rx_k)
      for (double ss : cfg.rx_s) {
        RxRow row;
        row.t = t;
        row.k = k;
        row.s_scaled = ss;
        row.s = ss * unit;
        std::vector<double> x(r0.size());
        for (std::size_t r = 0; r < r0.size(); ++r)
          x[r] = r0[r] >= row.s ? std::pow(r0[r], k) : 0.0;
        row.empirical = mean(x);
        row.stderr_ = std::sqrt(sample_variance(x) / double(x.size()));
        row.bound = rx_tail_bound(d, k, row.s, t);
        const double rel = row.empirical > 0 ? row.stderr_ / row.empirical : 0.0;
        row.passed = row.empirical <= row.bound * (1.0 + 3.0 * rel);
        rep.rx.push_back(row);
      }
  }
  int failures = 0;
  for (const auto& row : rep.rx) failures += !row.passed;
  rep.checks.push_back({"rx_tail_bound", failures == 0,
                        std::to_string(rep.rx.size() - failures) + " of " +
                            std::to_string(rep.rx.size()) + " (t, k, s) cells within the bound"});
  return rep;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const std::string& e = config.experiment;
  if (e == "unbiasedness") return run_unbiasedness(config);
  if (e == "variance") return run_variance_scaling(config);
  if (e == "clt") return run_clt(config);
  if (e == "symdiff") return run_symdiff_scaling(config);
  if (e == "rxtail") return run_rx_tail(config);
  throw ConfigError("unknown experiment '" + e + "'");
}

EstimateResult run_estimate(const ExperimentConfig& config) {
  ExperimentConfig cfg = config;
  cfg.experiment = "estimate";
  validate(cfg);
  EstimateResult res;
  res.d = cfg.target.dimension();
  res.t = cfg.t_grid.front();
  res.seed = cfg.seed;
  res.target_volume = cfg.target.volume();

  auto single = [&](auto dim) {
    constexpr int D = decltype(dim)::value;
    const Window<D> w = padded_window<D>(cfg.target, res.t, cfg.tail_mass);
    const SymdiffOptions* sd = cfg.compute_symdiff ? &cfg.symdiff : nullptr;
    const Outcome o =
        evaluate<D>(sample_poisson<D>(w, res.t, cfg.seed), cfg.target, sd, cfg.seed);
    res.points = o.points;
    res.cells = o.cells;
    res.selected = o.selected;
    res.volume = o.volume;
    res.leakage = o.leakage;
    res.symdiff = o.symdiff;
  };
  switch (res.d) {
    case 2: single(std::integral_constant<int, 2>{}); break;
    case 3: single(std::integral_constant<int, 3>{}); break;
    case 4: single(std::integral_constant<int, 4>{}); break;
    default: throw ConfigError("supported dimensions are 2, 3 and 4");
  }

  if (cfg.pilot_replications >= 2) {
    ExperimentConfig pilot = cfg;
    pilot.t_grid = {res.t};
    pilot.replications = cfg.pilot_replications;
    pilot.seed = split_seed(cfg.seed, 0x9110);
    pilot.coupled = false;
    const auto recs = simulate_dispatch(pilot, false);
    std::vector<double> v;
    for (const auto& r : recs) v.push_back(r.volume);
    res.pilot_stddev = std::sqrt(sample_variance(v));
    if (res.pilot_stddev > 0)
      res.z_score = (res.volume - res.target_volume) / res.pilot_stddev;
  }
  return res;
}

std::string records_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "experiment,d,t,replication,seed,volume,symdiff,symdiff_stderr,leakage,"
        "symdiff_outside,symdiff_inside\n";
  for (const auto& r : report.records) {
    os << r.experiment << ',' << r.d << ',' << fmt(r.t) << ',' << r.replication << ','
       << r.seed << ',' << fmt(r.volume) << ',';
    if (r.symdiff)
      os << fmt(r.symdiff->value) << ',' << fmt(r.symdiff->stderr_) << ',';
    else
      os << ",,";
    os << r.leakage << ',';
    if (r.symdiff)
      os << fmt(r.symdiff->outside) << ',' << fmt(r.symdiff->inside);
    else
      os << ',';
    os << '\n';
  }
  return os.str();
}

std::string summary_json(const ExperimentReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["experiment"] = report.config.experiment;
  j["dimension"] = report.d;
  j["config"] = config_to_json(report.config);
  j["target"] = {{"kind", report.config.target.kind()},
                 {"volume", report.config.target.volume()},
                 {"perimeter", report.config.target.perimeter()},
                 {"inradius", report.config.target.inradius()}};
  j["records"] = report.records.size();
  ordered_json per_t = ordered_json::array();
  for (const auto& s : report.per_t) {
    ordered_json e;
    e["t"] = s.t;
    e["n"] = s.n;
    e["mean_volume"] = s.mean_volume;
    e["stderr_volume"] = s.stderr_volume;
    e["variance_volume"] = s.variance_volume;
    e["z_score"] = s.z_score;
    e["ks"] = s.ks;
    if (report.config.compute_symdiff || report.config.experiment == "symdiff") {
      e["symdiff_mean"] = s.symdiff_mean;
      e["symdiff_stderr"] = s.symdiff_stderr;
      e["ratio"] = s.ratio;
      e["ratio_stderr"] = s.ratio_stderr;
      e["outside_mean"] = s.outside_mean;
      e["inside_mean"] = s.inside_mean;
      e["balance_z"] = s.balance_z;
    }
    e["leaky_replications"] = s.leaky_replications;
    per_t.push_back(e);
  }
  j["per_t"] = per_t;
  ordered_json fits = ordered_json::object();
  for (const auto& [k, v] : report.fits) fits[k] = v;
  j["fits"] = fits;
  if (!report.rx.empty()) {
    ordered_json rx = ordered_json::array();
    for (const auto& r : report.rx)
      rx.push_back({{"t", r.t},
                    {"k", r.k},
                    {"s_scaled", r.s_scaled},
                    {"s", r.s},
                    {"empirical", r.empirical},
                    {"stderr", r.stderr_},
                    {"bound", r.bound},
                    {"passed", r.passed}});
    j["rx"] = rx;
  }
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  j["passed"] = report.passed();
  return j.dump(2) + "\n";
}

void write_outputs(const ExperimentReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream f(fs::path(dir) / "records.csv", std::ios::binary);
    f << records_csv(report);
    if (!f) throw std::runtime_error("cannot write records.csv in " + dir);
  }
  std::ofstream f(fs::path(dir) / "summary.json", std::ios::binary);
  f << summary_json(report);
  if (!f) throw std::runtime_error("cannot write summary.json in " + dir);
}

std::string plot_series_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "series,x,y,err\n";
  const std::string& e = report.config.experiment;
  for (const auto& s : report.per_t) {
    if (e == "unbiasedness" || e == "estimate")
      os << "mean_volume," << fmt(s.t) << ',' << fmt(s.mean_volume) << ','
         << fmt(s.stderr_volume) << '\n';
    if (e == "variance")
      os << "log_variance," << fmt(std::log(s.t)) << ',' << fmt(std::log(s.variance_volume))
         << ",\n";
    if (e == "clt") os << "ks," << fmt(s.t) << ',' << fmt(s.ks) << ",\n";
    if (e == "symdiff")
      os << "ratio," << fmt(s.t) << ',' << fmt(s.ratio) << ',' << fmt(s.ratio_stderr) << '\n';
  }
  if (e == "variance" && report.fits.count("slope")) {
    for (const auto& s : report.per_t)
      os << "fit," << fmt(std::log(s.t)) << ','
         << fmt(report.fits.at("intercept") + report.fits.at("slope") * std::log(s.t))
         << ",\n";
  }
  for (const auto& r : report.rx)
    os << "rx_empirical_t" << fmt_short(r.t) << "_k" << r.k << ',' << fmt(r.s) << ','
       << fmt(r.empirical) << ',' << fmt(r.stderr_) << '\n'
       << "rx_bound_t" << fmt_short(r.t) << "_k" << r.k << ',' << fmt(r.s) << ','
       << fmt(r.bound) << ",\n";
  return os.str();
}

}  // namespace pdapprox
