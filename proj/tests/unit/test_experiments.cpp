#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pdapprox/experiments.hpp"
#include "pdapprox/stats.hpp"

using namespace pdapprox;

namespace {

ExperimentConfig small(const std::string& name) {
  ExperimentConfig c;
  c.experiment = name;
  c.t_grid = {100.0};
  c.replications = 20;
  c.seed = 3;
  return c;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Validate, RejectsBrokenConfigs) {
  auto c = small("unbiasedness");
  EXPECT_NO_THROW(validate(c));
  c.t_grid = {200, 100};
  EXPECT_THROW(validate(c), ConfigError);
  c = small("nope");
  EXPECT_THROW(validate(c), ConfigError);
  c = small("variance");
  c.t_grid = {300, 600};
  EXPECT_THROW(validate(c), ConfigError);  // spans less than 16
  c.t_grid = {100, 2000};
  EXPECT_THROW(validate(c), ConfigError);  // below (8d/r_A)^d = 256
  c.t_grid = {300, 6000};
  EXPECT_NO_THROW(validate(c));
  c = small("clt");
  c.t_grid = {300};
  EXPECT_THROW(validate(c), ConfigError);  // needs R >= 1000
  c = small("rxtail");
  c.t_grid = {0.5};
  EXPECT_THROW(validate(c), ConfigError);
  c = small("unbiasedness");
  c.target = TargetSet::ball({0, 0, 0, 0, 0}, 1.0);
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Unbiasedness, RecordsAndSummary) {
  auto c = small("unbiasedness");
  c.t_grid = {100, 200};
  c.target = TargetSet::box({0, 0}, {1, 1});
  const auto rep = run_unbiasedness(c);
  ASSERT_EQ(rep.records.size(), 40u);
  EXPECT_EQ(rep.records[0].t, 100.0);
  EXPECT_EQ(rep.records[20].t, 200.0);
  // Aggregates recomputable from the records.
  std::vector<double> v;
  for (int i = 0; i < 20; ++i) v.push_back(rep.records[i].volume);
  EXPECT_EQ(rep.per_t[0].mean_volume, mean(v));
  EXPECT_EQ(rep.per_t[0].variance_volume, sample_variance(v));
  const auto csv = lines(records_csv(rep));
  ASSERT_EQ(csv.size(), 41u);
  EXPECT_EQ(csv[0],
            "experiment,d,t,replication,seed,volume,symdiff,symdiff_stderr,leakage,"
            "symdiff_outside,symdiff_inside");
}

TEST(Unbiasedness, DoublingReplicationsShrinksStderr) {
  auto c = small("unbiasedness");
  c.replications = 200;
  const double a = run_unbiasedness(c).per_t[0].stderr_volume;
  c.replications = 800;
  const double b = run_unbiasedness(c).per_t[0].stderr_volume;
  EXPECT_NEAR(a / b, 2.0, 0.4);
}

TEST(Unbiasedness, WorkerCountDoesNotChangeRecords) {
  auto c = small("unbiasedness");
  c.compute_symdiff = true;
  c.symdiff.inside_samples = 1 << 10;
  const auto a = records_csv(run_unbiasedness(c));
  c.workers = 3;
  EXPECT_EQ(a, records_csv(run_unbiasedness(c)));
}

TEST(Unbiasedness, CoupledGridKeepsMarginals) {
  auto c = small("unbiasedness");
  c.t_grid = {50, 100, 200};
  c.replications = 200;
  c.coupled = true;
  const auto rep = run_unbiasedness(c);
  for (const auto& s : rep.per_t) EXPECT_LT(std::abs(s.z_score), 3.5) << s.t;
}

TEST(VarianceFit, ExactPowerLaw) {
  const std::vector<double> t{250, 500, 1000, 2000, 4000};
  std::vector<std::vector<double>> samples;
  for (double x : t) {
    const double sd = std::sqrt(2.0 * std::pow(x, -1.5));
    samples.push_back({-sd, sd});  // sample variance 2 sd^2 = 4 t^{-1.5}
  }
  const SlopeFit f = fit_variance_exponent(t, samples, 0, 1);
  EXPECT_NEAR(f.slope, -1.5, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(4.0), 1e-10);
}

TEST(VarianceFit, BootstrapIntervalCoversSlope) {
  CounterRng rng(1);
  const std::vector<double> t{250, 500, 1000, 2000, 4000};
  std::vector<std::vector<double>> samples;
  for (double x : t) {
    std::vector<double> s;
    for (int i = 0; i < 400; ++i) s.push_back(std::pow(x, -0.75) * rng.normal());
    samples.push_back(s);
  }
  const SlopeFit f = fit_variance_exponent(t, samples, 500, 2);
  EXPECT_LT(f.ci_low, f.slope);
  EXPECT_GT(f.ci_high, f.slope);
  EXPECT_LT(f.ci_low, -1.5);
  EXPECT_GT(f.ci_high, -1.5);
}

TEST(VarianceScaling, ThreeDimensionalSmokeRun) {
  // The variance experiment itself requires t >= (8d/r_A)^d, which costs
  // millions of points per replication in d = 3; the smoke run feeds the
  // fit with unbiasedness replications at small t instead.
  ExperimentConfig c;
  c.experiment = "unbiasedness";
  c.target = TargetSet::ball({0, 0, 0}, 1.0);
  c.t_grid = {50, 800};
  c.replications = 60;
  c.seed = 4;
  const auto rep = run_unbiasedness(c);
  std::vector<std::vector<double>> samples;
  for (double t : c.t_grid) {
    std::vector<double> v;
    for (const auto& r : rep.records)
      if (r.t == t) v.push_back(r.volume);
    samples.push_back(v);
  }
  const SlopeFit f = fit_variance_exponent(c.t_grid, samples, 200, 5);
  EXPECT_NEAR(f.slope, -4.0 / 3, 0.6);
  EXPECT_LT(f.ci_low, f.ci_high);
}

TEST(Monotone, OneInversionWithinTolerance) {
  int inv = 0;
  EXPECT_TRUE(monotone_with_one_inversion({0.05, 0.04, 0.03, 0.02}, 0.01, &inv));
  EXPECT_EQ(inv, 0);
  EXPECT_TRUE(monotone_with_one_inversion({0.05, 0.04, 0.045, 0.02}, 0.01, &inv));
  EXPECT_EQ(inv, 1);
  EXPECT_FALSE(monotone_with_one_inversion({0.05, 0.04, 0.07, 0.02}, 0.01));
  EXPECT_FALSE(monotone_with_one_inversion({0.05, 0.051, 0.03, 0.031}, 0.01, &inv));
  EXPECT_EQ(inv, 2);
}

TEST(RxTail, OriginCircumradiusIsPositiveAndScales) {
  RunningStats a, b;
  for (std::uint64_t r = 0; r < 200; ++r) {
    a.add(sample_origin_circumradius(2, 10, 1e-6, split_seed(1, r)));
    b.add(sample_origin_circumradius(2, 1000, 1e-6, split_seed(2, r)));
  }
  EXPECT_GT(b.mean(), 0.0);
  // r_0 scales as t^{-1/2} in the plane.
  EXPECT_NEAR(a.mean() / b.mean(), 10.0, 1.5);
}

TEST(RxTail, EmpiricalBelowBound) {
  auto c = small("rxtail");
  c.t_grid = {1.0, 10.0};
  c.replications = 300;
  const auto rep = run_rx_tail(c);
  EXPECT_EQ(rep.rx.size(), 2u * 4 * 5);
  for (const auto& row : rep.rx) {
    if (row.k == 0 && row.s == 0) EXPECT_EQ(row.empirical, 1.0);
    EXPECT_TRUE(row.passed) << row.t << ' ' << row.k << ' ' << row.s_scaled;
  }
  EXPECT_EQ(rep.records.size(), 600u);
}

TEST(Symdiff, SmallRunProducesRatiosAndChecks) {
  ExperimentConfig c;
  c.experiment = "symdiff";
  c.t_grid = {100, 200};
  c.replications = 10;
  c.symdiff.inside_samples = 1 << 12;
  c.constant_samples = 100000;
  const auto rep = run_symdiff_scaling(c);
  ASSERT_EQ(rep.per_t.size(), 2u);
  for (const auto& s : rep.per_t) {
    EXPECT_GT(s.ratio, 0.1);
    EXPECT_LT(s.ratio, 2.0);
  }
  EXPECT_TRUE(rep.fits.count("limit"));
  EXPECT_TRUE(rep.fits.count("c_hat"));
  for (const auto& r : rep.records) ASSERT_TRUE(r.symdiff.has_value());
}

TEST(Symdiff, ScaledTargetGivesComparableRatio) {
  ExperimentConfig c;
  c.experiment = "symdiff";
  c.t_grid = {200, 400};
  c.replications = 30;
  c.symdiff.inside_samples = 1 << 12;
  c.constant_samples = 100000;
  const auto a = run_symdiff_scaling(c);
  c.target = TargetSet::ball({0, 0}, 2.0);
  c.seed = 9;
  const auto b = run_symdiff_scaling(c);
  const auto& x = a.per_t.back();
  const auto& y = b.per_t.back();
  EXPECT_LT(std::abs(x.ratio - y.ratio), 4 * std::hypot(x.ratio_stderr, y.ratio_stderr) + 0.05);
}

TEST(Outputs, SummaryJsonHasFitsAndConfigEcho) {
  auto c = small("unbiasedness");
  const auto rep = run_unbiasedness(c);
  const auto j = nlohmann::json::parse(summary_json(rep));
  EXPECT_EQ(j["experiment"], "unbiasedness");
  EXPECT_EQ(j["records"], 20);
  EXPECT_EQ(j["config"]["seed"], 3);
  EXPECT_TRUE(j["checks"].is_array());
  const auto dir = std::filesystem::temp_directory_path() / "pdapprox-test-outputs";
  write_outputs(rep, dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "records.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "summary.json"));
  std::filesystem::remove_all(dir);
}

TEST(Outputs, PlotSeries) {
  auto c = small("unbiasedness");
  const auto csv = lines(plot_series_csv(run_unbiasedness(c)));
  ASSERT_EQ(csv.size(), 2u);
  EXPECT_EQ(csv[0], "series,x,y,err");
  EXPECT_EQ(csv[1].rfind("mean_volume,100,", 0), 0u);
}

TEST(Estimate, ReportsZScore) {
  auto c = small("estimate");
  c.t_grid = {300};
  c.pilot_replications = 16;
  c.compute_symdiff = true;
  const auto r = run_estimate(c);
  EXPECT_EQ(r.d, 2);
  EXPECT_NEAR(r.target_volume, M_PI, 1e-15);
  EXPECT_GT(r.pilot_stddev, 0.0);
  EXPECT_NEAR(r.z_score, (r.volume - M_PI) / r.pilot_stddev, 1e-12);
  ASSERT_TRUE(r.symdiff.has_value());
  EXPECT_GT(r.points, 100u);
}
