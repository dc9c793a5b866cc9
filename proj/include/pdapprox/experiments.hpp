#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pdapprox/approximation.hpp"
#include "pdapprox/point_process.hpp"
#include "pdapprox/target_sets.hpp"

namespace pdapprox {

/// Raised for configuration invariant violations (exit code 1 at the CLI).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct ExperimentConfig {
  /// unbiasedness | variance | clt | symdiff | rxtail | estimate
  std::string experiment = "unbiasedness";
  TargetSet target = TargetSet::ball({0.0, 0.0}, 1.0);
  std::vector<double> t_grid{500.0};
  int replications = 1000;
  std::uint64_t seed = 1;
  double tail_mass = 1e-6;
  SymdiffOptions symdiff;
  /// Estimate the symmetric difference in every replication (always on for
  /// the symdiff experiment).
  bool compute_symdiff = false;
  /// Couple the t grid by thinning one marked process of intensity max(t):
  /// each t keeps its exact Poisson marginal, and replications at different t
  /// share randomness, which reduces the noise of comparisons across t.
  bool coupled = false;
  int workers = 1;
  /// Pilot replications used by `estimate` for its z-score.
  int pilot_replications = 32;

  // rxtail: moments k and thresholds s in units of (t kappa_d)^{-1/d}.
  std::vector<int> rx_k{0, 1, 2, 4};
  std::vector<double> rx_s{0.0, 0.5, 1.0, 1.5, 2.0};

  // variance: bootstrap resamples for the slope CI; pass band half-width
  // around the exponent -(1 + 1/d).
  int bootstrap = 1000;
  double slope_tolerance = 0.15;

  // clt: Kolmogorov threshold at the largest t.
  double ks_threshold = 0.05;

  // symdiff: Monte Carlo samples for the c_d estimate used as comparison.
  std::uint64_t constant_samples = 10'000'000;

  std::string output_dir;
};

/// Checks the config invariants for its experiment; throws ConfigError.
void validate(const ExperimentConfig& config);

struct Record {
  std::string experiment;
  int d = 2;
  double t = 0.0;
  int replication = 0;
  std::uint64_t seed = 0;
  /// lambda_d(A_eta), or r_0 for rxtail.
  double volume = 0.0;
  std::optional<SymdiffEstimate> symdiff;
  std::size_t leakage = 0;
};

struct TSummary {
  double t = 0.0;
  std::size_t n = 0;
  double mean_volume = 0.0;
  double stderr_volume = 0.0;
  double variance_volume = 0.0;
  double z_score = 0.0;
  double ks = 0.0;
  double symdiff_mean = 0.0;
  double symdiff_stderr = 0.0;
  /// t^{1/d} E symdiff / Per(A) and its standard error.
  double ratio = 0.0;
  double ratio_stderr = 0.0;
  double outside_mean = 0.0;
  double inside_mean = 0.0;
  /// (mean outside - mean inside) / stderr of the difference.
  double balance_z = 0.0;
  std::size_t leaky_replications = 0;
};

struct RxRow {
  double t = 0.0;
  int k = 0;
  /// Threshold in units of (t kappa_d)^{-1/d} and in absolute length.
  double s_scaled = 0.0;
  double s = 0.0;
  double empirical = 0.0;
  double stderr_ = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  int d = 2;
  std::vector<Record> records;
  std::vector<TSummary> per_t;
  std::map<std::string, double> fits;
  std::vector<RxRow> rx;
  std::vector<Check> checks;

  bool passed() const;
};

ExperimentReport run_unbiasedness(const ExperimentConfig& config);
ExperimentReport run_variance_scaling(const ExperimentConfig& config);
ExperimentReport run_clt(const ExperimentConfig& config);
ExperimentReport run_symdiff_scaling(const ExperimentConfig& config);
ExperimentReport run_rx_tail(const ExperimentConfig& config);

/// Dispatches on config.experiment.
ExperimentReport run_experiment(const ExperimentConfig& config);

struct EstimateResult {
  int d = 2;
  double t = 0.0;
  std::uint64_t seed = 0;
  double volume = 0.0;
  double target_volume = 0.0;
  std::size_t leakage = 0;
  std::size_t points = 0;
  std::size_t cells = 0;
  std::size_t selected = 0;
  double pilot_stddev = 0.0;
  double z_score = 0.0;
  std::optional<SymdiffEstimate> symdiff;
};

/// One A_eta run at t_grid[0] plus pilot replications for the z-score.
EstimateResult run_estimate(const ExperimentConfig& config);

/// records.csv text: RFC-4180 style with a header row.
std::string records_csv(const ExperimentReport& report);
/// summary.json text (config echo, aggregates, fits, checks).
std::string summary_json(const ExperimentReport& report);
/// Writes records.csv and summary.json into `dir` (created if needed).
void write_outputs(const ExperimentReport& report, const std::string& dir);

/// Per-experiment x/y series for plotting, CSV with header "series,x,y,err".
std::string plot_series_csv(const ExperimentReport& report);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// OLS of log(variance) on log(t); bootstrap percentile CI (95%) from
/// resampling replications within each t. `samples[i]` holds the volumes at
/// t_grid[i]. With bootstrap == 0 the CI is slope +- 1.96 se.
SlopeFit fit_variance_exponent(const std::vector<double>& t_grid,
                               const std::vector<std::vector<double>>& samples,
                               int bootstrap, std::uint64_t seed);

/// Monotone-decrease check for a sequence with a per-step noise tolerance:
/// passes when at most one increase occurs and that increase is <= tolerance.
bool monotone_with_one_inversion(const std::vector<double>& values,
                                 double tolerance, int* inversions = nullptr);

/// Circumradius r_0 of the Voronoi cell of a point added at the origin to a
/// Poisson process of intensity t (max circumradius of the Delaunay cells
/// incident to the origin).
double sample_origin_circumradius(int d, double t, double tail_mass,
                                  std::uint64_t seed);

}  // namespace pdapprox
