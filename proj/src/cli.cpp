#include "pdapprox/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdapprox/acceptance.hpp"
#include "pdapprox/config.hpp"
#include "pdapprox/constants.hpp"
#include "pdapprox/experiments.hpp"
#include "pdapprox/parallel.hpp"

namespace pdapprox {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string g6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out;
};

void add_common(CLI::App* sub, Common& c, bool with_out = true) {
  sub->add_option("--config", c.config, "JSON run configuration");
  sub->add_option("--seed", c.seed, "Override the base seed");
  sub->add_option("--workers", c.workers, "Worker threads (fallback: PD_APPROX_WORKERS)")
      ->check(CLI::PositiveNumber);
  if (with_out) sub->add_option("--out", c.out, "Output directory");
}

int resolve_workers(const Common& c, int config_value) {
  if (c.workers) return *c.workers;
  return workers_from_env(config_value);
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config.empty()) cfg = load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  cfg.workers = resolve_workers(c, cfg.workers);
  return cfg;
}

int cmd_estimate(const Common& c, std::ostream& out) {
  ExperimentConfig cfg = load(c);
  const EstimateResult r = run_estimate(cfg);
  out << "d = " << r.d << ", t = " << g6(r.t) << ", seed = " << r.seed << "\n";
  out << "points " << r.points << ", cells " << r.cells << ", selected " << r.selected
      << ", leakage " << r.leakage << "\n";
  out << "volume estimate  " << g17(r.volume) << "\n";
  out << "target volume    " << g17(r.target_volume) << "\n";
  out << "z-score          " << g6(r.z_score) << " (pilot stddev " << g6(r.pilot_stddev)
      << " over " << cfg.pilot_replications << " replications)\n";
  if (r.symdiff)
    out << "symmetric diff   " << g17(r.symdiff->value) << " +- " << g6(r.symdiff->stderr_)
        << "\n";
  const std::string dir = c.out.empty() ? cfg.output_dir : c.out;
  if (!dir.empty()) {
    nlohmann::ordered_json j;
    j["config"] = config_to_json(cfg);
    j["d"] = r.d;
    j["t"] = r.t;
    j["seed"] = r.seed;
    j["volume"] = r.volume;
    j["target_volume"] = r.target_volume;
    j["z_score"] = r.z_score;
    j["pilot_stddev"] = r.pilot_stddev;
    j["points"] = r.points;
    j["cells"] = r.cells;
    j["selected"] = r.selected;
    j["leakage"] = r.leakage;
    if (r.symdiff) {
      j["symdiff"] = r.symdiff->value;
      j["symdiff_stderr"] = r.symdiff->stderr_;
    }
    std::filesystem::create_directories(dir);
    std::ofstream f(std::filesystem::path(dir) / "estimate.json", std::ios::binary);
    f << j.dump(2) << "\n";
  }
  return 0;
}

int cmd_experiment(const std::string& name, const Common& c, std::ostream& out) {
  ExperimentConfig cfg = load(c);
  cfg.experiment = name;
  const ExperimentReport rep = run_experiment(cfg);
  std::string dir = c.out.empty() ? cfg.output_dir : c.out;
  if (dir.empty()) dir = "results/" + name;
  write_outputs(rep, dir);
  for (const auto& ck : rep.checks)
    out << (ck.passed ? "ok    " : "FAIL  ") << ck.name << ": " << ck.detail << "\n";
  for (const auto& [k, v] : rep.fits) out << k << " = " << g6(v) << "\n";
  out << "wrote " << (std::filesystem::path(dir) / "records.csv").string() << " and "
      << (std::filesystem::path(dir) / "summary.json").string() << "\n";
  return 0;
}

int cmd_constants(const std::vector<int>& dims, std::uint64_t samples, std::uint64_t seed,
                  int workers, const std::string& format, std::ostream& out) {
  struct Row {
    int d;
    double kappa, s1, s2, lower, upper, c_hat, c_se, voronoi;
  };
  std::vector<Row> rows;
  for (int d : dims) {
    const CdBounds b = c_d_bounds(d);
    const McEstimate c = estimate_c_d(d, samples, split_seed(seed, std::uint64_t(d)), workers);
    rows.push_back({d, kappa(d), simplex_moment(d, 1), simplex_moment(d, 2), b.lower,
                    b.upper, c.value, c.stderr_, c_d_voronoi(d)});
  }
  const std::vector<std::string> head{"d",       "kappa_d", "S_dd1",        "S_dd2",
                                      "c_lower", "c_upper", "c_hat",        "c_hat_stderr",
                                      "c_voronoi"};
  auto cells = [&](const Row& r) {
    return std::vector<std::string>{std::to_string(r.d), g17(r.kappa), g17(r.s1),
                                    g17(r.s2),           g17(r.lower), g17(r.upper),
                                    g17(r.c_hat),        g17(r.c_se),  g17(r.voronoi)};
  };
  if (format == "csv") {
    for (std::size_t i = 0; i < head.size(); ++i) out << (i ? "," : "") << head[i];
    out << "\n";
    for (const auto& r : rows) {
      const auto v = cells(r);
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
      out << "\n";
    }
  } else {
    std::vector<std::vector<std::string>> table{head};
    for (const auto& r : rows) {
      auto v = cells(r);
      for (std::size_t i = 1; i < v.size(); ++i) v[i] = g6(std::stod(v[i]));
      table.push_back(v);
    }
    std::vector<std::size_t> width(head.size(), 0);
    for (const auto& row : table)
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    for (const auto& row : table) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "  " : "") << std::setw(int(width[i])) << row[i];
      out << "\n";
    }
  }
  return 0;
}

int cmd_check(bool full, const std::vector<int>& only, const Common& c, std::ostream& out) {
  AcceptanceOptions opt;
  opt.workers = resolve_workers(c, 1);
  if (c.seed) opt.seed = *c.seed;
  const std::vector<int> ids = !only.empty() ? only : full ? all_criteria() : fast_criteria();
  int failed = 0;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, opt);
    failed += !r.passed;
    out << format_result(r) << std::endl;
  }
  out << (failed ? std::to_string(failed) + " criterion(s) failed" : "all criteria passed")
      << "\n";
  return failed ? 2 : 0;
}

int cmd_plotdata(const Common& c, std::ostream& out) {
  ExperimentConfig cfg = load(c);
  const ExperimentReport rep = run_experiment(cfg);
  const std::string csv = plot_series_csv(rep);
  if (c.out.empty()) {
    out << csv;
  } else {
    std::filesystem::create_directories(c.out);
    const auto path = std::filesystem::path(c.out) / (cfg.experiment + "_plot.csv");
    std::ofstream f(path, std::ios::binary);
    f << csv;
    out << "wrote " << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisson-Delaunay approximation of convex sets", "pdapprox"};
  app.require_subcommand(1);

  Common est_opts, exp_opts, chk_opts, plot_opts;
  auto* est = app.add_subcommand("estimate", "Single A_eta volume run at t_grid[0]");
  add_common(est, est_opts);

  std::string exp_name;
  auto* exp = app.add_subcommand("experiment", "Run an experiment and write records.csv and summary.json");
  exp->add_option("name", exp_name, "unbiasedness | variance | clt | symdiff | rxtail")
      ->required()
      ->check(CLI::IsMember({"unbiasedness", "variance", "clt", "symdiff", "rxtail"}));
  add_common(exp, exp_opts);

  std::vector<int> dims;
  std::uint64_t samples = 1'000'000;
  std::uint64_t const_seed = 1;
  std::optional<int> const_workers;
  std::string format = "text";
  auto* cons = app.add_subcommand("constants", "Table of dimension constants");
  cons->add_option("--d", dims, "Dimension(s), default 2 3 4")->check(CLI::Range(2, 4));
  cons->add_option("--samples", samples, "Monte Carlo samples for c_d")
      ->check(CLI::PositiveNumber);
  cons->add_option("--seed", const_seed, "Seed for the c_d estimate");
  cons->add_option("--workers", const_workers, "Worker threads")->check(CLI::PositiveNumber);
  cons->add_option("--format", format, "csv or text")
      ->check(CLI::IsMember({"csv", "text"}));

  bool full = false;
  std::vector<int> only;
  auto* chk = app.add_subcommand("check", "Acceptance criteria (fast subset by default)");
  chk->add_flag("--full", full, "Run all ten criteria");
  chk->add_option("--criterion", only, "Run only the given criterion ids")
      ->check(CLI::Range(1, 10));
  add_common(chk, chk_opts, false);

  auto* plot = app.add_subcommand("plotdata", "Per-experiment x/y series as CSV");
  add_common(plot, plot_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*est) return cmd_estimate(est_opts, out);
    if (*exp) return cmd_experiment(exp_name, exp_opts, out);
    if (*cons) {
      if (dims.empty()) dims = {2, 3, 4};
      const int w = const_workers ? *const_workers : workers_from_env(1);
      return cmd_constants(dims, samples, const_seed, w, format, out);
    }
    if (*chk) return cmd_check(full, only, chk_opts, out);
    if (*plot) {
      if (plot_opts.config.empty()) throw ConfigError("plotdata needs --config");
      return cmd_plotdata(plot_opts, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace pdapprox
