#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pdapprox/cli.hpp"

using namespace pdapprox;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pdapprox");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pdapprox-cli-" + name);
}

std::string write_config(const std::string& name, const std::string& text) {
  const auto p = temp(name);
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST(Cli, ConstantsRowContainsKappa2) {
  const auto r = cli({"constants", "--d", "2", "--samples", "20000", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("d,kappa_d,S_dd1"), std::string::npos);
  EXPECT_NE(r.out.find("2,3.1415926535897931,"), std::string::npos) << r.out;
  const auto t = cli({"constants", "--d", "2", "--samples", "20000"});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("3.14159"), std::string::npos);
}

TEST(Cli, EstimatePrintsVolumeTargetAndZ) {
  const auto cfg = write_config("est.json", R"({"experiment": "estimate",
      "t_grid": [200], "pilot_replications": 8, "seed": 3})");
  const auto r = cli({"estimate", "--config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("volume estimate"), std::string::npos);
  EXPECT_NE(r.out.find("target volume    3.1415926535897931"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("z-score"), std::string::npos);
}

TEST(Cli, ExperimentVarianceWritesSlope) {
  const auto cfg = write_config("var.json", R"({"target": {"kind": "ball", "radius": 1.2},
      "t_grid": [180, 2880], "replications": 12, "bootstrap": 50})");
  const auto out = temp("var-out");
  const auto r = cli({"experiment", "variance", "--config", cfg, "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(out / "summary.json");
  const auto j = nlohmann::json::parse(f);
  EXPECT_TRUE(j["fits"].contains("slope"));
  EXPECT_TRUE(std::filesystem::exists(out / "records.csv"));
  std::filesystem::remove_all(out);
}

TEST(Cli, SeedAndWorkersOverride) {
  const auto cfg = write_config("seed.json", R"({"t_grid": [100], "replications": 6})");
  const auto a = temp("seed-a"), b = temp("seed-b");
  ASSERT_EQ(cli({"experiment", "unbiasedness", "--config", cfg, "--seed", "77", "--out",
                 a.string()})
                .code,
            0);
  ASSERT_EQ(cli({"experiment", "unbiasedness", "--config", cfg, "--seed", "77", "--workers",
                 "2", "--out", b.string()})
                .code,
            0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  };
  EXPECT_EQ(slurp(a / "records.csv"), slurp(b / "records.csv"));
  const auto j = nlohmann::json::parse(slurp(a / "summary.json"));
  EXPECT_EQ(j["config"]["seed"], 77);
  std::filesystem::remove_all(a);
  std::filesystem::remove_all(b);
}

TEST(Cli, InvalidConfigExitsOne) {
  const auto cfg = write_config("bad.json", "{\n  \"seed\": 1,\n  \"bogus\": true\n}");
  const auto r = cli({"estimate", "--config", cfg});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"estimate", "--config", "/nonexistent.json"}).code, 1);
  EXPECT_EQ(cli({"experiment", "nonsense"}).code, 1);
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"constants", "--d", "9"}).code, 1);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, 0); }

TEST(Cli, CheckSingleCriterion) {
  const auto r = cli({"check", "--criterion", "8"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS [8]"), std::string::npos);
}

TEST(Cli, PlotData) {
  const auto cfg = write_config("plot.json", R"({"t_grid": [100, 200], "replications": 5})");
  const auto r = cli({"plotdata", "--config", cfg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("series,x,y,err\n", 0), 0u);
  EXPECT_EQ(cli({"plotdata"}).code, 1);
}
