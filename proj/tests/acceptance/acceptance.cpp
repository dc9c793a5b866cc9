// Runs the ten acceptance criteria at their stated scales and prints one
// PASS/FAIL line per criterion. Exit status 0 only when all pass.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdapprox/acceptance.hpp"
#include "pdapprox/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int workers = pdapprox::workers_from_env(1);
  std::vector<int> only;
  app.add_option("--workers", workers)->check(CLI::PositiveNumber);
  app.add_option("--only", only, "criterion ids")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  pdapprox::AcceptanceOptions opt;
  opt.workers = workers;
  const auto ids = only.empty() ? pdapprox::all_criteria() : only;
  int failed = 0;
  double total = 0.0;
  for (int id : ids) {
    const auto r = pdapprox::run_criterion(id, opt);
    failed += !r.passed;
    total += r.seconds;
    std::cout << pdapprox::format_result(r) << std::endl;
  }
  std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria passed in " << total
            << " s" << std::endl;
  return failed == 0 ? 0 : 1;
}
