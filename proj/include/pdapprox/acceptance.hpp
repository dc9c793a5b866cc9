#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace pdapprox {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int workers = 1;
  std::uint64_t seed = 20240601;
};

CriterionResult criterion_unbiasedness(const AcceptanceOptions& opt);
CriterionResult criterion_variance_exponent(const AcceptanceOptions& opt);
CriterionResult criterion_clt(const AcceptanceOptions& opt);
CriterionResult criterion_symdiff_limit(const AcceptanceOptions& opt);
CriterionResult criterion_constants(const AcceptanceOptions& opt);
CriterionResult criterion_blaschke_petkantschin(const AcceptanceOptions& opt);
CriterionResult criterion_delaunay(const AcceptanceOptions& opt);
CriterionResult criterion_simplex_lemma(const AcceptanceOptions& opt);
CriterionResult criterion_rx_tail(const AcceptanceOptions& opt);
CriterionResult criterion_determinism(const AcceptanceOptions& opt);

/// Runs criterion `id` (1..10).
CriterionResult run_criterion(int id, const AcceptanceOptions& opt);

/// Criteria that finish in about a minute: 5..10.
std::vector<int> fast_criteria();
std::vector<int> all_criteria();

/// "PASS [id] name (Xs): detail" / "FAIL ...".
std::string format_result(const CriterionResult& r);

/// Brute-force convex hull volume (area in 2D) used as an oracle for the
/// Delaunay volume conservation check. 2D: monotone chain. 3D: enumeration of
/// supporting facet triples, O(n^4); intended for n <= ~100 points in
/// general position.
double hull_area_2d(std::vector<std::array<double, 2>> pts);
double hull_volume_3d(const std::vector<std::array<double, 3>>& pts);

}  // namespace pdapprox
