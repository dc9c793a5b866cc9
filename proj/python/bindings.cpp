#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pdapprox/approximation.hpp"
#include "pdapprox/config.hpp"
#include "pdapprox/constants.hpp"
#include "pdapprox/delaunay.hpp"
#include "pdapprox/experiments.hpp"

namespace py = pybind11;
using namespace pdapprox;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

template <int D>
std::vector<Vec<D>> to_points(const Array& a) {
  auto r = a.unchecked<2>();
  std::vector<Vec<D>> p(std::size_t(r.shape(0)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i)
    for (int k = 0; k < D; ++k) p[i][k] = r(i, k);
  return p;
}

int dim_of(const Array& a) {
  if (a.ndim() != 2) throw std::invalid_argument("points must be an (n, d) array");
  const int d = int(a.shape(1));
  if (d < 2 || d > 4) throw std::invalid_argument("supported dimensions are 2, 3 and 4");
  return d;
}

template <int D>
py::dict triangulate_impl(const Array& a) {
  const auto pts = to_points<D>(a);
  const auto tri = triangulate<D>(std::span<const Vec<D>>(pts));
  const auto n = py::ssize_t(tri.size());
  py::array_t<int> cells({n, py::ssize_t(D + 1)});
  py::array_t<int> nbrs({n, py::ssize_t(D + 1)});
  py::array_t<double> centers({n, py::ssize_t(D)});
  py::array_t<double> radii(n);
  auto c = cells.mutable_unchecked<2>();
  auto b = nbrs.mutable_unchecked<2>();
  auto z = centers.mutable_unchecked<2>();
  auto r = radii.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < n; ++i) {
    for (int k = 0; k <= D; ++k) {
      c(i, k) = tri.vertices(i)[k];
      b(i, k) = tri.neighbors(i)[k];
    }
    for (int k = 0; k < D; ++k) z(i, k) = tri.simplex(i).circumcenter[k];
    r(i) = tri.simplex(i).circumradius;
  }
  py::dict out;
  out["simplices"] = cells;
  out["neighbors"] = nbrs;
  out["circumcenters"] = centers;
  out["circumradii"] = radii;
  out["total_volume"] = tri.total_volume();
  out["violations"] = count_delaunay_violations<D>(tri);
  return out;
}

template <int D>
py::dict approximate_impl(const Array& a, const TargetSet& target) {
  const auto pts = to_points<D>(a);
  const auto tri = triangulate<D>(std::span<const Vec<D>>(pts));
  // Window = bounding box of the points; leakage is relative to it.
  Window<D> w;
  w.lower.fill(INFINITY);
  w.upper.fill(-INFINITY);
  for (const auto& p : pts)
    for (int k = 0; k < D; ++k) {
      w.lower[k] = std::min(w.lower[k], p[k]);
      w.upper[k] = std::max(w.upper[k], p[k]);
    }
  const ApproximationResult res = build_approximation<D>(tri, target, w);
  py::dict out;
  out["volume"] = res.volume;
  out["selected"] = res.selected;
  out["leakage"] = res.leakage;
  return out;
}

TargetSet target_from(const std::string& json_text) {
  return target_from_json(nlohmann::json::parse(json_text));
}

}  // namespace

PYBIND11_MODULE(_pdapprox, m) {
  m.doc() = "Poisson-Delaunay approximation of convex sets (C++ core).";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("kappa", &kappa, py::arg("d"));
  m.def("omega", &omega, py::arg("d"));
  m.def("simplex_moment", &simplex_moment, py::arg("d"), py::arg("k"));
  m.def("c_d_voronoi", &c_d_voronoi, py::arg("d"));
  m.def("c_d_bounds", [](int d) {
    const CdBounds b = c_d_bounds(d);
    return py::make_tuple(b.lower, b.upper);
  }, py::arg("d"));
  m.def("estimate_c_d", [](int d, std::uint64_t samples, std::uint64_t seed, int workers) {
    const McEstimate e = estimate_c_d(d, samples, seed, workers);
    return py::make_tuple(e.value, e.stderr_);
  }, py::arg("d"), py::arg("samples"), py::arg("seed") = 1, py::arg("workers") = 1);

  m.def("triangulate", [](const Array& a) {
    switch (dim_of(a)) {
      case 2: return triangulate_impl<2>(a);
      case 3: return triangulate_impl<3>(a);
      default: return triangulate_impl<4>(a);
    }
  }, py::arg("points"), "Delaunay triangulation of an (n, d) point array.");

  m.def("approximate", [](const Array& a, const std::string& target_json) {
    const TargetSet t = target_from(target_json);
    if (t.dimension() != dim_of(a))
      throw std::invalid_argument("target and points differ in dimension");
    switch (t.dimension()) {
      case 2: return approximate_impl<2>(a, t);
      case 3: return approximate_impl<3>(a, t);
      default: return approximate_impl<4>(a, t);
    }
  }, py::arg("points"), py::arg("target_json"),
     "Volume of the union of Delaunay cells whose circumcenter lies in the target.");

  m.def("target_volume", [](const std::string& j) { return target_from(j).volume(); });
  m.def("target_perimeter", [](const std::string& j) { return target_from(j).perimeter(); });

  m.def("normalize_config", [](const std::string& text) {
    return config_to_json(parse_config(text)).dump();
  }, py::arg("text"), "Validated canonical form of a JSON config.");

  m.def("estimate", [](const std::string& text) {
    EstimateResult r;
    {
      py::gil_scoped_release release;
      r = run_estimate(parse_config(text));
    }
    py::dict out;
    out["d"] = r.d;
    out["t"] = r.t;
    out["seed"] = r.seed;
    out["volume"] = r.volume;
    out["target_volume"] = r.target_volume;
    out["z_score"] = r.z_score;
    out["pilot_stddev"] = r.pilot_stddev;
    out["points"] = r.points;
    out["cells"] = r.cells;
    out["selected"] = r.selected;
    out["leakage"] = r.leakage;
    if (r.symdiff) {
      out["symdiff"] = r.symdiff->value;
      out["symdiff_stderr"] = r.symdiff->stderr_;
    }
    return out;
  }, py::arg("config_json"));

  m.def("run_experiment", [](const std::string& text) {
    std::string summary, records;
    {
      py::gil_scoped_release release;
      const ExperimentReport rep = run_experiment(parse_config(text));
      summary = summary_json(rep);
      records = records_csv(rep);
    }
    return py::make_tuple(summary, records);
  }, py::arg("config_json"), "Returns (summary.json text, records.csv text).");
}
