#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cloudoracle/baseline.hpp"
#include "cloudoracle/builder.hpp"
#include "cloudoracle/errors.hpp"
#include "cloudoracle/query.hpp"
#include "cloudoracle/simulation.hpp"
#include "cloudoracle/storage.hpp"
#include "cloudoracle/synthetic.hpp"

namespace py = pybind11;
using namespace cloudoracle;

namespace {

py::array_t<double> matrix_copy(std::span<const double> values, std::size_t rows, std::size_t cols) {
  py::array_t<double> out({rows, cols});
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

py::tuple pair_tuple(const PlacementPair& p) { return py::make_tuple(p.ids[0], p.ids[1]); }

DriftMode parse_mode(const std::string& mode) {
  if (mode == "lifted") return DriftMode::Lifted;
  if (mode == "projected") return DriftMode::Projected;
  throw InputError("mode must be 'lifted' or 'projected'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Placement oracles over linear latency cost functions.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  // Catchable as either cloudoracle.Error or ValueError.
  auto input = py::register_exception<InputError>(
      m, "InputError", py::make_tuple(base, py::handle(PyExc_ValueError)));
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", input.ptr());
  (void)base;

  py::class_<DataCenter>(m, "DataCenter")
      .def_readonly("id", &DataCenter::id)
      .def_readonly("lat_deg", &DataCenter::lat_deg)
      .def_readonly("lon_deg", &DataCenter::lon_deg)
      .def_property_readonly("is_storage", [](const DataCenter& d) { return d.has_role(Role::Storage); })
      .def_property_readonly("is_client", [](const DataCenter& d) { return d.has_role(Role::Client); })
      .def("__repr__", [](const DataCenter& d) { return "<DataCenter " + d.id + ">"; });

  py::class_<LatencyMatrix>(m, "LatencyMatrix")
      .def_property_readonly("clients", &LatencyMatrix::clients)
      .def_property_readonly("storages", &LatencyMatrix::storages)
      .def_property_readonly("values", [](const LatencyMatrix& l) {
        return matrix_copy(l.values(), l.num_clients(), l.num_storages());
      });

  py::class_<BuildConfig>(m, "BuildConfig")
      .def(py::init([](double min_dist_km, bool prune, std::size_t parallel_chunks) {
             return BuildConfig{min_dist_km, prune, parallel_chunks};
           }),
           py::arg("min_dist_km") = 200.0, py::arg("prune") = true, py::arg("parallel_chunks") = 1)
      .def_readwrite("min_dist_km", &BuildConfig::min_dist_km)
      .def_readwrite("prune", &BuildConfig::prune)
      .def_readwrite("parallel_chunks", &BuildConfig::parallel_chunks);

  py::class_<BuildReport>(m, "BuildReport")
      .def_readonly("candidates_enumerated", &BuildReport::candidates_enumerated)
      .def_readonly("pruned", &BuildReport::pruned)
      .def_readonly("retained", &BuildReport::retained)
      .def_readonly("enumerate_seconds", &BuildReport::enumerate_seconds)
      .def_readonly("prune_seconds", &BuildReport::prune_seconds)
      .def_readonly("matrix_seconds", &BuildReport::matrix_seconds);

  py::class_<Oracle>(m, "Oracle")
      .def_property_readonly("clients", &Oracle::clients)
      .def_property_readonly("dims", &Oracle::dims)
      .def("__len__", &Oracle::size)
      .def_property_readonly("pairs", [](const Oracle& o) {
        py::list out;
        for (const auto& p : o.pairs()) out.append(pair_tuple(p));
        return out;
      })
      .def_property_readonly("raw_planes", [](const Oracle& o) {
        return matrix_copy(o.raw_planes(), o.size(), o.dims());
      })
      .def_property_readonly("unit_planes", [](const Oracle& o) {
        return matrix_copy(o.unit_planes(), o.size(), o.dims());
      })
      .def("save", [](const Oracle& o, const std::filesystem::path& p) { save_oracle(o, p); })
      .def("identical_to", &Oracle::identical_to);

  py::class_<MinResult>(m, "MinResult")
      .def_readonly("placement_index", &MinResult::placement_index)
      .def_readonly("cost", &MinResult::cost)
      .def_property_readonly("pair", [](const MinResult& r) { return pair_tuple(r.placement.pair); })
      .def_property_readonly("coeffs", [](const MinResult& r) { return r.placement.coeffs; });

  py::class_<DriftResult>(m, "DriftResult")
      .def_readonly("current_index", &DriftResult::current_index)
      .def_readonly("current_cost", &DriftResult::current_cost)
      .def_readonly("next_index", &DriftResult::next_index)
      .def_readonly("param_next", &DriftResult::param_next)
      .def_readonly("cost_next", &DriftResult::cost_next)
      .def_readonly("distance", &DriftResult::distance)
      .def_property_readonly("unbounded", &DriftResult::unbounded);

  py::class_<ScenarioSummary>(m, "ScenarioSummary")
      .def_readonly("mean", &ScenarioSummary::mean_improvement)
      .def_readonly("median", &ScenarioSummary::median_improvement)
      .def_property_readonly("ci95", [](const ScenarioSummary& s) {
        return py::make_tuple(s.ci95_low, s.ci95_high);
      })
      .def_readonly("samples_used", &ScenarioSummary::samples_used)
      .def_readonly("samples_rejected", &ScenarioSummary::samples_rejected);

  m.def("haversine_km",
        py::overload_cast<double, double, double, double>(&haversine_km),
        py::arg("lat1_deg"), py::arg("lon1_deg"), py::arg("lat2_deg"), py::arg("lon2_deg"));
  m.def("haversine_km",
        py::overload_cast<const DataCenter&, const DataCenter&>(&haversine_km), py::arg("a"),
        py::arg("b"));
  m.def("load_datacenters", &load_datacenters, py::arg("path"));
  m.def("load_latency_matrix", &load_latency_matrix, py::arg("path"), py::arg("catalog"));
  m.def("load_trace", &load_trace, py::arg("path"), py::arg("num_clients"));
  m.def("load_oracle", &load_oracle, py::arg("path"));

  m.def("build_oracle", &build_oracle, py::arg("catalog"), py::arg("latency"),
        py::arg("config") = BuildConfig{}, py::call_guard<py::gil_scoped_release>());

  m.def("query_minimum",
        [](const Oracle& o, std::vector<double> w, std::vector<double> r) {
          return query_minimum(o, Workload::make(std::move(w), std::move(r)));
        },
        py::arg("oracle"), py::arg("w"), py::arg("r"));
  m.def("query_drift_directed",
        [](const Oracle& o, std::vector<double> w, std::vector<double> r,
           std::vector<double> direction, const std::string& mode) {
          return query_drift_directed(o, Workload::make(std::move(w), std::move(r)),
                                      DriftVector::make(std::move(direction)), parse_mode(mode));
        },
        py::arg("oracle"), py::arg("w"), py::arg("r"), py::arg("direction"),
        py::arg("mode") = "lifted");
  m.def("query_drift_undirected",
        [](const Oracle& o, std::vector<double> w, std::vector<double> r) {
          return query_drift_undirected(o, Workload::make(std::move(w), std::move(r)));
        },
        py::arg("oracle"), py::arg("w"), py::arg("r"));

  m.def("generate_samples",
        [](std::size_t count, std::size_t dims, std::uint64_t seed, double low, double high,
           const std::string& distribution, std::size_t chunks) {
          SyntheticSource src{SampleDistribution::Uniform, low, high, seed};
          if (distribution == "log-uniform")
            src.distribution = SampleDistribution::LogUniform;
          else if (distribution != "uniform")
            throw InputError("distribution must be 'uniform' or 'log-uniform'");
          return generate_samples(SampleSpec{src, count}, dims, chunks);
        },
        py::arg("count"), py::arg("dims"), py::arg("seed"), py::arg("low") = 0.0,
        py::arg("high") = 1.0, py::arg("distribution") = "uniform", py::arg("chunks") = 1);
  m.def("simulate_scenario", &simulate_scenario, py::arg("baseline"), py::arg("candidate"),
        py::arg("samples"), py::arg("chunks") = 1, py::call_guard<py::gil_scoped_release>());

  m.def("solve_exhaustive",
        [](const Catalog& catalog, const LatencyMatrix& latency, std::vector<double> w,
           std::vector<double> r, double min_dist_km) {
          auto res = solve_exhaustive(catalog, latency, Workload::make(std::move(w), std::move(r)),
                                      min_dist_km);
          return py::make_tuple(py::make_tuple(res.pair[0], res.pair[1]), res.cost);
        },
        py::arg("catalog"), py::arg("latency"), py::arg("w"), py::arg("r"),
        py::arg("min_dist_km") = 200.0);

  m.def("make_synthetic_topology",
        [](std::size_t storages, std::size_t clients, std::uint64_t seed, bool geographic,
           bool regional_clients) {
          auto t = make_synthetic_topology(
              storages, clients, seed,
              geographic ? LatencyModel::Geographic : LatencyModel::Uniform,
              regional_clients ? ClientLayout::Regional : ClientLayout::Global);
          return py::make_tuple(t.catalog, t.latency);
        },
        py::arg("storages"), py::arg("clients"), py::arg("seed"), py::arg("geographic") = false,
        py::arg("regional_clients") = false);
}
