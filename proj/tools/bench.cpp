#include <chrono>
#include <fstream>

#include "cli.hpp"
#include "cloudoracle/baseline.hpp"
#include "cloudoracle/builder.hpp"
#include "cloudoracle/errors.hpp"
#include "cloudoracle/query.hpp"
#include "cloudoracle/random.hpp"
#include "cloudoracle/simulation.hpp"
#include "cloudoracle/synthetic.hpp"

namespace cloudoracle::cli {

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_seconds(Fn&& fn) {
  const auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Workload> random_workloads(std::size_t count, std::size_t clients, std::uint64_t seed) {
  auto rng = stream_engine(seed, 7);
  std::vector<Workload> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> w(clients), r(clients);
    for (auto& x : w) x = unit_uniform(rng);
    for (auto& x : r) x = unit_uniform(rng);
    out.push_back(Workload::make(std::move(w), std::move(r)));
  }
  return out;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchOptions& o) {
  std::vector<BenchRow> rows;
  auto emit = [&](std::size_t size, const char* metric, double value) {
    rows.push_back({o.suite, size, metric, value});
  };
  const std::size_t repeats = std::max<std::size_t>(o.repeats, 1);

  if (o.suite == "build") {
    for (auto d : o.sizes) {
      const auto topo = make_synthetic_topology(d, o.clients, o.seed);
      BuildConfig cfg;
      cfg.prune = o.prune;
      cfg.parallel_chunks = o.chunks;
      auto [oracle, report] = build_oracle(topo.catalog, topo.latency, cfg);
      emit(d, "enumerate_seconds", report.enumerate_seconds);
      emit(d, "prune_seconds", report.prune_seconds);
      emit(d, "matrix_seconds", report.matrix_seconds);
      emit(d, "total_seconds", report.total_seconds());
      emit(d, "candidates", static_cast<double>(report.candidates_enumerated));
      emit(d, "retained", static_cast<double>(report.retained));
    }
  } else if (o.suite == "query" || o.suite == "drift") {
    for (auto d : o.sizes) {
      const auto topo = make_synthetic_topology(d, o.clients, o.seed, LatencyModel::Geographic,
                                                ClientLayout::Regional);
      BuildConfig cfg;
      cfg.prune = o.prune;
      cfg.parallel_chunks = o.chunks;
      auto [oracle, report] = build_oracle(topo.catalog, topo.latency, cfg);
      const auto loads = random_workloads(repeats, o.clients, o.seed);
      emit(d, "candidates", static_cast<double>(report.candidates_enumerated));
      emit(d, "retained", static_cast<double>(report.retained));
      const double t_min = time_seconds([&] {
        for (const auto& w : loads) (void)query_minimum(oracle, w);
      }) / static_cast<double>(repeats);
      emit(d, "oracle_query_seconds", t_min);
      if (o.suite == "query") {
        const double t_base = time_seconds([&] {
          for (const auto& w : loads) (void)solve_exhaustive(topo.catalog, topo.latency, w);
        }) / static_cast<double>(repeats);
        emit(d, "baseline_query_seconds", t_base);
        emit(d, "speedup", t_base / t_min);
      } else {
        auto rng = stream_engine(o.seed, 11);
        std::vector<DriftVector> drifts;
        for (std::size_t i = 0; i < repeats; ++i) {
          std::vector<double> v(2 * o.clients);
          for (auto& x : v) x = 2.0 * unit_uniform(rng) - 1.0;
          drifts.push_back(DriftVector::make(std::move(v)));
        }
        emit(d, "directed_seconds", time_seconds([&] {
               for (std::size_t i = 0; i < repeats; ++i)
                 (void)query_drift_directed(oracle, loads[i], drifts[i]);
             }) / static_cast<double>(repeats));
        emit(d, "undirected_seconds", time_seconds([&] {
               for (const auto& w : loads) (void)query_drift_undirected(oracle, w);
             }) / static_cast<double>(repeats));
      }
    }
  } else if (o.suite == "simulate") {
    const auto topo = make_synthetic_topology(o.storages, o.clients, o.seed,
                                              LatencyModel::Geographic, ClientLayout::Regional);
    BuildConfig cfg;
    cfg.parallel_chunks = o.chunks;
    const auto oracle = build_oracle(topo.catalog, topo.latency, cfg).first;
    for (auto n : o.sizes) {
      SampleSpec spec{SyntheticSource{SampleDistribution::Uniform, 0.0, 1.0, o.seed}, n};
      ScenarioSummary summary;
      const double t = time_seconds([&] {
        const auto samples = generate_samples(spec, oracle.num_params(), o.chunks);
        summary = simulate_scenario(oracle, oracle, samples, o.chunks);
      });
      emit(n, "simulate_seconds", t);
      emit(n, "mean", summary.mean_improvement);
    }
  } else {
    throw InputError("unknown bench suite '" + o.suite + "'");
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.precision(17);
  out << "suite,size,metric,value\n";
  for (const auto& r : rows) out << r.suite << ',' << r.size << ',' << r.metric << ',' << r.value << '\n';
}

}  // namespace cloudoracle::cli
