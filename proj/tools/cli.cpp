#include "cli.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cloudoracle/builder.hpp"
#include "cloudoracle/errors.hpp"
#include "cloudoracle/json_codec.hpp"
#include "cloudoracle/query.hpp"
#include "cloudoracle/service.hpp"
#include "cloudoracle/simulation.hpp"
#include "cloudoracle/storage.hpp"

namespace cloudoracle::cli {

namespace {

using nlohmann::json;

std::size_t default_threads() {
  if (const char* env = std::getenv("ORACLE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

std::vector<double> parse_csv_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::logic_error&) {
      throw InputError(std::string("--") + what + ": '" + field + "' is not a number");
    }
  }
  return out;
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void print(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

std::string pair_text(const PlacementPair& p) { return p.ids[0] + "," + p.ids[1]; }

struct BuildArgs {
  std::string datacenters, latency, output;
  double min_dist_km = 200.0;
  bool no_prune = false;
  bool as_json = false;
};

struct QueryArgs {
  std::string oracle, workload, w, r;
  bool as_json = false;
};

struct DriftArgs {
  std::string oracle, workload, direction, mode = "lifted";
  bool as_json = false;
};

struct SimulateArgs {
  std::string oracle_a, oracle_b, dist = "uniform:0:1", trace;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t chunks = 0;
  bool as_json = false;
};

struct BenchArgs {
  std::string suite, sizes, csv;
  BenchOptions options;
  bool no_prune = false;
};

struct ServeArgs {
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string oracle_dir;
};

int do_build(const BuildArgs& a, std::ostream& out) {
  const auto catalog = load_datacenters(a.datacenters);
  const auto latency = load_latency_matrix(a.latency, catalog);
  BuildConfig cfg;
  cfg.min_dist_km = a.min_dist_km;
  cfg.prune = !a.no_prune;
  cfg.parallel_chunks = default_threads();
  auto [oracle, report] = build_oracle(catalog, latency, cfg);
  save_oracle(oracle, a.output);
  if (a.as_json) {
    print(out, {{"schema", codec::kSchema},
                {"output", a.output},
                {"build_report", codec::to_json(report)}});
  } else {
    out << "enumerated " << report.candidates_enumerated << ", pruned " << report.pruned
        << ", retained " << report.retained << " placements -> " << a.output << '\n';
  }
  return kOk;
}

Workload workload_arg(const std::string& file, const std::string& w, const std::string& r) {
  if (!file.empty()) return codec::workload_from_json(read_json_file(file));
  if (w.empty() || r.empty()) throw InputError("give --workload, or both --w and --r");
  return Workload::make(parse_csv_numbers(w, "w"), parse_csv_numbers(r, "r"));
}

int do_query(const QueryArgs& a, std::ostream& out) {
  const auto oracle = load_oracle(a.oracle);
  const auto result = query_minimum(oracle, workload_arg(a.workload, a.w, a.r));
  if (a.as_json) {
    print(out, codec::min_result(oracle, result));
  } else {
    out << "pair " << pair_text(result.placement.pair) << " cost " << result.cost
        << " (placement " << result.placement_index << ")\n";
  }
  return kOk;
}

int do_drift(const DriftArgs& a, std::ostream& out) {
  const auto oracle = load_oracle(a.oracle);
  const auto workload = workload_arg(a.workload, "", "");
  DriftResult result;
  if (!a.direction.empty()) {
    auto doc = read_json_file(a.direction);
    if (doc.is_object() && doc.contains("direction")) doc = doc.at("direction");
    const auto mode = a.mode == "projected" ? DriftMode::Projected : DriftMode::Lifted;
    result = query_drift_directed(oracle, workload,
                                  DriftVector::make(codec::number_array(doc, "direction")), mode);
  } else {
    result = query_drift_undirected(oracle, workload);
  }
  const auto j = codec::drift_result(oracle, result);
  if (a.as_json) {
    print(out, j);
  } else if (result.unbounded()) {
    out << "current " << pair_text(oracle.pair(result.current_index))
        << " stays optimal: no crossing\n";
  } else {
    out << "current " << pair_text(oracle.pair(result.current_index)) << " -> next "
        << pair_text(oracle.pair(*result.next_index)) << " at distance " << result.distance
        << ", cost " << result.cost_next << '\n';
  }
  return kOk;
}

SyntheticSource parse_dist(const std::string& spec, std::uint64_t seed) {
  // kind:LO:HI
  SyntheticSource src;
  src.seed = seed;
  const auto c1 = spec.find(':');
  const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw InputError("--dist must look like uniform:LO:HI or log-uniform:LO:HI");
  const auto kind = spec.substr(0, c1);
  if (kind == "uniform")
    src.distribution = SampleDistribution::Uniform;
  else if (kind == "log-uniform" || kind == "loguniform")
    src.distribution = SampleDistribution::LogUniform;
  else
    throw InputError("unknown distribution '" + kind + "'");
  src.low = parse_csv_numbers(spec.substr(c1 + 1, c2 - c1 - 1), "dist").at(0);
  src.high = parse_csv_numbers(spec.substr(c2 + 1), "dist").at(0);
  return src;
}

int do_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto oracle_a = load_oracle(a.oracle_a);
  const auto oracle_b = load_oracle(a.oracle_b);
  const std::size_t chunks = a.chunks > 0 ? a.chunks : default_threads();
  SampleSpec spec;
  json extra;
  if (!a.trace.empty()) {
    TraceSource trace{load_trace(a.trace, oracle_a.num_clients())};
    spec.count = a.samples > 0 ? a.samples : trace.rows.size();
    if (spec.count == 0) throw InputError("trace '" + a.trace + "' has no samples");
    spec.source = std::move(trace);
    extra["trace"] = a.trace;
  } else {
    if (a.samples == 0) throw InputError("give --samples N (with --seed), or --trace F");
    spec.source = parse_dist(a.dist, a.seed);
    spec.count = a.samples;
    extra["seed"] = a.seed;
  }
  const auto samples = generate_samples(spec, oracle_a.num_params(), chunks);
  const auto summary = simulate_scenario(oracle_a, oracle_b, samples, chunks);
  auto j = codec::scenario_summary(summary);
  j.update(extra);
  if (a.as_json) {
    print(out, j);
  } else {
    out << "mean " << summary.mean_improvement << " median " << summary.median_improvement
        << " ci95 [" << summary.ci95_low << ", " << summary.ci95_high << "] over "
        << summary.samples_used << " samples (" << summary.samples_rejected << " rejected)\n";
  }
  return kOk;
}

int do_bench(BenchArgs a, std::ostream& out) {
  a.options.suite = a.suite;
  a.options.prune = !a.no_prune;
  if (a.options.chunks == 0) a.options.chunks = default_threads();
  for (double v : parse_csv_numbers(a.sizes, "sizes")) {
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw InputError("--sizes must list positive integers");
    a.options.sizes.push_back(static_cast<std::size_t>(v));
  }
  const auto rows = run_bench(a.options);
  write_bench_csv(rows, a.csv);
  out << "wrote " << rows.size() << " rows to " << a.csv << '\n';
  return kOk;
}

int do_serve(const ServeArgs& a, std::ostream& out) {
  ServiceConfig cfg;
  cfg.worker_chunks = default_threads();
  Service service(cfg);
  const auto loaded = service.registry().load_directory(a.oracle_dir);
  out << "serving " << loaded << " oracles on http://" << a.host << ":" << a.port << '\n';
  out.flush();
  serve_forever(service, a.host, a.port);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Precomputed placement oracles: build, query, drift, simulate, bench, serve"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* build_cmd = app.add_subcommand("build", "Build an oracle from a topology");
  build_cmd->add_option("--datacenters", build.datacenters, "Data center catalog (JSON)")->required();
  build_cmd->add_option("--latency", build.latency, "Client x storage latency matrix (CSV)")->required();
  build_cmd->add_option("--min-dist-km", build.min_dist_km, "Minimum replica separation")
      ->capture_default_str();
  build_cmd->add_flag("--no-prune", build.no_prune, "Keep dominated placements");
  build_cmd->add_option("-o,--output", build.output, "Oracle file to write")->required();
  build_cmd->add_flag("--json", build.as_json);

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Cheapest placement for a workload");
  query_cmd->add_option("--oracle", query.oracle)->required();
  auto* wl = query_cmd->add_option("--workload", query.workload, "JSON {\"w\":[..],\"r\":[..]}");
  auto* w_opt = query_cmd->add_option("--w", query.w, "Write frequencies, comma separated");
  auto* r_opt = query_cmd->add_option("--r", query.r, "Read frequencies, comma separated");
  wl->excludes(w_opt)->excludes(r_opt);
  w_opt->needs(r_opt);
  r_opt->needs(w_opt);
  query_cmd->add_flag("--json", query.as_json);

  DriftArgs drift;
  auto* drift_cmd = app.add_subcommand("drift", "How far the workload can move before the optimum changes");
  drift_cmd->add_option("--oracle", drift.oracle)->required();
  drift_cmd->add_option("--workload", drift.workload)->required();
  drift_cmd->add_option("--direction", drift.direction, "JSON array; omit for the undirected query");
  drift_cmd->add_option("--mode", drift.mode)
      ->check(CLI::IsMember({"lifted", "projected"}))
      ->capture_default_str();
  drift_cmd->add_flag("--json", drift.as_json);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo what-if: cost ratio of oracle B over oracle A");
  sim_cmd->add_option("--oracle-a", sim.oracle_a)->required();
  sim_cmd->add_option("--oracle-b", sim.oracle_b)->required();
  auto* samples_opt = sim_cmd->add_option("--samples", sim.samples);
  auto* seed_opt = sim_cmd->add_option("--seed", sim.seed);
  auto* dist_opt = sim_cmd->add_option("--dist", sim.dist, "uniform:LO:HI or log-uniform:LO:HI")
                       ->capture_default_str();
  auto* trace_opt = sim_cmd->add_option("--trace", sim.trace, "Headerless CSV of samples");
  trace_opt->excludes(seed_opt)->excludes(dist_opt);
  sim_cmd->add_option("--chunks", sim.chunks, "Worker chunks (default ORACLE_THREADS or 1)");
  sim_cmd->add_flag("--json", sim.as_json);
  (void)samples_opt;

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Timing tables on synthetic instances");
  bench_cmd->add_option("--suite", bench.suite)
      ->required()
      ->check(CLI::IsMember({"build", "query", "drift", "simulate"}));
  bench_cmd->add_option("--sizes", bench.sizes, "Comma separated sizes")->required();
  bench_cmd->add_option("--csv", bench.csv)->required();
  bench_cmd->add_option("--clients", bench.options.clients)->capture_default_str();
  bench_cmd->add_option("--storages", bench.options.storages, "Instance size for --suite simulate")
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench.options.repeats)->capture_default_str();
  bench_cmd->add_option("--seed", bench.options.seed)->capture_default_str();
  bench_cmd->add_flag("--no-prune", bench.no_prune);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "HTTP API over a directory of oracles");
  serve_cmd->add_option("--port", serve.port)->required()->check(CLI::Range(1, 65535));
  serve_cmd->add_option("--oracle-dir", serve.oracle_dir)->required();
  serve_cmd->add_option("--host", serve.host)->capture_default_str();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*build_cmd) return do_build(build, out);
    if (*query_cmd) return do_query(query, out);
    if (*drift_cmd) return do_drift(drift, out);
    if (*sim_cmd) return do_simulate(sim, out);
    if (*bench_cmd) return do_bench(bench, out);
    if (*serve_cmd) return do_serve(serve, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kInternalError;
}

}  // namespace cloudoracle::cli
