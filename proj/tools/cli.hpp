#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cloudoracle::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2 };

/// Runs one invocation; args[0] is the program name. Payload goes to `out`,
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchOptions {
  std::string suite;
  std::vector<std::size_t> sizes;
  std::size_t clients = 100;
  std::size_t storages = 100;  // instance size for the simulate suite
  std::size_t repeats = 20;
  std::uint64_t seed = 1;
  std::size_t chunks = 1;
  bool prune = true;
};

struct BenchRow {
  std::string suite;
  std::size_t size = 0;
  std::string metric;
  double value = 0.0;
};

/// Runs a benchmark suite (build, query, drift or simulate) over synthetic instances.
std::vector<BenchRow> run_bench(const BenchOptions& options);

/// CSV with fixed header "suite,size,metric,value".
void write_bench_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path);

}  // namespace cloudoracle::cli
