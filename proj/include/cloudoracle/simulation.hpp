#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "cloudoracle/model.hpp"

namespace cloudoracle {

enum class SampleDistribution { Uniform, LogUniform };

struct SyntheticSource {
  SampleDistribution distribution = SampleDistribution::Uniform;
  double low = 0.0;
  double high = 1.0;
  std::uint64_t seed = 0;
};

struct TraceSource {
  std::vector<std::vector<double>> rows;  // each row is [w, r]
};

struct SampleSpec {
  std::variant<SyntheticSource, TraceSource> source;
  std::size_t count = 1;
};

/// Samples per RNG stream. Sample k always comes from stream k / kSampleBlock.
inline constexpr std::size_t kSampleBlock = 1024;

/// Parameter vectors of length `dims`. Synthetic draws are bit-identical for a
/// fixed seed regardless of `chunks`; trace sources yield their first `count` rows.
std::vector<std::vector<double>> generate_samples(const SampleSpec& spec, std::size_t dims,
                                                  std::size_t chunks = 1);

/// Per-sample cost ratios, in sample order, plus how many samples had a zero baseline.
struct RatioBatch {
  std::vector<double> ratios;
  std::size_t rejected = 0;
};

RatioBatch scenario_ratios(const Oracle& baseline, const Oracle& candidate,
                           const std::vector<std::vector<double>>& samples,
                           std::size_t chunks = 1);

struct ScenarioSummary {
  double mean_improvement = 0.0;
  double median_improvement = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 0.0;
  std::size_t samples_used = 0;
  std::size_t samples_rejected = 0;
};

/// Mean, median and normal-approximation 95% interval (mean +/- 1.96 stderr).
ScenarioSummary summarize(const RatioBatch& batch);

/// For each sample a: min(candidate planes . a) / min(baseline planes . a).
ScenarioSummary simulate_scenario(const Oracle& baseline, const Oracle& candidate,
                                  const std::vector<std::vector<double>>& samples,
                                  std::size_t chunks = 1);

}  // namespace cloudoracle
