#include "cloudoracle/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "cloudoracle/errors.hpp"
#include "cloudoracle/query.hpp"
#include "cloudoracle/random.hpp"

namespace cloudoracle {

namespace {

template <typename Fn>
void for_each_chunk(std::size_t items, std::size_t chunks, Fn&& fn) {
  chunks = std::clamp<std::size_t>(chunks, 1, std::max<std::size_t>(items, 1));
  if (chunks == 1) {
    fn(std::size_t{0}, items);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c)
    workers.emplace_back([&, c] { fn(items * c / chunks, items * (c + 1) / chunks); });
}

}  // namespace

std::vector<std::vector<double>> generate_samples(const SampleSpec& spec, std::size_t dims,
                                                  std::size_t chunks) {
  if (spec.count == 0) throw InputError("sample count must be at least 1");

  if (const auto* trace = std::get_if<TraceSource>(&spec.source)) {
    if (trace->rows.size() < spec.count)
      throw InputError("trace has " + std::to_string(trace->rows.size()) +
                       " rows, fewer than the " + std::to_string(spec.count) + " requested");
    for (std::size_t i = 0; i < spec.count; ++i) {
      if (trace->rows[i].size() != dims)
        throw DimensionMismatch("trace row " + std::to_string(i) + " has " +
                                std::to_string(trace->rows[i].size()) + " values, expected " +
                                std::to_string(dims));
    }
    return {trace->rows.begin(), trace->rows.begin() + static_cast<std::ptrdiff_t>(spec.count)};
  }

  const auto& syn = std::get<SyntheticSource>(spec.source);
  if (!std::isfinite(syn.low) || !std::isfinite(syn.high) || !(syn.low < syn.high))
    throw InputError("sample range needs finite low < high");
  if (syn.low < 0.0) throw InputError("sample range must be non-negative");
  if (syn.distribution == SampleDistribution::LogUniform && !(syn.low > 0.0))
    throw InputError("log-uniform sampling needs low > 0");

  std::vector<std::vector<double>> out(spec.count, std::vector<double>(dims));
  const std::size_t blocks = (spec.count + kSampleBlock - 1) / kSampleBlock;
  const double log_low = syn.distribution == SampleDistribution::LogUniform ? std::log(syn.low) : 0.0;
  const double log_span =
      syn.distribution == SampleDistribution::LogUniform ? std::log(syn.high) - log_low : 0.0;

  for_each_chunk(blocks, chunks, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      auto engine = stream_engine(syn.seed, b);
      const std::size_t end = std::min(spec.count, (b + 1) * kSampleBlock);
      for (std::size_t i = b * kSampleBlock; i < end; ++i) {
        for (auto& x : out[i]) {
          const double u = unit_uniform(engine);
          x = syn.distribution == SampleDistribution::Uniform
                  ? syn.low + u * (syn.high - syn.low)
                  : std::exp(log_low + u * log_span);
        }
      }
    }
  });
  return out;
}

RatioBatch scenario_ratios(const Oracle& baseline, const Oracle& candidate,
                           const std::vector<std::vector<double>>& samples, std::size_t chunks) {
  if (baseline.clients() != candidate.clients())
    throw DimensionMismatch("scenario oracles must share the same client ordering");
  if (samples.empty()) throw InputError("at least one sample is required");
  for (const auto& s : samples) {
    if (s.size() != baseline.num_params())
      throw DimensionMismatch("sample has " + std::to_string(s.size()) +
                              " parameters, oracles expect " +
                              std::to_string(baseline.num_params()));
  }

  // NaN marks a rejected sample until the ordered merge below.
  std::vector<double> ratio(samples.size());
  for_each_chunk(samples.size(), chunks, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double before = argmin_plane(baseline, samples[i]).second;
      const double after = argmin_plane(candidate, samples[i]).second;
      ratio[i] = before > 0.0 ? after / before : std::nan("");
    }
  });

  RatioBatch batch;
  batch.ratios.reserve(samples.size());
  for (double r : ratio) {
    if (std::isnan(r))
      ++batch.rejected;
    else
      batch.ratios.push_back(r);
  }
  return batch;
}

ScenarioSummary summarize(const RatioBatch& batch) {
  const auto& xs = batch.ratios;
  if (xs.empty()) throw InputError("no usable samples: every baseline cost was zero");
  ScenarioSummary s;
  s.samples_used = xs.size();
  s.samples_rejected = batch.rejected;

  double sum = 0.0;
  for (double x : xs) sum += x;
  const double n = static_cast<double>(xs.size());
  s.mean_improvement = sum / n;

  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  s.median_improvement =
      sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;

  double half_width = 0.0;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean_improvement) * (x - s.mean_improvement);
    half_width = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  s.ci95_low = s.mean_improvement - half_width;
  s.ci95_high = s.mean_improvement + half_width;
  return s;
}

ScenarioSummary simulate_scenario(const Oracle& baseline, const Oracle& candidate,
                                  const std::vector<std::vector<double>>& samples,
                                  std::size_t chunks) {
  return summarize(scenario_ratios(baseline, candidate, samples, chunks));
}

}  // namespace cloudoracle
