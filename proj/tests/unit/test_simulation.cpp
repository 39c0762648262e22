#include <doctest.h>

#include <cstring>

#include "cloudoracle/builder.hpp"
#include "cloudoracle/errors.hpp"
#include "cloudoracle/simulation.hpp"
#include "unit/support.hpp"

using namespace cloudoracle;
using namespace testsupport;

namespace {

SampleSpec uniform_spec(std::uint64_t seed, std::size_t count, double lo = 0.0, double hi = 1.0) {
  return SampleSpec{SyntheticSource{SampleDistribution::Uniform, lo, hi, seed}, count};
}

Oracle halved(const Oracle& o) {
  std::vector<double> raw(o.raw_planes().begin(), o.raw_planes().end());
  for (std::size_t i = 0; i < raw.size(); ++i)
    if ((i + 1) % o.dims() != 0) raw[i] *= 0.5;
  return Oracle(o.clients(), o.pairs(), raw);
}

bool same_bits(const ScenarioSummary& a, const ScenarioSummary& b) {
  return std::memcmp(&a.mean_improvement, &b.mean_improvement, sizeof(double)) == 0 &&
         std::memcmp(&a.median_improvement, &b.median_improvement, sizeof(double)) == 0 &&
         std::memcmp(&a.ci95_low, &b.ci95_low, sizeof(double)) == 0 &&
         std::memcmp(&a.ci95_high, &b.ci95_high, sizeof(double)) == 0 &&
         a.samples_used == b.samples_used && a.samples_rejected == b.samples_rejected;
}

}  // namespace

TEST_CASE("sample generation") {
  const auto a = generate_samples(uniform_spec(42, 3), 4);
  const auto b = generate_samples(uniform_spec(42, 3), 4);
  REQUIRE(a.size() == 3);
  CHECK(a == b);
  for (const auto& row : a) {
    CHECK(row.size() == 4);
    for (double x : row) CHECK((x >= 0.0 && x < 1.0));
  }
  CHECK(generate_samples(uniform_spec(43, 3), 4) != a);
  CHECK_THROWS_AS(generate_samples(uniform_spec(42, 0), 4), InputError);
  CHECK_THROWS_AS(generate_samples(uniform_spec(42, 3, 2.0, 1.0), 4), InputError);
  CHECK_THROWS_AS(generate_samples(uniform_spec(42, 3, -1.0, 1.0), 4), InputError);

  SampleSpec logu{SyntheticSource{SampleDistribution::LogUniform, 0.1, 100.0, 1}, 500};
  for (const auto& row : generate_samples(logu, 3))
    for (double x : row) CHECK((x >= 0.1 && x <= 100.0));
  logu.source = SyntheticSource{SampleDistribution::LogUniform, 0.0, 1.0, 1};
  CHECK_THROWS_AS(generate_samples(logu, 3), InputError);
}

TEST_CASE("synthetic samples do not depend on chunking") {
  const auto spec = uniform_spec(7, 5000, 0.0, 3.0);
  const auto serial = generate_samples(spec, 6, 1);
  for (std::size_t chunks : {2u, 3u, 16u}) CHECK(generate_samples(spec, 6, chunks) == serial);
  // A prefix of a longer run is the shorter run.
  const auto shorter = generate_samples(uniform_spec(7, 1500, 0.0, 3.0), 6);
  CHECK(std::equal(shorter.begin(), shorter.end(), serial.begin()));
}

TEST_CASE("trace samples pass through") {
  TraceSource t{{{1, 0, 0, 0}, {0, 0, 1, 1}, {1, 1, 1, 1}, {2, 0, 0, 2}, {0, 3, 0, 0}}};
  const auto out = generate_samples(SampleSpec{t, 5}, 4);
  CHECK(out == t.rows);
  CHECK(generate_samples(SampleSpec{t, 2}, 4).size() == 2);
  CHECK_THROWS_AS(generate_samples(SampleSpec{t, 6}, 4), InputError);
  CHECK_THROWS_AS(generate_samples(SampleSpec{t, 5}, 6), DimensionMismatch);
}

TEST_CASE("scenario examples") {
  const auto t3 = build_oracle(t3_catalog(), t3_latency()).first;
  const auto samples = generate_samples(uniform_spec(42, 200), 4);

  const auto same = simulate_scenario(t3, t3, samples);
  CHECK(same.mean_improvement == 1.0);
  CHECK(same.median_improvement == 1.0);
  CHECK(same.ci95_low == 1.0);
  CHECK(same.ci95_high == 1.0);
  CHECK(same.samples_used == 200);

  const auto half = simulate_scenario(t3, halved(t3), samples);
  CHECK(half.mean_improvement == 0.5);
  CHECK(half.median_improvement == 0.5);

  const Oracle only_d1d3({"c1", "c2"}, {t3.pair(1)},
                         std::vector<double>(t3.raw_row(1).begin(), t3.raw_row(1).end()));
  const auto one = simulate_scenario(t3, only_d1d3, {{1, 0, 0, 0}});
  CHECK(one.mean_improvement == 1.5);
  CHECK(one.ci95_low == 1.5);

  // Zero workload has zero baseline cost and is rejected, not fatal.
  const auto mixed = simulate_scenario(t3, t3, {{0, 0, 0, 0}, {1, 0, 0, 0}});
  CHECK(mixed.samples_used == 1);
  CHECK(mixed.samples_rejected == 1);
  CHECK_THROWS_AS(simulate_scenario(t3, t3, {{0, 0, 0, 0}}), InputError);
  CHECK_THROWS_AS(simulate_scenario(t3, t3, {}), InputError);
  CHECK_THROWS_AS(simulate_scenario(t3, t3, {{1, 0}}), DimensionMismatch);
  CHECK_THROWS_AS(simulate_scenario(t3, oracle_from_rows({{1, 2}}), samples), DimensionMismatch);
}

TEST_CASE("summary statistics against hand computation") {
  const auto s = summarize(RatioBatch{{1.0, 2.0, 3.0, 10.0}, 2});
  CHECK(s.mean_improvement == 4.0);
  CHECK(s.median_improvement == 2.5);
  const double sd = std::sqrt((9.0 + 4.0 + 1.0 + 36.0) / 3.0);
  CHECK(s.ci95_high - s.mean_improvement == doctest::Approx(1.96 * sd / 2.0).epsilon(1e-14));
  CHECK(s.ci95_low <= s.mean_improvement);
  CHECK(s.samples_used == 4);
  CHECK(s.samples_rejected == 2);
  CHECK(summarize(RatioBatch{{0.7, 0.2, 0.9}, 0}).median_improvement == 0.7);
}

TEST_CASE("determinism and partition invariance") {
  Rng rng(12);
  const auto inst = random_instance(rng, 20, 5);
  BuildConfig cfg;
  cfg.min_dist_km = 0;
  const auto a = build_oracle(inst.catalog, inst.latency, cfg).first;
  cfg.prune = false;
  const auto b_full = build_oracle(inst.catalog, inst.latency, cfg).first;
  const Oracle b(a.clients(), {a.pairs().begin(), a.pairs().begin() + 3},
                 {a.raw_planes().begin(), a.raw_planes().begin() + 3 * a.dims()});

  const auto samples = generate_samples(uniform_spec(5, 3000), a.num_params());
  const auto serial = simulate_scenario(a, b, samples, 1);
  CHECK(same_bits(serial, simulate_scenario(a, b, samples, 1)));
  for (std::size_t chunks : {2u, 5u}) CHECK(same_bits(serial, simulate_scenario(a, b, samples, chunks)));
  CHECK(serial.mean_improvement >= 1.0);  // a subset can only cost more
  CHECK(serial.median_improvement >= 1.0);

  // Merging per-chunk ratio lists reproduces the one-pass statistics.
  const std::vector<std::vector<double>> first(samples.begin(), samples.begin() + 1000),
      second(samples.begin() + 1000, samples.end());
  auto merged = scenario_ratios(a, b, first);
  const auto tail = scenario_ratios(a, b, second);
  merged.ratios.insert(merged.ratios.end(), tail.ratios.begin(), tail.ratios.end());
  merged.rejected += tail.rejected;
  CHECK(same_bits(serial, summarize(merged)));

  // Pruned and unpruned oracles have the same envelope.
  const auto env = simulate_scenario(a, b_full, samples);
  CHECK(env.mean_improvement == 1.0);
  CHECK(env.ci95_high == 1.0);
}
