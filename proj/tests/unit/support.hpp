// Shared fixtures and brute-force reference implementations for the tests.
// Nothing here calls into the code under test except constructors.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cloudoracle/model.hpp"
#include "cloudoracle/random.hpp"

namespace testsupport {

using namespace cloudoracle;

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CLOUDORACLE_FIXTURES) / name;
}

inline DataCenter dc(std::string id, double lat, double lon, Role role) {
  return DataCenter{std::move(id), lat, lon, static_cast<std::uint8_t>(role)};
}

// Two clients, three storage sites about 1100 km apart along the equator.
inline Catalog t3_catalog(bool with_d4 = false) {
  Catalog c{dc("c1", 10, 0, Role::Client), dc("c2", 10, 20, Role::Client),
            dc("d1", 0, 0, Role::Storage), dc("d2", 0, 10, Role::Storage),
            dc("d3", 0, 20, Role::Storage)};
  if (with_d4) c.push_back(dc("d4", 0, 30, Role::Storage));
  return c;
}

inline LatencyMatrix t3_latency(bool with_d4 = false) {
  if (with_d4)
    return LatencyMatrix({"c1", "c2"}, {"d1", "d2", "d3", "d4"}, {10, 20, 30, 40, 30, 20, 10, 40});
  return LatencyMatrix({"c1", "c2"}, {"d1", "d2", "d3"}, {10, 20, 30, 30, 20, 10});
}

// Oracle straight from coefficient rows; pair ids are p0a/p0b, p1a/p1b, ...
inline Oracle oracle_from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t params = rows.at(0).size();
  std::vector<std::string> clients;
  for (std::size_t c = 0; c < params / 2; ++c) clients.push_back("c" + std::to_string(c));
  std::vector<PlacementPair> pairs;
  std::vector<double> raw;
  for (std::size_t p = 0; p < rows.size(); ++p) {
    const auto id = "p" + std::to_string(p);
    pairs.push_back(PlacementPair{{id + "a", id + "b"},
                                  {static_cast<std::uint32_t>(2 * p),
                                   static_cast<std::uint32_t>(2 * p + 1)}});
    raw.insert(raw.end(), rows[p].begin(), rows[p].end());
    raw.push_back(-1.0);
  }
  return Oracle(clients, pairs, raw);
}

inline double naive_cost(const std::vector<double>& coeffs, const std::vector<double>& params) {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) s += coeffs[i] * params[i];
  return s;
}

inline double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Coefficients of the pair (i, j) computed from the latency matrix directly.
inline std::vector<double> pair_coeffs(const LatencyMatrix& l, std::size_t i, std::size_t j) {
  const std::size_t n = l.num_clients();
  std::vector<double> out(2 * n);
  for (std::size_t c = 0; c < n; ++c) {
    out[c] = std::max(l.at(c, i), l.at(c, j));
    out[n + c] = std::min(l.at(c, i), l.at(c, j));
  }
  return out;
}

// q knocks out p: q <= p everywhere and strictly somewhere, or q == p and q came first.
inline bool knocks_out(const std::vector<double>& q, std::size_t qi, const std::vector<double>& p,
                       std::size_t pi) {
  bool strict = false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (q[k] > p[k]) return false;
    if (q[k] < p[k]) strict = true;
  }
  return strict || qi < pi;
}

// Indices that survive pruning, by checking every ordered pair.
inline std::vector<std::size_t> reference_survivors(const std::vector<std::vector<double>>& rows) {
  std::vector<std::size_t> keep;
  for (std::size_t p = 0; p < rows.size(); ++p) {
    bool out = false;
    for (std::size_t q = 0; q < rows.size() && !out; ++q)
      if (q != p && knocks_out(rows[q], q, rows[p], p)) out = true;
    if (!out) keep.push_back(p);
  }
  return keep;
}

struct Rng {
  std::mt19937_64 engine;
  explicit Rng(std::uint64_t seed) : engine(stream_engine(seed, 0xfeed)) {}
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit_uniform(engine); }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(engine() % (hi - lo + 1));
  }
  std::vector<double> vec(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }
};

// Random topology with storage sites spread far apart so most pairs are feasible.
struct Instance {
  Catalog catalog;
  LatencyMatrix latency;
};

inline Instance random_instance(Rng& rng, std::size_t storages, std::size_t clients,
                                bool integer_latency = false) {
  Catalog cat;
  std::vector<std::string> cid, sid;
  for (std::size_t c = 0; c < clients; ++c) {
    cid.push_back("k" + std::to_string(c));
    cat.push_back(dc(cid.back(), rng.uniform(-60, 60), rng.uniform(-179, 179), Role::Client));
  }
  for (std::size_t d = 0; d < storages; ++d) {
    sid.push_back("s" + std::to_string(d));
    cat.push_back(dc(sid.back(), rng.uniform(-80, 80), rng.uniform(-179, 179), Role::Storage));
  }
  std::vector<double> values(clients * storages);
  for (auto& v : values) v = integer_latency ? std::floor(rng.uniform(1, 8)) : rng.uniform(1, 300);
  return {cat, LatencyMatrix(cid, sid, values)};
}

}  // namespace testsupport
