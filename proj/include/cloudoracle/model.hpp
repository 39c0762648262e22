#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cloudoracle {

inline constexpr double kEarthRadiusKm = 6371.0;

enum class Role : std::uint8_t { Storage = 1, Client = 2 };

struct DataCenter {
  std::string id;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  std::uint8_t roles = 0;  // bitmask of Role

  bool has_role(Role r) const { return (roles & static_cast<std::uint8_t>(r)) != 0; }
};

using Catalog = std::vector<DataCenter>;

/// Throws InputError on out-of-range coordinates, empty roles or duplicate ids.
void validate_catalog(const Catalog& catalog);

/// Ids of catalog entries carrying `role`, in catalog order.
std::vector<std::string> ids_with_role(const Catalog& catalog, Role role);

/// Client x storage latency in milliseconds, row-major.
class LatencyMatrix {
 public:
  LatencyMatrix(std::vector<std::string> clients, std::vector<std::string> storages,
                std::vector<double> values);

  const std::vector<std::string>& clients() const { return clients_; }
  const std::vector<std::string>& storages() const { return storages_; }
  std::size_t num_clients() const { return clients_.size(); }
  std::size_t num_storages() const { return storages_.size(); }

  double at(std::size_t client, std::size_t storage) const {
    return values_[client * storages_.size() + storage];
  }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<std::string> clients_;
  std::vector<std::string> storages_;
  std::vector<double> values_;
};

/// Per-client write and read frequencies (requests/second).
struct Workload {
  std::vector<double> w;
  std::vector<double> r;

  /// Validating factory: equal lengths, finite, non-negative.
  static Workload make(std::vector<double> w, std::vector<double> r);
  /// Splits a parameter vector [w..., r...] of even length.
  static Workload from_params(std::span<const double> params);

  std::size_t num_clients() const { return w.size(); }
  /// Parameter vector a = [w, r].
  std::vector<double> params() const;
  Workload scaled(double k) const;
};

/// Storage pair hosting the two copies. Ids are ordered by storage index.
struct PlacementPair {
  std::array<std::string, 2> ids;
  std::array<std::uint32_t, 2> storage_index{};

  bool operator==(const PlacementPair&) const = default;
};

/// A candidate placement with its 2|C| coefficients: per-client max (write) then min (read).
struct Placement {
  PlacementPair pair;
  std::vector<double> coeffs;
};

/// Sum of coeffs[c]*w[c] followed by coeffs[|C|+c]*r[c], accumulated left to right.
double evaluate_cost(std::span<const double> coeffs, const Workload& workload);
double evaluate_cost(const Placement& placement, const Workload& workload);

/// Left-to-right dot product; every cost path in the library goes through this order.
inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double haversine_km(const DataCenter& a, const DataCenter& b);
double haversine_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);

/// Point in parameter x cost space: parameters, then cost.
struct LiftedPoint {
  std::vector<double> coords;
};

/// [w, r, 0]: the floor below the envelope at the given workload.
LiftedPoint lift_floor(const Workload& workload);

/// raw_row / ||raw_row||_2. Throws ConstructionError on a zero row.
std::vector<double> normalize_plane(std::span<const double> raw_row);

struct BuildConfig {
  double min_dist_km = 200.0;
  bool prune = true;
  std::size_t parallel_chunks = 1;

  bool operator==(const BuildConfig&) const = default;
};

struct BuildReport {
  std::size_t candidates_enumerated = 0;
  std::size_t pruned = 0;
  std::size_t retained = 0;
  double enumerate_seconds = 0.0;
  double prune_seconds = 0.0;
  double matrix_seconds = 0.0;

  double total_seconds() const { return enumerate_seconds + prune_seconds + matrix_seconds; }
  bool operator==(const BuildReport&) const = default;
};

struct BuildInfo {
  BuildConfig config;
  BuildReport report;

  bool operator==(const BuildInfo&) const = default;
};

/// Precomputed plane family over the placements' cost functions.
///
/// Row p of the raw matrix is [l_p, -1]: the hyperplane cost = l_p . a in
/// parameter x cost space, through the origin. The unit matrix holds the same
/// rows scaled to Euclidean norm 1 and is what geometric queries use. Immutable.
class Oracle {
 public:
  Oracle(std::vector<std::string> clients, std::vector<PlacementPair> pairs,
         std::vector<double> raw_planes, std::optional<BuildInfo> build_info = std::nullopt);

  /// Same oracle with build provenance attached; consumes *this.
  Oracle with_build_info(BuildInfo info) &&;

  const std::vector<std::string>& clients() const { return clients_; }
  std::size_t num_clients() const { return clients_.size(); }
  std::size_t num_params() const { return 2 * clients_.size(); }
  std::size_t dims() const { return 2 * clients_.size() + 1; }
  std::size_t size() const { return pairs_.size(); }

  const std::vector<PlacementPair>& pairs() const { return pairs_; }
  const PlacementPair& pair(std::size_t p) const { return pairs_[p]; }
  Placement placement(std::size_t p) const;

  /// Latency coefficients of placement p (raw row without the trailing -1).
  std::span<const double> coeffs(std::size_t p) const {
    return {raw_.data() + p * dims(), num_params()};
  }
  std::span<const double> raw_row(std::size_t p) const { return {raw_.data() + p * dims(), dims()}; }
  std::span<const double> unit_row(std::size_t p) const {
    return {unit_.data() + p * dims(), dims()};
  }
  std::span<const double> raw_planes() const { return raw_; }
  std::span<const double> unit_planes() const { return unit_; }

  const std::optional<BuildInfo>& build_info() const { return build_info_; }

  /// Bitwise equality of clients, pairs, raw planes and build provenance.
  bool identical_to(const Oracle& other) const;

 private:
  std::vector<std::string> clients_;
  std::vector<PlacementPair> pairs_;
  std::vector<double> raw_;
  std::vector<double> unit_;
  std::optional<BuildInfo> build_info_;
};

}  // namespace cloudoracle
