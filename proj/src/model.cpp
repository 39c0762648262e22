#include "cloudoracle/model.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "cloudoracle/errors.hpp"

namespace cloudoracle {

namespace {

bool all_finite_nonnegative(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) return false;
  }
  return true;
}

}  // namespace

void validate_catalog(const Catalog& catalog) {
  std::unordered_set<std::string> seen;
  for (const auto& dc : catalog) {
    if (dc.id.empty()) throw InputError("data center with empty id");
    if (!seen.insert(dc.id).second) throw InputError("duplicate data center id '" + dc.id + "'");
    if (!(dc.lat_deg >= -90.0 && dc.lat_deg <= 90.0))
      throw InputError("latitude out of range [-90, 90] for '" + dc.id + "'");
    if (!(dc.lon_deg > -180.0 && dc.lon_deg <= 180.0))
      throw InputError("longitude out of range (-180, 180] for '" + dc.id + "'");
    if (dc.roles == 0) throw InputError("data center '" + dc.id + "' has no roles");
  }
}

std::vector<std::string> ids_with_role(const Catalog& catalog, Role role) {
  std::vector<std::string> out;
  for (const auto& dc : catalog) {
    if (dc.has_role(role)) out.push_back(dc.id);
  }
  return out;
}

LatencyMatrix::LatencyMatrix(std::vector<std::string> clients, std::vector<std::string> storages,
                             std::vector<double> values)
    : clients_(std::move(clients)), storages_(std::move(storages)), values_(std::move(values)) {
  if (values_.size() != clients_.size() * storages_.size())
    throw DimensionMismatch("latency matrix has " + std::to_string(values_.size()) +
                            " values, expected " +
                            std::to_string(clients_.size() * storages_.size()));
  if (!all_finite_nonnegative(values_))
    throw InputError("latency values must be finite and non-negative");
}

Workload Workload::make(std::vector<double> w, std::vector<double> r) {
  if (w.size() != r.size())
    throw DimensionMismatch("write and read vectors differ in length (" +
                            std::to_string(w.size()) + " vs " + std::to_string(r.size()) + ")");
  if (!all_finite_nonnegative(w) || !all_finite_nonnegative(r))
    throw InputError("workload frequencies must be finite and non-negative");
  return Workload{std::move(w), std::move(r)};
}

Workload Workload::from_params(std::span<const double> params) {
  if (params.size() % 2 != 0)
    throw DimensionMismatch("parameter vector must have even length");
  const auto half = params.size() / 2;
  return make({params.begin(), params.begin() + half}, {params.begin() + half, params.end()});
}

std::vector<double> Workload::params() const {
  std::vector<double> a;
  a.reserve(w.size() + r.size());
  a.insert(a.end(), w.begin(), w.end());
  a.insert(a.end(), r.begin(), r.end());
  return a;
}

Workload Workload::scaled(double k) const {
  Workload out = *this;
  for (auto& x : out.w) x *= k;
  for (auto& x : out.r) x *= k;
  return out;
}

double evaluate_cost(std::span<const double> coeffs, const Workload& workload) {
  const auto n = workload.num_clients();
  if (coeffs.size() != 2 * n || workload.r.size() != n)
    throw DimensionMismatch("coefficient vector length " + std::to_string(coeffs.size()) +
                            " does not match workload of " + std::to_string(n) + " clients");
  double acc = 0.0;
  for (std::size_t c = 0; c < n; ++c) acc += coeffs[c] * workload.w[c];
  for (std::size_t c = 0; c < n; ++c) acc += coeffs[n + c] * workload.r[c];
  return acc;
}

double evaluate_cost(const Placement& placement, const Workload& workload) {
  return evaluate_cost(placement.coeffs, workload);
}

double haversine_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
  constexpr double to_rad = std::numbers::pi / 180.0;
  const double phi1 = lat1_deg * to_rad;
  const double phi2 = lat2_deg * to_rad;
  const double dphi = (lat2_deg - lat1_deg) * to_rad;
  const double dlambda = (lon2_deg - lon1_deg) * to_rad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

double haversine_km(const DataCenter& a, const DataCenter& b) {
  return haversine_km(a.lat_deg, a.lon_deg, b.lat_deg, b.lon_deg);
}

LiftedPoint lift_floor(const Workload& workload) {
  LiftedPoint p{workload.params()};
  p.coords.push_back(0.0);
  return p;
}

std::vector<double> normalize_plane(std::span<const double> raw_row) {
  double sq = 0.0;
  for (double x : raw_row) sq += x * x;
  const double norm = std::sqrt(sq);
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw ConstructionError("cannot normalize a zero or non-finite plane row");
  std::vector<double> out(raw_row.begin(), raw_row.end());
  for (auto& x : out) x /= norm;
  return out;
}

Oracle::Oracle(std::vector<std::string> clients, std::vector<PlacementPair> pairs,
               std::vector<double> raw_planes, std::optional<BuildInfo> build_info)
    : clients_(std::move(clients)),
      pairs_(std::move(pairs)),
      raw_(std::move(raw_planes)),
      build_info_(std::move(build_info)) {
  if (pairs_.empty()) throw ConstructionError("an oracle needs at least one placement");
  const auto cols = dims();
  if (raw_.size() != pairs_.size() * cols)
    throw DimensionMismatch("plane matrix size " + std::to_string(raw_.size()) +
                            " does not match " + std::to_string(pairs_.size()) + " x " +
                            std::to_string(cols));
  unit_.resize(raw_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    auto row = raw_row(p);
    if (row[cols - 1] != -1.0) throw ConstructionError("plane row must end in -1");
    if (!all_finite_nonnegative(row.first(cols - 1)))
      throw ConstructionError("plane coefficients must be finite and non-negative");
    auto unit = normalize_plane(row);
    std::copy(unit.begin(), unit.end(), unit_.begin() + static_cast<std::ptrdiff_t>(p * cols));
  }
}

Oracle Oracle::with_build_info(BuildInfo info) && {
  Oracle out = std::move(*this);
  out.build_info_ = std::move(info);
  return out;
}

Placement Oracle::placement(std::size_t p) const {
  auto c = coeffs(p);
  return Placement{pairs_.at(p), {c.begin(), c.end()}};
}

bool Oracle::identical_to(const Oracle& other) const {
  if (clients_ != other.clients_ || pairs_ != other.pairs_ || build_info_ != other.build_info_)
    return false;
  if (raw_.size() != other.raw_.size()) return false;
  for (std::size_t i = 0; i < raw_.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(raw_[i]) != std::bit_cast<std::uint64_t>(other.raw_[i]))
      return false;
  }
  return true;
}

}  // namespace cloudoracle
