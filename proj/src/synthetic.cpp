#include "cloudoracle/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <tuple>

#include "cloudoracle/random.hpp"

namespace cloudoracle {

namespace {

std::string site_id(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%03zu", prefix, i);
  return buf;
}

// Area-uniform point on the sphere, longitude in (-180, 180].
std::pair<double, double> sphere_point(std::mt19937_64& rng) {
  const double z = 2.0 * unit_uniform(rng) - 1.0;
  const double lat = std::asin(z) * 180.0 / std::numbers::pi;
  const double lon = 180.0 - 360.0 * unit_uniform(rng);
  return {lat, lon};
}

}  // namespace

SyntheticTopology make_synthetic_topology(std::size_t num_storages, std::size_t num_clients,
                                          std::uint64_t seed, LatencyModel model,
                                          ClientLayout layout) {
  auto rng = stream_engine(seed, 0);
  Catalog catalog;
  catalog.reserve(num_storages + num_clients);
  for (std::size_t d = 0; d < num_storages; ++d) {
    auto [lat, lon] = sphere_point(rng);
    catalog.push_back({site_id('s', d), lat, lon, static_cast<std::uint8_t>(Role::Storage)});
  }
  const auto [center_lat, center_lon] = sphere_point(rng);
  for (std::size_t c = 0; c < num_clients; ++c) {
    double lat = 0.0;
    double lon = 0.0;
    if (layout == ClientLayout::Global) {
      std::tie(lat, lon) = sphere_point(rng);
    } else {
      // ~13.5 degrees of arc is ~1500 km.
      lat = std::clamp(center_lat + 13.5 * (2.0 * unit_uniform(rng) - 1.0), -89.0, 89.0);
      lon = center_lon + 13.5 * (2.0 * unit_uniform(rng) - 1.0);
      if (lon > 180.0) lon -= 360.0;
      if (lon <= -180.0) lon += 360.0;
    }
    catalog.push_back({site_id('c', c), lat, lon, static_cast<std::uint8_t>(Role::Client)});
  }

  std::vector<double> values(num_clients * num_storages);
  for (std::size_t c = 0; c < num_clients; ++c) {
    const auto& client = catalog[num_storages + c];
    for (std::size_t d = 0; d < num_storages; ++d) {
      double& v = values[c * num_storages + d];
      if (model == LatencyModel::Uniform) {
        v = 1.0 + 299.0 * unit_uniform(rng);
      } else {
        const double km = haversine_km(client, catalog[d]);
        v = (2.0 + km / 100.0) * (0.9 + 0.2 * unit_uniform(rng));
      }
    }
  }

  auto clients = ids_with_role(catalog, Role::Client);
  auto storages = ids_with_role(catalog, Role::Storage);
  LatencyMatrix latency(std::move(clients), std::move(storages), std::move(values));
  return {std::move(catalog), std::move(latency)};
}

}  // namespace cloudoracle
