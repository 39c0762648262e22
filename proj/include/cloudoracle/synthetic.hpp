#pragma once

#include <cstddef>
#include <cstdint>

#include "cloudoracle/model.hpp"

namespace cloudoracle {

enum class LatencyModel {
  Uniform,     // independent uniform latencies in [1, 300) ms
  Geographic,  // 2 ms + great-circle km / 100, +/-10% jitter
};

enum class ClientLayout {
  Global,    // clients anywhere on the sphere
  Regional,  // clients within ~1500 km of one center
};

struct SyntheticTopology {
  Catalog catalog;
  LatencyMatrix latency;
};

/// Random topology with storage sites "s000".. anywhere on the sphere and
/// client sites "c000".. placed per `layout`. Deterministic in `seed`.
SyntheticTopology make_synthetic_topology(std::size_t num_storages, std::size_t num_clients,
                                          std::uint64_t seed,
                                          LatencyModel model = LatencyModel::Uniform,
                                          ClientLayout layout = ClientLayout::Global);

}  // namespace cloudoracle
