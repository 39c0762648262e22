#pragma once

#include <cstdint>
#include <random>

namespace cloudoracle {

/// Sample streams are std::mt19937_64 engines seeded through std::seed_seq from
/// (seed, stream id). Both are specified bit-for-bit by the standard, so the
/// draws are identical on every platform and independent of how work is split.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) from the top 53 bits. Used instead of
/// std::uniform_real_distribution, whose output is implementation-defined.
inline double unit_uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace cloudoracle
