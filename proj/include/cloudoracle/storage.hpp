#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cloudoracle/model.hpp"

namespace cloudoracle {

/// Oracle file layout, all integers and floats little-endian:
///   "CLDORCL1" | u32 version | u32 metadata_len | metadata (UTF-8 JSON)
///   | u32 P | u32 dims | P*dims f64 raw planes, row-major
/// Unit planes are not stored; they are recomputed on load.
inline constexpr std::string_view kOracleMagic = "CLDORCL1";
inline constexpr std::uint32_t kOracleFormatVersion = 1;

/// JSON array of {"id", "lat_deg", "lon_deg", "roles": ["storage"|"client", ...]}.
Catalog parse_datacenters(std::string_view json_text);
Catalog load_datacenters(const std::filesystem::path& path);

/// CSV with header "client_id,<storage ids...>" and one row per client. The
/// result follows catalog order for both clients and storages; every catalog
/// client and storage must appear exactly once.
LatencyMatrix parse_latency_csv(std::string_view csv_text, const Catalog& catalog);
LatencyMatrix load_latency_matrix(const std::filesystem::path& path, const Catalog& catalog);

/// Headerless CSV, one sample per line with 2*num_clients non-negative values (w then r).
std::vector<std::vector<double>> parse_trace(std::string_view csv_text, std::size_t num_clients);
std::vector<std::vector<double>> load_trace(const std::filesystem::path& path,
                                            std::size_t num_clients);

std::string encode_oracle(const Oracle& oracle);
Oracle decode_oracle(std::string_view bytes);

void save_oracle(const Oracle& oracle, const std::filesystem::path& path);
Oracle load_oracle(const std::filesystem::path& path);

/// Whole file as bytes. Throws InputError when unreadable.
std::string read_file(const std::filesystem::path& path);

}  // namespace cloudoracle
