#include "cloudoracle/storage.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cloudoracle/errors.hpp"
#include "cloudoracle/json_codec.hpp"

namespace cloudoracle {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = trim(text.substr(0, nl));
    if (!line.empty()) lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

double parse_number(std::string_view field, const std::string& where) {
  double v = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || field.empty())
    throw InputError("not a number '" + std::string(field) + "' at " + where);
  if (!std::isfinite(v)) throw InputError("non-finite value at " + where);
  if (v < 0.0) throw InputError("negative value " + std::string(field) + " at " + where);
  return v;
}

Role parse_role(const std::string& s) {
  if (s == "storage") return Role::Storage;
  if (s == "client") return Role::Client;
  throw InputError("unknown role '" + s + "'");
}

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t b = 0; b < sizeof(T); ++b)
    out.push_back(static_cast<char>((value >> (8 * b)) & 0xFF));
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view take(std::size_t n, const char* what) {
    if (bytes_.size() - pos_ < n)
      throw FormatError(std::string("truncated oracle file: missing ") + what);
    auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

  template <typename T>
  T le(const char* what) {
    auto raw = take(sizeof(T), what);
    T v = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b)
      v |= static_cast<T>(static_cast<unsigned char>(raw[b])) << (8 * b);
    return v;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Catalog parse_datacenters(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("data center catalog is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw InputError("data center catalog must be a JSON array");
  Catalog catalog;
  catalog.reserve(doc.size());
  for (const auto& entry : doc) {
    try {
      DataCenter dc;
      dc.id = entry.at("id").get<std::string>();
      dc.lat_deg = entry.at("lat_deg").get<double>();
      dc.lon_deg = entry.at("lon_deg").get<double>();
      for (const auto& role : entry.at("roles"))
        dc.roles |= static_cast<std::uint8_t>(parse_role(role.get<std::string>()));
      catalog.push_back(std::move(dc));
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("malformed data center entry: ") + e.what());
    }
  }
  validate_catalog(catalog);
  return catalog;
}

Catalog load_datacenters(const std::filesystem::path& path) {
  return parse_datacenters(read_file(path));
}

LatencyMatrix parse_latency_csv(std::string_view csv_text, const Catalog& catalog) {
  const auto lines = split_lines(csv_text);
  if (lines.empty()) throw InputError("latency CSV is empty");
  const auto header = split_fields(lines[0]);
  if (header[0] != "client_id") throw InputError("latency CSV header must start with client_id");

  const auto clients = ids_with_role(catalog, Role::Client);
  const auto storages = ids_with_role(catalog, Role::Storage);
  std::unordered_map<std::string, std::size_t> client_pos;
  std::unordered_map<std::string, std::size_t> storage_pos;
  for (std::size_t i = 0; i < clients.size(); ++i) client_pos.emplace(clients[i], i);
  for (std::size_t i = 0; i < storages.size(); ++i) storage_pos.emplace(storages[i], i);

  // Column k of the file maps to catalog storage column_to_storage[k].
  std::vector<std::size_t> column_to_storage;
  std::unordered_set<std::string> seen_cols;
  for (std::size_t k = 1; k < header.size(); ++k) {
    const std::string id(header[k]);
    auto it = storage_pos.find(id);
    if (it == storage_pos.end()) throw InputError("unknown storage id '" + id + "' in header");
    if (!seen_cols.insert(id).second) throw InputError("duplicate storage column '" + id + "'");
    column_to_storage.push_back(it->second);
  }
  for (const auto& id : storages) {
    if (!seen_cols.contains(id)) throw InputError("missing latency column for storage '" + id + "'");
  }

  std::vector<double> values(clients.size() * storages.size());
  std::vector<char> row_seen(clients.size(), 0);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split_fields(lines[li]);
    const std::string where = "line " + std::to_string(li + 1);
    if (fields.size() != header.size())
      throw InputError("ragged row at " + where + ": " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(header.size()));
    const std::string id(fields[0]);
    auto it = client_pos.find(id);
    if (it == client_pos.end()) throw InputError("unknown client id '" + id + "' at " + where);
    if (row_seen[it->second]) throw InputError("duplicate row for client '" + id + "'");
    row_seen[it->second] = 1;
    for (std::size_t k = 1; k < fields.size(); ++k)
      values[it->second * storages.size() + column_to_storage[k - 1]] =
          parse_number(fields[k], where);
  }
  for (std::size_t c = 0; c < clients.size(); ++c) {
    if (!row_seen[c]) throw InputError("missing latency row for client '" + clients[c] + "'");
  }
  return LatencyMatrix(clients, storages, std::move(values));
}

LatencyMatrix load_latency_matrix(const std::filesystem::path& path, const Catalog& catalog) {
  return parse_latency_csv(read_file(path), catalog);
}

std::vector<std::vector<double>> parse_trace(std::string_view csv_text, std::size_t num_clients) {
  std::vector<std::vector<double>> rows;
  const auto lines = split_lines(csv_text);
  rows.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const auto fields = split_fields(lines[li]);
    const std::string where = "trace line " + std::to_string(li + 1);
    if (fields.size() != 2 * num_clients)
      throw DimensionMismatch(where + " has " + std::to_string(fields.size()) +
                              " values, expected " + std::to_string(2 * num_clients));
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_number(f, where));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<double>> load_trace(const std::filesystem::path& path,
                                            std::size_t num_clients) {
  return parse_trace(read_file(path), num_clients);
}

std::string encode_oracle(const Oracle& oracle) {
  nlohmann::json meta;
  meta["clients"] = oracle.clients();
  auto placements = nlohmann::json::array();
  for (const auto& pair : oracle.pairs())
    placements.push_back({{"ids", {pair.ids[0], pair.ids[1]}},
                          {"storage_index", {pair.storage_index[0], pair.storage_index[1]}}});
  meta["placements"] = std::move(placements);
  if (const auto& info = oracle.build_info()) {
    meta["build_config"] = codec::to_json(info->config);
    meta["build_report"] = codec::to_json(info->report);
  } else {
    meta["build_config"] = nullptr;
    meta["build_report"] = nullptr;
  }
  const std::string meta_text = meta.dump();

  std::string out;
  const auto planes = oracle.raw_planes();
  out.reserve(kOracleMagic.size() + 16 + meta_text.size() + planes.size() * 8);
  out.append(kOracleMagic);
  put_le<std::uint32_t>(out, kOracleFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(meta_text.size()));
  out.append(meta_text);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(oracle.size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(oracle.dims()));
  for (double x : planes) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(x));
  return out;
}

Oracle decode_oracle(std::string_view bytes) {
  Reader in(bytes);
  if (in.take(kOracleMagic.size(), "magic") != kOracleMagic)
    throw FormatError("not an oracle file: bad magic");
  const auto version = in.le<std::uint32_t>("format version");
  if (version != kOracleFormatVersion)
    throw FormatError("unsupported oracle format version " + std::to_string(version));
  const auto meta_len = in.le<std::uint32_t>("metadata length");
  const auto meta_text = in.take(meta_len, "metadata");

  std::vector<std::string> clients;
  std::vector<PlacementPair> pairs;
  std::optional<BuildInfo> info;
  try {
    const auto meta = nlohmann::json::parse(meta_text);
    clients = meta.at("clients").get<std::vector<std::string>>();
    for (const auto& p : meta.at("placements")) {
      PlacementPair pair;
      pair.ids = {p.at("ids").at(0).get<std::string>(), p.at("ids").at(1).get<std::string>()};
      pair.storage_index = {p.at("storage_index").at(0).get<std::uint32_t>(),
                            p.at("storage_index").at(1).get<std::uint32_t>()};
      pairs.push_back(std::move(pair));
    }
    if (!meta.at("build_config").is_null())
      info = BuildInfo{codec::build_config_from_json(meta.at("build_config")),
                       codec::build_report_from_json(meta.at("build_report"))};
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("corrupt oracle metadata: ") + e.what());
  } catch (const InputError& e) {
    throw FormatError(std::string("corrupt oracle metadata: ") + e.what());
  }

  const auto rows = in.le<std::uint32_t>("plane count");
  const auto cols = in.le<std::uint32_t>("plane dimension");
  if (rows != pairs.size())
    throw FormatError("plane count " + std::to_string(rows) + " disagrees with " +
                      std::to_string(pairs.size()) + " placements in metadata");
  if (cols != 2 * clients.size() + 1)
    throw FormatError("plane dimension " + std::to_string(cols) + " disagrees with " +
                      std::to_string(clients.size()) + " clients");
  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  if (in.remaining() / 8 < count) throw FormatError("truncated oracle file: plane matrix");
  std::vector<double> raw(count);
  for (auto& x : raw) x = std::bit_cast<double>(in.le<std::uint64_t>("plane matrix"));
  if (in.remaining() != 0) throw FormatError("trailing bytes after plane matrix");

  try {
    return Oracle(std::move(clients), std::move(pairs), std::move(raw), std::move(info));
  } catch (const ConstructionError& e) {
    throw FormatError(std::string("invalid plane matrix: ") + e.what());
  }
}

void save_oracle(const Oracle& oracle, const std::filesystem::path& path) {
  const auto bytes = encode_oracle(oracle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

Oracle load_oracle(const std::filesystem::path& path) { return decode_oracle(read_file(path)); }

}  // namespace cloudoracle
