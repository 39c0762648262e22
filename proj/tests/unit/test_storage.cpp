#include <doctest.h>

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "cloudoracle/builder.hpp"
#include "cloudoracle/errors.hpp"
#include "cloudoracle/storage.hpp"
#include "unit/support.hpp"

using namespace cloudoracle;
using namespace testsupport;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "cloudoracle-storage-test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

template <typename T>
void put(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

}  // namespace

TEST_CASE("fixtures parse to the T3 instance") {
  const auto cat = load_datacenters(fixture("t3_datacenters.json"));
  REQUIRE(cat.size() == 5);
  const auto want = t3_catalog();
  for (std::size_t i = 0; i < cat.size(); ++i) {
    CHECK(cat[i].id == want[i].id);
    CHECK(cat[i].lat_deg == want[i].lat_deg);
    CHECK(cat[i].lon_deg == want[i].lon_deg);
    CHECK(cat[i].roles == want[i].roles);
  }
  const auto lat = load_latency_matrix(fixture("t3_latency.csv"), cat);
  CHECK(lat.clients() == std::vector<std::string>{"c1", "c2"});
  CHECK(lat.storages() == std::vector<std::string>{"d1", "d2", "d3"});
  CHECK(std::vector<double>(lat.values().begin(), lat.values().end()) ==
        std::vector<double>{10, 20, 30, 30, 20, 10});
}

TEST_CASE("catalog parsing") {
  const auto one = parse_datacenters(R"([{"id":"d1","lat_deg":0,"lon_deg":0,"roles":["storage"]}])");
  REQUIRE(one.size() == 1);
  CHECK(one[0].has_role(Role::Storage));
  CHECK(!one[0].has_role(Role::Client));
  const auto both = parse_datacenters(R"([{"id":"x","lat_deg":1,"lon_deg":2,"roles":["storage","client"]}])");
  CHECK(both[0].has_role(Role::Client));

  CHECK_THROWS_AS(parse_datacenters(R"([{"id":"d1","lat_deg":0,"lon_deg":0,"roles":["storage"]},
                                        {"id":"d1","lat_deg":5,"lon_deg":5,"roles":["storage"]}])"),
                  InputError);
  CHECK_THROWS_AS(parse_datacenters(R"([{"id":"d1","lat_deg":91,"lon_deg":0,"roles":["storage"]}])"),
                  InputError);
  CHECK_THROWS_AS(parse_datacenters(R"([{"id":"d1","lat_deg":0,"lon_deg":0,"roles":[]}])"), InputError);
  CHECK_THROWS_AS(parse_datacenters(R"([{"id":"d1","lat_deg":0,"lon_deg":0,"roles":["cache"]}])"),
                  InputError);
  CHECK_THROWS_AS(parse_datacenters(R"([{"id":"d1","lon_deg":0,"roles":["storage"]}])"), InputError);
  CHECK_THROWS_AS(parse_datacenters(R"({"id":"d1"})"), InputError);
  CHECK_THROWS_AS(parse_datacenters("[{"), InputError);
  CHECK_THROWS_AS(load_datacenters(fixture("does_not_exist.json")), InputError);
}

TEST_CASE("latency csv parsing") {
  const auto cat = t3_catalog();
  // Columns and rows in a different order still land in catalog order.
  const auto shuffled = parse_latency_csv("client_id,d3,d1,d2\nc2,10,30,20\nc1,30,10,20\n", cat);
  CHECK(std::vector<double>(shuffled.values().begin(), shuffled.values().end()) ==
        std::vector<double>{10, 20, 30, 30, 20, 10});
  CHECK_NOTHROW(parse_latency_csv("client_id,d1,d2,d3\r\nc1,10,20,30\r\nc2,30,20,10\r\n", cat));

  CHECK_THROWS_AS(parse_latency_csv("client_id,d1,d2\nc1,10,20\nc2,30,20\n", cat), InputError);
  CHECK_THROWS_AS(parse_latency_csv("client_id,d1,d2,d3\nc1,10,20,30\nc2,30,-1,10\n", cat), InputError);
  CHECK_THROWS_AS(parse_latency_csv("client_id,d1,d2,d3\nc1,10,20,30\nc2,30,20\n", cat), InputError);
  CHECK_THROWS_AS(parse_latency_csv("client_id,d1,d2,d9\nc1,10,20,30\nc2,30,20,10\n", cat), InputError);
  CHECK_THROWS_AS(parse_latency_csv("client_id,d1,d2,d3\nc1,10,20,30\nc1,30,20,10\n", cat), InputError);
  CHECK_THROWS_AS(parse_latency_csv("client_id,d1,d2,d3\nc1,10,20,30\n", cat), InputError);
  CHECK_THROWS_AS(parse_latency_csv("client_id,d1,d2,d3\nc1,10,20,x\nc2,30,20,10\n", cat), InputError);
  CHECK_THROWS_AS(parse_latency_csv("id,d1,d2,d3\nc1,10,20,30\nc2,30,20,10\n", cat), InputError);
}

TEST_CASE("trace parsing") {
  const auto rows = parse_trace("1,0,0,0\n", 2);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == std::vector<double>{1, 0, 0, 0});
  CHECK_THROWS_AS(parse_trace("1,0,0\n", 2), InputError);
  CHECK_THROWS_AS(parse_trace("1,0,-2,0\n", 2), InputError);
  CHECK(parse_trace("", 2).empty());
  CHECK(load_trace(fixture("t3_trace.csv"), 2).size() == 3);
}

TEST_CASE("oracle file round trip") {
  const auto [o, report] = build_oracle(t3_catalog(), t3_latency());
  const auto path = temp_path("t3.oracle");
  save_oracle(o, path);
  const auto back = load_oracle(path);
  CHECK(back.identical_to(o));
  CHECK(back.build_info() == o.build_info());
  CHECK(back.pairs() == o.pairs());
  CHECK(std::equal(back.unit_planes().begin(), back.unit_planes().end(), o.unit_planes().begin(),
                   o.unit_planes().end()));

  const auto plain = oracle_from_rows({{1, 3}, {3, 1}});
  CHECK(decode_oracle(encode_oracle(plain)).identical_to(plain));
  CHECK(!decode_oracle(encode_oracle(plain)).build_info().has_value());
}

TEST_CASE("oracle byte layout") {
  const auto plain = oracle_from_rows({{0.5, 3}});
  const std::string bytes = encode_oracle(plain);
  CHECK(bytes.substr(0, 8) == "CLDORCL1");
  std::uint32_t version = 0, meta_len = 0;
  std::memcpy(&version, bytes.data() + 8, 4);
  std::memcpy(&meta_len, bytes.data() + 12, 4);
  CHECK(version == 1);
  const auto meta = nlohmann::json::parse(bytes.substr(16, meta_len));
  CHECK(meta.at("clients") == nlohmann::json::array({"c0"}));
  std::uint32_t p = 0, dims = 0;
  std::memcpy(&p, bytes.data() + 16 + meta_len, 4);
  std::memcpy(&dims, bytes.data() + 20 + meta_len, 4);
  CHECK(p == 1);
  CHECK(dims == 3);
  CHECK(bytes.size() == 24 + meta_len + 3 * 8);
  double first = 0;
  std::memcpy(&first, bytes.data() + 24 + meta_len, 8);
  CHECK(first == 0.5);

  // Hand-assembled file with the same content decodes to the same oracle.
  std::string manual = "CLDORCL1";
  const std::string meta_text = meta.dump();
  put<std::uint32_t>(manual, 1);
  put<std::uint32_t>(manual, static_cast<std::uint32_t>(meta_text.size()));
  manual += meta_text;
  put<std::uint32_t>(manual, 1);
  put<std::uint32_t>(manual, 3);
  for (double v : {0.5, 3.0, -1.0}) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put<std::uint64_t>(manual, bits);
  }
  CHECK(decode_oracle(manual).identical_to(plain));
}

TEST_CASE("corrupt oracle files") {
  const std::string good = encode_oracle(oracle_from_rows({{1, 3}, {3, 1}}));
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(decode_oracle(bad_magic), FormatError);
  std::string bad_version = good;
  bad_version[8] = 2;
  CHECK_THROWS_AS(decode_oracle(bad_version), FormatError);
  CHECK_THROWS_AS(decode_oracle(good.substr(0, good.size() - 4)), FormatError);
  CHECK_THROWS_AS(decode_oracle(good.substr(0, 10)), FormatError);
  CHECK_THROWS_AS(decode_oracle(good + "x"), FormatError);
  CHECK_THROWS_AS(decode_oracle(""), FormatError);

  const auto path = temp_path("truncated.oracle");
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << good.substr(0, good.size() - 8);
  }
  CHECK_THROWS_AS(load_oracle(path), FormatError);
  CHECK_THROWS_AS(load_oracle(temp_path("missing.oracle")), InputError);
}

TEST_CASE("random oracles round trip bit-identically") {
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    const auto inst = random_instance(rng, rng.index(3, 25), rng.index(1, 6));
    BuildConfig cfg;
    cfg.min_dist_km = 0;
    cfg.prune = i % 2 == 0;
    const auto o = build_oracle(inst.catalog, inst.latency, cfg).first;
    CHECK(decode_oracle(encode_oracle(o)).identical_to(o));
    CHECK(encode_oracle(decode_oracle(encode_oracle(o))) == encode_oracle(o));
  }
}
