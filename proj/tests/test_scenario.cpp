#include <doctest.h>

#include <Eigen/Dense>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "olfc/csv.hpp"
#include "olfc/errors.hpp"
#include "olfc/scenario.hpp"

using nlohmann::json;
using namespace olfc;

namespace {

#ifndef OLFC_CONFIG_DIR
#define OLFC_CONFIG_DIR "configs"
#endif

json mini_config() {
  return json::parse(R"({
    "name": "mini",
    "areas": [
      {"kind": "conventional", "tau_p": 4.0, "tau_v": 6.0, "psi": 1.5,
       "X_d": 1.8, "X_dp": 0.3, "E_f": 3.9, "B_self": -20.0,
       "cost": {"q": 2.0}, "governor": {"tau_c": 7.0, "xi": 0.7}},
      {"kind": "conventional", "tau_p": 4.2, "tau_v": 6.2, "psi": 1.4,
       "X_d": 1.7, "X_dp": 0.25, "E_f": 3.8, "B_self": -21.0,
       "cost": {"q": 3.0}, "governor": {"tau_c": 6.5, "xi": 0.7}}
    ],
    "edges": [{"areas": [1, 2], "B_line": 15.0}],
    "controller": {"tau_delta": 0.2},
    "schedule": [{"time": 0.0, "P_load": [1.0, 1.2]}],
    "sim": {"horizon": 10.0}
  })");
}

void expect_config_error(const json& j, const std::string& fragment) {
  try {
    parse_config(j, "test");
    FAIL_CHECK("expected ConfigError mentioning \"" << fragment << "\"");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK_MESSAGE(what.find(fragment) != std::string::npos,
                  "message \"" << what << "\" lacks \"" << fragment << "\"");
  }
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

TEST_CASE("the bundled four-area config loads with every field in place") {
  const ScenarioConfig cfg =
      load_config(std::string(OLFC_CONFIG_DIR) + "/four_area.json");
  const SystemModel& mod = cfg.model;
  CHECK(cfg.name == "four-area benchmark");
  REQUIRE(mod.n() == 4);
  CHECK(mod.nc() == 3);
  CHECK(mod.nw() == 1);
  CHECK(mod.m() == 4);

  CHECK(mod.grid.chi_d(0) == doctest::Approx(1.49).epsilon(1e-12));
  CHECK(mod.grid.chi_d(3) == doctest::Approx(1.56).epsilon(1e-12));
  CHECK(mod.topo.B_line(0) == 30.0);
  CHECK(mod.topo.B_line(3) == 24.5);
  CHECK(mod.topo.B_self(1) == -58.5);
  CHECK(mod.governors[2].tau_c == 8.9);
  CHECK(mod.dfigs[0].X_m == 3.6);
  CHECK(mod.dfigs[0].V_t == 1.0);            // default applied
  CHECK(mod.dfigs[0].air_density == 1.225);  // default applied
  CHECK(mod.winds[0].mu_w == 17.15);
  CHECK(mod.winds[0].v_pred == 0.6);
  CHECK((mod.tau_delta.array() == 0.2).all());  // scalar broadcast
  CHECK(mod.epsilon_guard == 1e-4);
  CHECK(mod.v_cap == 0.5);

  REQUIRE(cfg.schedule.size() == 2);
  CHECK(cfg.schedule[1].time == 5.0);
  CHECK(cfg.schedule[1].P_load(3) == 0.55);
  REQUIRE(cfg.schedule[1].v_tilde_set.size() == 1);
  CHECK(cfg.schedule[1].v_tilde_set(0) == 0.1);
  CHECK((mod.grid.P_load - cfg.schedule[0].P_load).cwiseAbs().maxCoeff() ==
        0.0);

  CHECK(cfg.sim.dt == 5e-5);
  CHECK(cfg.sim.horizon == 30.0);
  CHECK(cfg.sim.master_seed == 42);
  CHECK(cfg.sim.n_paths == 64);
  CHECK(cfg.sim.record_stride == 1000);
}

TEST_CASE("config errors name the offending key path") {
  json j = mini_config();
  j.erase("areas");
  expect_config_error(j, "$.areas");

  j = mini_config();
  j["areas"][1]["cost"]["q"] = 0.0;
  expect_config_error(j, "cost.q");

  j = mini_config();
  j["areas"][0]["X_dp"] = 2.0;
  expect_config_error(j, "X_d");

  j = mini_config();
  j["areas"][0]["kind"] = "solar";
  expect_config_error(j, "kind");

  j = mini_config();
  j["edges"][0]["areas"] = {1, 9};
  expect_config_error(j, "$.edges[0]");

  j = mini_config();
  j["schedule"][0]["time"] = 0.5;
  expect_config_error(j, "$.schedule[0]");

  j = mini_config();
  j["schedule"].push_back({{"time", 20.0}, {"P_load", {1.0, 1.2}}});
  expect_config_error(j, "horizon");

  j = mini_config();
  j["sim"]["seed"] = -3;
  expect_config_error(j, "$.sim.seed");

  j = mini_config();
  j["controller"]["tau_delta"] = {0.2, 0.2, 0.2};
  expect_config_error(j, "tau_delta");

  j = mini_config();
  j["areas"][0]["governor"].erase("xi");
  expect_config_error(j, "governor");
}

TEST_CASE("wind areas must follow conventional ones") {
  json j = mini_config();
  json wind_area = json::parse(R"({
    "kind": "wind", "tau_p": 4.17, "tau_v": 6.46, "psi": 1.55,
    "X_d": 1.91, "X_dp": 0.35, "E_f": 3.88, "B_self": -49.4,
    "cost": {"q": 1.0},
    "dfig": {"R_s": 0.031, "R_r": 0.025, "X_s": 3.62, "X_r": 3.61,
             "X_m": 3.6, "H": 3.2},
    "wind": {"mu_w": 17.15, "sigma_w": 2.65}
  })");
  j["areas"].insert(j["areas"].begin(), wind_area);
  j["schedule"][0]["P_load"] = {0.5, 1.0, 1.2};
  expect_config_error(j, "precede");
}

TEST_CASE("config hash is stable under key reordering, not value changes") {
  // Same content, different key order and an explicit default spelled out.
  const std::string reordered = R"({
    "sim": {"horizon": 10.0},
    "schedule": [{"P_load": [1.0, 1.2], "time": 0.0}],
    "controller": {"tau_delta": 0.2, "epsilon_guard": 1e-4},
    "edges": [{"B_line": 15.0, "areas": [1, 2]}],
    "areas": [
      {"cost": {"q": 2.0, "z": 0.0}, "kind": "conventional",
       "governor": {"xi": 0.7, "tau_c": 7.0},
       "B_self": -20.0, "E_f": 3.9, "X_dp": 0.3, "X_d": 1.8,
       "psi": 1.5, "tau_v": 6.0, "tau_p": 4.0},
      {"kind": "conventional", "tau_p": 4.2, "tau_v": 6.2, "psi": 1.4,
       "X_d": 1.7, "X_dp": 0.25, "E_f": 3.8, "B_self": -21.0,
       "cost": {"q": 3.0}, "governor": {"tau_c": 6.5, "xi": 0.7}}
    ],
    "name": "mini"
  })";
  const ScenarioConfig a = parse_config(mini_config(), "a");
  const ScenarioConfig b = parse_config(json::parse(reordered), "b");
  CHECK(config_hash_hex(a) == config_hash_hex(b));

  json changed = mini_config();
  changed["sim"]["dt"] = 5e-4;
  const ScenarioConfig c = parse_config(changed, "c");
  CHECK(config_hash_hex(a) != config_hash_hex(c));

  // 16 lowercase hex digits.
  const std::string h = config_hash_hex(a);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("fnv1a64 reproduces the reference vectors") {
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("manifest serializes its fields") {
  RunManifest man;
  man.config_hash = "00ff";
  man.seed = 42;
  man.tool_version = kToolVersion;
  man.timestamp = "2026-01-01T00:00:00Z";
  man.outputs = {"a.csv", "b.csv"};
  const json j = man.to_json();
  CHECK(j.at("config_hash") == "00ff");
  CHECK(j.at("seed") == 42);
  CHECK(j.at("tool_version") == "olfc 1.0.0");
  CHECK(j.at("outputs").size() == 2);
  CHECK(j.at("timestamp") == "2026-01-01T00:00:00Z");
}

TEST_CASE("format_g17 prints shortest-faithful 17-digit forms") {
  CHECK(format_g17(0.1) == "0.10000000000000001");
  CHECK(format_g17(1.0) == "1");
  CHECK(format_g17(-0.0) == "-0");
  CHECK(format_g17(12345.0) == "12345");
}

TEST_CASE("csv round-trips doubles bit-exactly") {
  const std::string path = "test_scenario_roundtrip.csv";
  Eigen::MatrixXd m(3, 4);
  m << 0.1, 1.0 / 3.0, -0.0, 5e-324, 1.7976931348623157e308,
      -2.2250738585072014e-308, 3.141592653589793, -1.0,
      42.0, 1e-17, 123456789.123456789, 0.0;
  const std::vector<std::string> header = {"a", "b", "c", "d"};
  write_csv(path, header, m);

  std::vector<std::string> got_header;
  const Eigen::MatrixXd r = read_csv(path, &got_header);
  REQUIRE(got_header == header);
  REQUIRE(r.rows() == m.rows());
  REQUIRE(r.cols() == m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k)
      CHECK_MESSAGE(same_bits(m(i, k), r(i, k)),
                    "entry (" << i << "," << k << ") = " << m(i, k));
  std::remove(path.c_str());
}

TEST_CASE("csv rejects malformed input") {
  const std::string path = "test_scenario_bad.csv";
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("x,y\n1.0,2.0\n3.0\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_csv(path), ConfigError);
  {
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs("x,y\n1.0,abc\n", f);
    std::fclose(f);
  }
  CHECK_THROWS_AS(read_csv(path), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_csv("does_not_exist.csv"), ConfigError);
  CHECK_THROWS_AS(write_csv(path, {"a"}, Eigen::MatrixXd::Zero(1, 2)),
                  ConfigError);
}
