#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "olfc/sde.hpp"
#include "olfc/system.hpp"

namespace olfc {

struct ScenarioConfig {
  std::string name;
  SystemModel model;
  std::vector<ScheduleEvent> schedule;
  SimConfig sim;
};

// Parses and validates a config file; defaults applied (air density 1.225,
// C_Q 0.4, V_t 1.0, v_pred 0.6, gamma_bar 1.2, epsilon_guard 1e-4,
// rotor_voltage_cap 0.5, B_line 5.0, communication graph = physical graph).
// Errors name the offending key path. Throws ConfigError.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const nlohmann::json& j,
                            const std::string& source_name);

// Canonical (defaults-applied, key-sorted) form used for hashing: the hash
// is stable under key reordering of the input file.
nlohmann::json canonical_config_json(const ScenarioConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);
std::string config_hash_hex(const ScenarioConfig& config);

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string tool_version;
  std::string timestamp;  // ISO 8601 UTC
  std::vector<std::string> outputs;

  nlohmann::json to_json() const;
};

inline constexpr const char* kToolVersion = "olfc 1.0.0";

}  // namespace olfc
