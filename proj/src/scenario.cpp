#include "olfc/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "olfc/errors.hpp"

namespace olfc {

using nlohmann::json;

namespace {

const json& need(const json& j, const char* key, const std::string& path) {
  if (!j.is_object())
    throw ConfigError("config: " + path + " must be an object");
  auto it = j.find(key);
  if (it == j.end())
    throw ConfigError("config: missing key " + path + "." + key);
  return *it;
}

double as_num(const json& v, const std::string& path) {
  if (!v.is_number())
    throw ConfigError("config: " + path + " must be a number");
  return v.get<double>();
}

double need_num(const json& j, const char* key, const std::string& path) {
  return as_num(need(j, key, path), path + "." + key);
}

double opt_num(const json& j, const char* key, double dflt,
               const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return dflt;
  return as_num(j.at(key), path + "." + key);
}

Eigen::VectorXd as_vec(const json& v, int size, const std::string& path) {
  if (!v.is_array() || static_cast<int>(v.size()) != size)
    throw ConfigError("config: " + path + " must be an array of " +
                      std::to_string(size) + " numbers");
  Eigen::VectorXd out(size);
  for (int i = 0; i < size; ++i)
    out(i) = as_num(v.at(i), path + "[" + std::to_string(i) + "]");
  return out;
}

int area_index(const json& v, int n, const std::string& path) {
  if (!v.is_number_integer())
    throw ConfigError("config: " + path + " must be a 1-based area index");
  const int i = v.get<int>();
  if (i < 1 || i > n)
    throw ConfigError("config: " + path + " out of range 1.." +
                      std::to_string(n));
  return i - 1;
}

}  // namespace

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
  return parse_config(j, path);
}

ScenarioConfig parse_config(const json& j, const std::string& source_name) {
  (void)source_name;
  ScenarioConfig cfg;
  if (j.contains("name")) {
    if (!j.at("name").is_string())
      throw ConfigError("config: name must be a string");
    cfg.name = j.at("name").get<std::string>();
  }

  const json& areas = need(j, "areas", "$");
  if (!areas.is_array() || areas.empty())
    throw ConfigError("config: $.areas must be a non-empty array");
  const int n = static_cast<int>(areas.size());

  SystemModel& mod = cfg.model;
  mod.grid.tau_p.resize(n);
  mod.grid.tau_v.resize(n);
  mod.grid.psi.resize(n);
  mod.grid.chi_d.resize(n);
  mod.grid.E_f.resize(n);
  mod.cost.q.resize(n);
  mod.cost.z.resize(n);
  mod.cost.c.resize(n);
  Eigen::VectorXd B_self(n);

  int nc = 0;
  bool wind_seen = false;
  for (int i = 0; i < n; ++i) {
    const std::string path = "$.areas[" + std::to_string(i) + "]";
    const json& a = areas.at(i);
    const json& kind = need(a, "kind", path);
    if (!kind.is_string())
      throw ConfigError("config: " + path + ".kind must be a string");
    const std::string k = kind.get<std::string>();
    if (k == "conventional") {
      if (wind_seen)
        throw ConfigError(
            "config: conventional areas must precede wind areas (" + path +
            ")");
      ++nc;
    } else if (k == "wind") {
      wind_seen = true;
    } else {
      throw ConfigError("config: " + path +
                        ".kind must be \"conventional\" or \"wind\"");
    }

    mod.grid.tau_p(i) = need_num(a, "tau_p", path);
    mod.grid.tau_v(i) = need_num(a, "tau_v", path);
    mod.grid.psi(i) = need_num(a, "psi", path);
    const double xd = need_num(a, "X_d", path);
    const double xdp = need_num(a, "X_dp", path);
    if (!(xd > xdp))
      throw ConfigError("config: " + path + ": X_d must exceed X_dp");
    mod.grid.chi_d(i) = xd - xdp;
    mod.grid.E_f(i) = need_num(a, "E_f", path);
    B_self(i) = need_num(a, "B_self", path);
    for (const char* key : {"tau_p", "tau_v", "psi"})
      if (!(as_num(a.at(key), path) > 0.0))
        throw ConfigError("config: " + path + "." + key +
                          " must be positive");

    const json& cost = need(a, "cost", path);
    mod.cost.q(i) = need_num(cost, "q", path + ".cost");
    mod.cost.z(i) = opt_num(cost, "z", 0.0, path + ".cost");
    mod.cost.c(i) = opt_num(cost, "c", 0.0, path + ".cost");
    if (!(mod.cost.q(i) > 0.0))
      throw ConfigError("config: " + path + ".cost.q must be positive");

    if (k == "conventional") {
      const json& gov = need(a, "governor", path);
      GovernorParams gp;
      gp.tau_c = need_num(gov, "tau_c", path + ".governor");
      gp.xi = need_num(gov, "xi", path + ".governor");
      if (!(gp.tau_c > 0.0) || !(gp.xi > 0.0))
        throw ConfigError("config: " + path +
                          ".governor entries must be positive");
      mod.governors.push_back(gp);
    } else {
      const json& dj = need(a, "dfig", path);
      DfigParams dp;
      dp.R_s = need_num(dj, "R_s", path + ".dfig");
      dp.R_r = need_num(dj, "R_r", path + ".dfig");
      dp.X_s = need_num(dj, "X_s", path + ".dfig");
      dp.X_r = need_num(dj, "X_r", path + ".dfig");
      dp.X_m = need_num(dj, "X_m", path + ".dfig");
      dp.H = need_num(dj, "H", path + ".dfig");
      dp.f_b = opt_num(dj, "f_b", 1.0, path + ".dfig");
      dp.V_t = opt_num(dj, "V_t", 1.0, path + ".dfig");
      dp.rotor_radius = opt_num(dj, "rotor_radius", 42.0, path + ".dfig");
      dp.C_Q = opt_num(dj, "C_Q", 0.4, path + ".dfig");
      dp.air_density = opt_num(dj, "air_density", 1.225, path + ".dfig");
      dp.gamma_bar = opt_num(dj, "gamma_bar", 1.2, path + ".dfig");
      dp.f_r_ref = opt_num(dj, "f_r_ref", 1.0, path + ".dfig");
      if (!(dp.K() > 0.0))
        throw ConfigError("config: " + path +
                          ".dfig: X_s X_r - X_m^2 must be positive");
      mod.dfigs.push_back(dp);

      const json& wj = need(a, "wind", path);
      WindParams wp;
      wp.mu_w = need_num(wj, "mu_w", path + ".wind");
      wp.sigma_w = need_num(wj, "sigma_w", path + ".wind");
      wp.v_pred = opt_num(wj, "v_pred", 0.6, path + ".wind");
      if (!(wp.mu_w > 0.0) || !(wp.sigma_w >= 0.0))
        throw ConfigError("config: " + path +
                          ".wind: mu_w must be positive and sigma_w "
                          "non-negative");
      mod.winds.push_back(wp);
    }
  }

  const json& edges = need(j, "edges", "$");
  if (!edges.is_array() || edges.empty())
    throw ConfigError("config: $.edges must be a non-empty array");
  std::vector<std::pair<int, int>> edge_list;
  Eigen::VectorXd B_line(static_cast<int>(edges.size()));
  for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
    const std::string path = "$.edges[" + std::to_string(k) + "]";
    const json& e = edges.at(k);
    const json& pair = need(e, "areas", path);
    if (!pair.is_array() || pair.size() != 2)
      throw ConfigError("config: " + path +
                        ".areas must be a pair of area indices");
    const int a = area_index(pair.at(0), n, path + ".areas[0]");
    const int b = area_index(pair.at(1), n, path + ".areas[1]");
    edge_list.emplace_back(a, b);
    B_line(k) = opt_num(e, "B_line", 5.0, path);
  }

  std::vector<std::pair<int, int>> comm = edge_list;
  if (j.contains("comm_edges")) {
    const json& ce = j.at("comm_edges");
    if (!ce.is_array() || ce.empty())
      throw ConfigError("config: $.comm_edges must be a non-empty array");
    comm.clear();
    for (int k = 0; k < static_cast<int>(ce.size()); ++k) {
      const std::string path = "$.comm_edges[" + std::to_string(k) + "]";
      const json& e = ce.at(k);
      if (!e.is_array() || e.size() != 2)
        throw ConfigError("config: " + path +
                          " must be a pair of area indices");
      comm.emplace_back(area_index(e.at(0), n, path + "[0]"),
                        area_index(e.at(1), n, path + "[1]"));
    }
  }

  mod.topo = make_topology(n, nc, std::move(edge_list), std::move(B_line),
                           std::move(B_self), std::move(comm));
  mod.L_com = comm_laplacian(mod.topo);

  const json& ctrl = need(j, "controller", "$");
  const json& td = need(ctrl, "tau_delta", "$.controller");
  if (td.is_array()) {
    mod.tau_delta = as_vec(td, n, "$.controller.tau_delta");
  } else {
    mod.tau_delta =
        Eigen::VectorXd::Constant(n, as_num(td, "$.controller.tau_delta"));
  }
  if ((mod.tau_delta.array() <= 0.0).any())
    throw ConfigError("config: $.controller.tau_delta must be positive");
  mod.epsilon_guard =
      opt_num(ctrl, "epsilon_guard", 1e-4, "$.controller");
  mod.v_cap = opt_num(ctrl, "rotor_voltage_cap", 0.5, "$.controller");
  if (!(mod.epsilon_guard > 0.0) || !(mod.v_cap > 0.0))
    throw ConfigError(
        "config: $.controller guard parameters must be positive");

  const json& sched = need(j, "schedule", "$");
  if (!sched.is_array() || sched.empty())
    throw ConfigError("config: $.schedule must be a non-empty array");
  const int nw = mod.nw();
  for (int s = 0; s < static_cast<int>(sched.size()); ++s) {
    const std::string path = "$.schedule[" + std::to_string(s) + "]";
    const json& e = sched.at(s);
    ScheduleEvent ev;
    ev.time = need_num(e, "time", path);
    ev.P_load = as_vec(need(e, "P_load", path), n, path + ".P_load");
    if (e.contains("v_tilde"))
      ev.v_tilde_set = as_vec(e.at("v_tilde"), nw, path + ".v_tilde");
    if (s == 0 && ev.time != 0.0)
      throw ConfigError("config: $.schedule[0].time must be 0");
    if (s > 0 && !(ev.time > cfg.schedule.back().time))
      throw ConfigError("config: $.schedule times must increase");
    cfg.schedule.push_back(std::move(ev));
  }
  mod.grid.P_load = cfg.schedule.front().P_load;

  const json& sim = need(j, "sim", "$");
  cfg.sim.dt = opt_num(sim, "dt", 1e-3, "$.sim");
  cfg.sim.horizon = need_num(sim, "horizon", "$.sim");
  const double seed = opt_num(sim, "seed", 0.0, "$.sim");
  if (seed < 0.0 || seed != static_cast<double>(
                                static_cast<std::uint64_t>(seed)))
    throw ConfigError("config: $.sim.seed must be a non-negative integer");
  cfg.sim.master_seed = static_cast<std::uint64_t>(seed);
  cfg.sim.n_paths = static_cast<int>(opt_num(sim, "paths", 1.0, "$.sim"));
  cfg.sim.record_stride =
      static_cast<int>(opt_num(sim, "record_stride", 1.0, "$.sim"));
  if (!(cfg.sim.dt > 0.0))
    throw ConfigError("config: $.sim.dt must be positive");
  if (!(cfg.sim.horizon > cfg.schedule.back().time))
    throw ConfigError(
        "config: $.sim.horizon must exceed the last schedule time");
  if (cfg.sim.n_paths < 1 || cfg.sim.record_stride < 1)
    throw ConfigError(
        "config: $.sim.paths and record_stride must be >= 1");

  return cfg;
}

json canonical_config_json(const ScenarioConfig& cfg) {
  const SystemModel& mod = cfg.model;
  json j;
  j["name"] = cfg.name;
  j["areas"] = json::array();
  for (int i = 0; i < mod.n(); ++i) {
    json a;
    a["kind"] = i < mod.nc() ? "conventional" : "wind";
    a["tau_p"] = mod.grid.tau_p(i);
    a["tau_v"] = mod.grid.tau_v(i);
    a["psi"] = mod.grid.psi(i);
    a["chi_d"] = mod.grid.chi_d(i);
    a["E_f"] = mod.grid.E_f(i);
    a["B_self"] = mod.topo.B_self(i);
    a["cost"] = {{"q", mod.cost.q(i)},
                 {"z", mod.cost.z(i)},
                 {"c", mod.cost.c(i)}};
    if (i < mod.nc()) {
      a["governor"] = {{"tau_c", mod.governors[i].tau_c},
                       {"xi", mod.governors[i].xi}};
    } else {
      const DfigParams& dp = mod.dfigs[i - mod.nc()];
      a["dfig"] = {{"R_s", dp.R_s},
                   {"R_r", dp.R_r},
                   {"X_s", dp.X_s},
                   {"X_r", dp.X_r},
                   {"X_m", dp.X_m},
                   {"f_b", dp.f_b},
                   {"H", dp.H},
                   {"V_t", dp.V_t},
                   {"rotor_radius", dp.rotor_radius},
                   {"C_Q", dp.C_Q},
                   {"air_density", dp.air_density},
                   {"gamma_bar", dp.gamma_bar},
                   {"f_r_ref", dp.f_r_ref}};
      const WindParams& wp = mod.winds[i - mod.nc()];
      a["wind"] = {{"mu_w", wp.mu_w},
                   {"sigma_w", wp.sigma_w},
                   {"v_pred", wp.v_pred}};
    }
    j["areas"].push_back(std::move(a));
  }
  j["edges"] = json::array();
  for (int k = 0; k < mod.m(); ++k)
    j["edges"].push_back({{"areas",
                           {mod.topo.edges[k].first + 1,
                            mod.topo.edges[k].second + 1}},
                          {"B_line", mod.topo.B_line(k)}});
  j["comm_edges"] = json::array();
  for (const auto& [a, b] : mod.topo.comm_edges)
    j["comm_edges"].push_back({a + 1, b + 1});
  j["controller"] = {{"tau_delta", std::vector<double>(
                                       mod.tau_delta.data(),
                                       mod.tau_delta.data() + mod.n())},
                     {"epsilon_guard", mod.epsilon_guard},
                     {"rotor_voltage_cap", mod.v_cap}};
  j["schedule"] = json::array();
  for (const auto& ev : cfg.schedule) {
    json e;
    e["time"] = ev.time;
    e["P_load"] = std::vector<double>(ev.P_load.data(),
                                      ev.P_load.data() + ev.P_load.size());
    if (ev.v_tilde_set.size() > 0)
      e["v_tilde"] =
          std::vector<double>(ev.v_tilde_set.data(),
                              ev.v_tilde_set.data() + ev.v_tilde_set.size());
    j["schedule"].push_back(std::move(e));
  }
  j["sim"] = {{"dt", cfg.sim.dt},
              {"horizon", cfg.sim.horizon},
              {"seed", cfg.sim.master_seed},
              {"paths", cfg.sim.n_paths},
              {"record_stride", cfg.sim.record_stride}};
  return j;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash_hex(const ScenarioConfig& cfg) {
  const std::string dump = canonical_config_json(cfg).dump();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(dump)));
  return buf;
}

json RunManifest::to_json() const {
  json j;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["tool_version"] = tool_version;
  j["timestamp"] = timestamp;
  j["outputs"] = outputs;
  return j;
}

}  // namespace olfc
