#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "olfc/audit.hpp"
#include "olfc/csv.hpp"
#include "olfc/dispatch.hpp"
#include "olfc/errors.hpp"
#include "olfc/scenario.hpp"
#include "olfc/sde.hpp"
#include "olfc/steady_state.hpp"
#include "olfc/storage.hpp"
#include "olfc/system.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace olfc;

namespace {

std::string iso_utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

void write_manifest(const fs::path& dir, const ScenarioConfig& cfg,
                    std::vector<std::string> outputs) {
  RunManifest man;
  man.config_hash = config_hash_hex(cfg);
  man.seed = cfg.sim.master_seed;
  man.tool_version = kToolVersion;
  man.timestamp = iso_utc_now();
  man.outputs = std::move(outputs);
  std::ofstream f(dir / "manifest.json");
  f << man.to_json().dump(2) << '\n';
}

std::vector<ClosedLoop> build_segments(const ScenarioConfig& cfg) {
  std::vector<ClosedLoop> segments;
  for (const auto& ev : cfg.schedule)
    segments.push_back(make_closed_loop(cfg.model, ev.P_load));
  return segments;
}

int cmd_dispatch(const ScenarioConfig& cfg) {
  json out;
  out["name"] = cfg.name;
  out["events"] = json::array();
  for (const auto& ev : cfg.schedule) {
    const Eigen::VectorXd p = optimal_dispatch(ev.P_load, cfg.model.cost);
    out["events"].push_back({{"time", ev.time},
                             {"P_load", to_std(ev.P_load)},
                             {"P_opt", to_std(p)},
                             {"lambda", dispatch_lambda(ev.P_load,
                                                        cfg.model.cost)},
                             {"cost", aggregate_cost(p, cfg.model.cost)}});
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_steady_state(const ScenarioConfig& cfg) {
  const ClosedLoop loop = make_closed_loop(cfg.model, cfg.schedule[0].P_load);
  const CheckResult a2 =
      check_assumption2(loop.steady, cfg.model.topo, cfg.model.grid.chi_d);
  json out;
  out["name"] = cfg.name;
  out["P_opt"] = to_std(loop.P_opt);
  out["theta_bar"] = to_std(loop.steady.theta_bar);
  out["V_bar"] = to_std(loop.steady.V_bar);
  out["delta_bar"] = to_std(loop.steady.delta_bar);
  out["u_c_bar"] = to_std(loop.steady.u_c_bar);
  out["residual_norm"] = loop.steady.residual_norm;
  out["assumption2"] = {{"pass", a2.pass}, {"min_eigenvalue", a2.value}};
  out["wind"] = json::array();
  for (std::size_t j = 0; j < loop.steady.x_bar.size(); ++j) {
    const Vec6& x = loop.steady.x_bar[j];
    out["wind"].push_back(
        {{"currents", {x(0), x(1), x(2), x(3)}},
         {"f_r", x(4)},
         {"V_dr", loop.steady.rotor_voltage_bar[j].first},
         {"V_qr", loop.steady.rotor_voltage_bar[j].second}});
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

Eigen::MatrixXd path_rows(const std::vector<ClosedLoop>& segments,
                          const Trajectory& tr, int ncol) {
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(tr.times.size()), ncol);
  for (Eigen::Index r = 0; r < rows.rows(); ++r)
    rows.row(r) = output_row(segments[tr.segment_of_record[r]], tr.times[r],
                             tr.states.row(r).transpose())
                      .transpose();
  return rows;
}

void write_plot_script(const fs::path& dir, const SystemModel& model) {
  std::ofstream f(dir / "plot.gp");
  f << "set datafile separator ','\n"
       "set key autotitle columnhead\n"
       "set xlabel 'time [s]'\n"
       "set terminal pngcairo size 1400,900\n"
       "set output 'frequency.png'\n"
       "plot for [i=2:" << 1 + model.n()
    << "] 'ensemble_mean.csv' using 1:i with lines\n"
       "set output 'power.png'\n"
       "plot for [i=" << 2 + model.n() << ":" << 1 + 2 * model.n()
    << "] 'ensemble_mean.csv' using 1:i with lines\n"
       "set output 'storage.png'\n"
       "plot 'ensemble_mean.csv' using 1:(column('S')) with lines\n";
}

int cmd_simulate(const ScenarioConfig& cfg, const std::string& out_dir,
                 bool gnuplot, bool per_path) {
  const std::vector<ClosedLoop> segments = build_segments(cfg);
  const EnsembleResult res = run_ensemble(cfg.model, segments, cfg.schedule,
                                          cfg.sim, /*keep_paths=*/per_path);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  std::vector<std::string> outputs;

  if (per_path) {
    for (std::size_t p = 0; p < res.paths.size(); ++p) {
      char name[32];
      std::snprintf(name, sizeof name, "path_%03zu.csv", p);
      write_csv((dir / name).string(), res.columns,
                path_rows(segments, res.paths[p],
                          static_cast<int>(res.columns.size())));
      outputs.push_back(name);
    }
  }
  write_csv((dir / "ensemble_mean.csv").string(), res.columns, res.mean);
  outputs.push_back("ensemble_mean.csv");
  if (!per_path) {
    write_csv((dir / "ensemble_var.csv").string(), res.columns,
              res.variance());
    outputs.push_back("ensemble_var.csv");
  }
  if (gnuplot) {
    write_plot_script(dir, cfg.model);
    outputs.push_back("plot.gp");
  }
  write_manifest(dir, cfg, outputs);

  std::cout << "simulated " << res.n_paths << " path(s), "
            << res.times.size() << " records, guard strip/sat "
            << res.guards.strip << "/" << res.guards.sat << ", wrote "
            << out_dir << "/ensemble_mean.csv\n";
  return 0;
}

int cmd_audit(const ScenarioConfig& cfg, const std::string& out_dir) {
  const std::vector<ClosedLoop> segments = build_segments(cfg);
  const fs::path dir(out_dir);
  fs::create_directories(dir);

  AuditReport rep = passivity_audit({}, segments, cfg.model);
  if (rep.all_pass()) {
    const EnsembleResult res = run_ensemble(cfg.model, segments, cfg.schedule,
                                            cfg.sim, /*keep_paths=*/true);
    rep = passivity_audit(res.paths, segments, cfg.model);
  }

  {
    std::ofstream f(dir / "audit_report.json");
    f << rep.to_json().dump(2) << '\n';
  }
  write_manifest(dir, cfg, {"audit_report.json"});

  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail
              << '\n';
  if (rep.trajectories_audited) {
    std::cout << "samples checked " << rep.samples_checked
              << ", excluded by guard " << rep.samples_excluded_guard
              << ", LS violations " << rep.ls_violations << " (worst "
              << rep.worst_ls_margin << "), LS3 violations "
              << rep.ls3_violations << " (worst " << rep.worst_ls3_margin
              << ")\n";
  } else {
    std::cout << "trajectory audit skipped: equilibrium checks failed\n";
  }
  std::cout << (rep.all_pass() ? "audit PASS\n" : "audit FAIL\n");
  return rep.all_pass() ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "optimal load-frequency control of a multi-area power network under "
      "stochastic wind"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int paths = 0;
  double dt = 0.0, horizon = 0.0;
  bool gnuplot = false;

  auto add_common = [&](CLI::App* sub, bool sim_opts) {
    sub->add_option("--config", config_path, "scenario JSON file")
        ->required();
    if (sim_opts) {
      sub->add_option("--seed", seed, "override the master seed");
      sub->add_option("--paths", paths, "override the path count");
      sub->add_option("--dt", dt, "override the step size [s]");
      sub->add_option("--horizon", horizon, "override the horizon [s]");
      sub->add_option("--out", out_dir, "output directory");
    }
  };

  CLI::App* c_dispatch =
      app.add_subcommand("dispatch", "economic dispatch per schedule event");
  add_common(c_dispatch, false);
  CLI::App* c_steady = app.add_subcommand(
      "steady-state", "equilibrium for the first schedule event");
  add_common(c_steady, false);
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "integrate sample paths and write per-path CSV files");
  add_common(c_sim, true);
  c_sim->add_flag("--gnuplot", gnuplot, "also write plot.gp");
  CLI::App* c_ens = app.add_subcommand(
      "ensemble", "ensemble mean/variance without per-path files");
  add_common(c_ens, true);
  c_ens->add_flag("--gnuplot", gnuplot, "also write plot.gp");
  CLI::App* c_audit = app.add_subcommand(
      "audit", "equilibrium certificates and along-path passivity checks");
  add_common(c_audit, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    ScenarioConfig cfg = load_config(config_path);
    CLI::App* active = app.get_subcommands().front();
    const auto given = [active](const char* name) {
      const CLI::Option* opt = active->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--seed")) cfg.sim.master_seed = seed;
    if (given("--paths")) cfg.sim.n_paths = paths;
    if (given("--dt")) cfg.sim.dt = dt;
    if (given("--horizon")) cfg.sim.horizon = horizon;
    if (cfg.sim.n_paths < 1)
      throw ConfigError("paths must be >= 1");
    if (!(cfg.sim.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.sim.horizon > cfg.schedule.back().time))
      throw ConfigError("horizon must exceed the last schedule event");

    if (active == c_dispatch) return cmd_dispatch(cfg);
    if (active == c_steady) return cmd_steady_state(cfg);
    if (active == c_sim) return cmd_simulate(cfg, out_dir, gnuplot, true);
    if (active == c_ens) return cmd_simulate(cfg, out_dir, gnuplot, false);
    if (active == c_audit) return cmd_audit(cfg, out_dir);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << " (step "
              << e.step_index << ")\n";
    return 3;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 3;
  }
}
