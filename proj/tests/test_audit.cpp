#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <memory>

#include <nlohmann/json.hpp>

#include "fixture.hpp"
#include "olfc/audit.hpp"
#include "olfc/sde.hpp"

using Eigen::VectorXd;
using namespace olfc;

TEST_CASE("assumption 2 margins match the frozen four-area values") {
  const SystemModel mod = four_area_model();
  const ClosedLoop l0 = make_closed_loop(mod, four_area_load0());
  const ClosedLoop l1 = make_closed_loop(mod, four_area_load1());
  const CheckResult a0 = check_assumption2(l0.steady, mod.topo,
                                           mod.grid.chi_d);
  const CheckResult a1 = check_assumption2(l1.steady, mod.topo,
                                           mod.grid.chi_d);
  CHECK(a0.pass);
  CHECK(a0.value == doctest::Approx(3.3899763947625363).epsilon(1e-8));
  CHECK(a1.pass);
  CHECK(a1.value == doctest::Approx(3.38168870006243).epsilon(1e-8));
}

TEST_CASE("assumption 2 rejects angles beyond the quarter period") {
  const SystemModel mod = four_area_model();
  SteadyState stub;
  stub.theta_bar = (VectorXd(4) << 1.6, 0.0, 0.0, 0.0).finished();
  stub.V_bar = VectorXd::Ones(4);
  const CheckResult r = check_assumption2(stub, mod.topo, mod.grid.chi_d);
  CHECK_FALSE(r.pass);
  CHECK(r.value < 0.0);
}

TEST_CASE("assumption 4 margin is exact for the benchmark parameters") {
  WindParams wind;
  wind.mu_w = 17.15;
  wind.sigma_w = 2.65;
  wind.v_pred = 0.6;
  const CheckResult r = check_assumption4(wind, 1.0, 1.2);
  CHECK(r.pass);
  CHECK(std::abs(r.value - 12.83875) < 1e-12);

  wind.sigma_w = 7.0;
  const CheckResult bad = check_assumption4(wind, 1.0, 1.2);
  CHECK_FALSE(bad.pass);
  CHECK(bad.value == doctest::Approx(-8.15).epsilon(1e-12));
}

TEST_CASE("equilibrium certificates pass for the bundled benchmark") {
  const SystemModel mod = four_area_model();
  const std::vector<ClosedLoop> segments = {
      make_closed_loop(mod, four_area_load0()),
      make_closed_loop(mod, four_area_load1())};
  const AuditReport rep = passivity_audit({}, segments, mod);
  // Four certificates per segment: gradient, hessian, assumptions 2 and 4.
  REQUIRE(rep.checks.size() == 8);
  for (const auto& c : rep.checks) CHECK_MESSAGE(c.pass, c.name);
  CHECK_FALSE(rep.trajectories_audited);
  CHECK(rep.all_pass());
}

TEST_CASE("a violated wind-speed condition fails the audit by name") {
  SystemModel mod = four_area_model();
  mod.winds[0].sigma_w = 7.0;
  const std::vector<ClosedLoop> segments = {
      make_closed_loop(mod, four_area_load0())};
  const AuditReport rep = passivity_audit({}, segments, mod);
  CHECK_FALSE(rep.all_pass());
  bool named = false;
  for (const auto& c : rep.checks)
    if (!c.pass) {
      CHECK(c.name.find("assumption4") != std::string::npos);
      named = true;
    }
  CHECK(named);
}

TEST_CASE("trajectory audit counts samples and finds no violations") {
  auto mod = std::make_unique<SystemModel>(wind_only_model());
  mod->winds[0].sigma_w = 0.0;
  const ClosedLoop loop = make_closed_loop(*mod, mod->grid.P_load);
  ScheduleEvent ev;
  ev.time = 0.0;
  ev.P_load = mod->grid.P_load;
  ev.v_tilde_set = (VectorXd(1) << 0.1).finished();
  SimConfig cfg;
  cfg.dt = 1e-4;
  cfg.horizon = 0.5;
  cfg.record_stride = 50;
  const Trajectory tr = simulate_path(*mod, {loop}, {ev},
                                      equilibrium_state(loop), cfg, 0);
  const AuditReport rep = passivity_audit({tr}, {loop}, *mod);
  CHECK(rep.trajectories_audited);
  CHECK(rep.samples_checked == static_cast<long>(tr.times.size()));
  CHECK(rep.ls_violations == 0);
  CHECK(rep.ls3_violations == 0);
  CHECK(rep.decrement_pairs > 0);
  // The first record sits on the equilibrium currents, where the guard strip
  // is always active.
  CHECK(rep.samples_excluded_guard >= 1);
  CHECK(rep.all_pass());
}

TEST_CASE("audit report serializes all statistics") {
  AuditReport rep;
  rep.checks.push_back({"demo", true, 0.5, "detail text"});
  rep.trajectories_audited = true;
  rep.samples_checked = 10;
  rep.samples_excluded_guard = 2;
  const nlohmann::json j = rep.to_json();
  CHECK(j.at("pass") == true);
  CHECK(j.at("checks").size() == 1);
  CHECK(j.at("checks").at(0).at("name") == "demo");
  CHECK(j.at("samples_checked") == 10);
  CHECK(j.at("samples_excluded_guard") == 2);
  CHECK(j.contains("worst_ls3_margin"));
  CHECK(j.contains("decrement_positive"));

  rep.ls_violations = 1;
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.to_json().at("pass") == false);
}
