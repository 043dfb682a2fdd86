#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "olfc/system.hpp"
#include "olfc/topology.hpp"

// Four-area benchmark: three conventional areas and one DFIG wind area on a
// ring network. Mirrors configs/four_area.json.
inline olfc::SystemModel four_area_model() {
  using Eigen::VectorXd;
  olfc::SystemModel mod;

  VectorXd B_line(4), B_self(4);
  B_line << 30.0, 28.0, 24.5, 24.5;
  B_self << -56.3, -58.5, -56.2, -49.4;
  std::vector<std::pair<int, int>> edges{{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  mod.topo = olfc::make_topology(4, 3, edges, B_line, B_self, edges);

  mod.grid.tau_p = (VectorXd(4) << 3.95, 4.71, 5.23, 4.17).finished();
  mod.grid.tau_v = (VectorXd(4) << 6.32, 6.63, 7.15, 6.46).finished();
  mod.grid.psi = (VectorXd(4) << 1.82, 1.61, 1.33, 1.55).finished();
  mod.grid.chi_d =
      (VectorXd(4) << 1.76 - 0.27, 1.81 - 0.17, 1.87 - 0.23, 1.91 - 0.35)
          .finished();
  mod.grid.E_f = (VectorXd(4) << 3.85, 4.43, 3.96, 3.88).finished();
  mod.grid.P_load = (VectorXd(4) << 1.3, 2.0, 1.3, 0.5).finished();

  mod.governors = {{7.2, 0.73}, {6.8, 0.73}, {8.9, 0.73}};

  olfc::DfigParams dp;
  dp.R_s = 0.031;
  dp.R_r = 0.025;
  dp.X_s = 3.62;
  dp.X_r = 3.61;
  dp.X_m = 3.6;
  dp.H = 3.2;
  mod.dfigs = {dp};
  olfc::WindParams wp;
  wp.mu_w = 17.15;
  wp.sigma_w = 2.65;
  mod.winds = {wp};

  mod.cost.q = (VectorXd(4) << 5.0, 4.5, 5.5, 1.0).finished();
  mod.cost.z = VectorXd::Zero(4);
  mod.cost.c = VectorXd::Zero(4);
  mod.tau_delta = VectorXd::Constant(4, 0.2);
  mod.L_com = olfc::comm_laplacian(mod.topo);
  return mod;
}

inline Eigen::VectorXd four_area_load0() {
  return (Eigen::VectorXd(4) << 1.3, 2.0, 1.3, 0.5).finished();
}

inline Eigen::VectorXd four_area_load1() {
  return (Eigen::VectorXd(4) << 1.4, 2.1, 1.4, 0.55).finished();
}

// Single wind area feeding its own load: the smallest valid closed loop
// (9 states), used for fast integration tests.
inline olfc::SystemModel wind_only_model() {
  using Eigen::VectorXd;
  olfc::SystemModel mod;
  mod.topo = olfc::make_topology(1, 0, {}, VectorXd(0),
                                 (VectorXd(1) << -49.4).finished(), {});
  mod.grid.tau_p = (VectorXd(1) << 4.17).finished();
  mod.grid.tau_v = (VectorXd(1) << 6.46).finished();
  mod.grid.psi = (VectorXd(1) << 1.55).finished();
  mod.grid.chi_d = (VectorXd(1) << 1.56).finished();
  mod.grid.E_f = (VectorXd(1) << 3.88).finished();
  mod.grid.P_load = (VectorXd(1) << 0.5).finished();
  olfc::DfigParams dp;
  dp.R_s = 0.031;
  dp.R_r = 0.025;
  dp.X_s = 3.62;
  dp.X_r = 3.61;
  dp.X_m = 3.6;
  dp.H = 3.2;
  mod.dfigs = {dp};
  olfc::WindParams wp;
  wp.mu_w = 17.15;
  wp.sigma_w = 2.65;
  mod.winds = {wp};
  mod.cost.q = (VectorXd(1) << 1.0).finished();
  mod.cost.z = VectorXd::Zero(1);
  mod.cost.c = VectorXd::Zero(1);
  mod.tau_delta = (VectorXd(1) << 0.2).finished();
  mod.L_com = olfc::comm_laplacian(mod.topo);
  return mod;
}
