#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "olfc/params.hpp"
#include "olfc/topology.hpp"

namespace olfc {

struct SteadyState {
  Eigen::VectorXd theta_bar;  // R^m
  Eigen::VectorXd omega_bar;  // R^n, zero
  Eigen::VectorXd V_bar;      // R^n
  Eigen::VectorXd P_bar;      // R^n, equals the dispatch target
  Eigen::VectorXd delta_bar;  // R^n, equals P_bar
  Eigen::VectorXd u_c_bar;    // R^{nc}, equals P_bar on conventional areas
  std::vector<Vec6> x_bar;    // per wind area, v_tilde = 0
  std::vector<std::pair<double, double>> rotor_voltage_bar;  // (V_dr, V_qr)
  double residual_norm = 0.0;
};

// Newton solve of the steady-state equations with omega = 0:
//   0 = P_target - P_load - A Upsilon(V) sin(theta)
//   0 = -chi_d E(theta) V + E_f
//   DFIG drift = 0 with v_tilde = 0, f_r = f_r_ref, P_w = P_target (wind)
// The grid solve works in reduced nodal angles (area 1 pinned to 0) with a
// backtracking line search; theta is returned as edge differences.
// Throws SolverError on non-convergence or unbalanced targets.
SteadyState solve_steady_state(const NetworkTopology& topo,
                               const GridParams& grid,
                               const std::vector<DfigParams>& dfigs,
                               const std::vector<WindParams>& winds,
                               const Eigen::VectorXd& P_load,
                               const Eigen::VectorXd& P_target,
                               double tol = 1e-11, int max_iter = 80);

}  // namespace olfc
