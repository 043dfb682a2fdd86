#pragma once

#include <Eigen/Dense>

#include "olfc/params.hpp"
#include "olfc/topology.hpp"

namespace olfc {

struct GridState {
  Eigen::VectorXd theta;    // R^m voltage-angle differences across edges
  Eigen::VectorXd omega;    // R^n frequency deviations
  Eigen::VectorXd voltage;  // R^n, strictly positive
};

// E_ii = 1/chi_di - B_ii; E_ij = -B_ij cos(theta_k) for edge k ~ {i,j}.
Eigen::MatrixXd build_E_matrix(const NetworkTopology& topo,
                               const Eigen::VectorXd& chi_d,
                               const Eigen::VectorXd& theta);

// Diagonal of Upsilon(V): Y_k = V_i V_j B_ij for edge k ~ {i,j}.
Eigen::VectorXd coupling_diagonal(const Eigen::VectorXd& voltage,
                                  const NetworkTopology& topo);
Eigen::MatrixXd coupling_matrix(const Eigen::VectorXd& voltage,
                                const NetworkTopology& topo);

// theta_dot = A' omega
// tau_p omega_dot = -psi omega + P_gen - P_load - A Upsilon(V) sin(theta)
// tau_v V_dot = -chi_d E(theta) V + E_f
GridState swing_rhs(const GridState& state, const Eigen::VectorXd& P_gen,
                    const GridParams& params, const NetworkTopology& topo);

}  // namespace olfc
