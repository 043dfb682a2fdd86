#pragma once

#include <Eigen/Dense>
#include <utility>

#include "olfc/params.hpp"
#include "olfc/topology.hpp"

namespace olfc {

// J(P) = 1/2 P'QP + Z'P + 1'C
double aggregate_cost(const Eigen::VectorXd& P, const CostModel& model);

// P_opt = Q^{-1}( 1 1'(P_l + Q^{-1}Z) / (1'Q^{-1}1) - Z )
Eigen::VectorXd optimal_dispatch(const Eigen::VectorXd& P_load,
                                 const CostModel& model);

// Common marginal cost at the optimum: q_i P_opt_i + z_i for every i.
double dispatch_lambda(const Eigen::VectorXd& P_load, const CostModel& model);

// Plain integral controller: delta_dot = (-delta + P_c)/tau_delta, u_c = delta.
std::pair<double, double> governor_integral_rhs(double delta, double P_c,
                                                double tau_delta);

// tau_delta delta_dot = -delta + P - blockdiag(xi^{-1}, I) Q L_com (Q delta + Z).
// xi has one entry per conventional area; wind areas use the plain q_i
// prefactor.
Eigen::VectorXd consensus_controller_rhs(const Eigen::VectorXd& delta,
                                         const Eigen::VectorXd& P,
                                         const CostModel& model,
                                         const Eigen::MatrixXd& L_com,
                                         const Eigen::VectorXd& xi,
                                         const Eigen::VectorXd& tau_delta);

// Convenience overload building the Laplacian from the communication graph.
Eigen::VectorXd consensus_controller_rhs(const Eigen::VectorXd& delta,
                                         const Eigen::VectorXd& P,
                                         const CostModel& model,
                                         const NetworkTopology& topo,
                                         const Eigen::VectorXd& xi,
                                         const Eigen::VectorXd& tau_delta);

}  // namespace olfc
