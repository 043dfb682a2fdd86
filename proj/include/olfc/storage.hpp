#pragma once

#include <Eigen/Dense>
#include <functional>

#include "olfc/grid.hpp"
#include "olfc/system.hpp"

namespace olfc {

// Grid storage: Bregman distance of the energy function
//   U(theta, V) = -sum_k Y_k(V) cos th_k + 1/2 V' D V,  D = 1/chi_d - B_self,
// anchored at the equilibrium (the linear V coefficient is chi_d^{-1} E_f),
// plus the kinetic term 1/2 omega' tau_p omega.
double storage_S1(const GridState& state, const SteadyState& steady,
                  const GridParams& params, const NetworkTopology& topo);

// Governor storage: sum_i (tau_ci xi_i/2)(P_ci - P_ci_bar)^2
//                 + (tau_di xi_i/2)(delta_i - delta_i_bar)^2.
double storage_S2(const Eigen::VectorXd& P_c, const Eigen::VectorXd& delta_c,
                  const SteadyState& steady,
                  const std::vector<GovernorParams>& governors,
                  const Eigen::VectorXd& tau_delta_c);

// DFIG storage for wind area j: current block weighted K/(2 f_b X_r) on the
// stator pair and K/(2 f_b X_s) on the rotor pair, 2H (f_r - f_r_bar)^2,
// c_w v_tilde^2, (tau_d/2)(delta - delta_bar)^2.
double storage_S3(const Vec6& x, double delta_w, int wind_index,
                  const SteadyState& steady, const DfigParams& dfig,
                  const WindParams& wind, double tau_delta_w);

double storage_total(const ClosedLoop& loop, const Eigen::VectorXd& x);
Eigen::VectorXd storage_gradient(const ClosedLoop& loop,
                                 const Eigen::VectorXd& x);
Eigen::MatrixXd storage_hessian(const ClosedLoop& loop,
                                const Eigen::VectorXd& x);

// Generator of the total storage along the closed loop:
// grad S . f + sum_w c_w sigma_w^2 v_tilde^2.
double ls_total(const ClosedLoop& loop, const Eigen::VectorXd& x,
                Workspace& ws);

// Generator of the DFIG block storage, taken with the block's own integral
// loop tau_d delta_dot = -delta + P_w. Flags report whether the exact law
// was active at this state.
double ls3_block(const ClosedLoop& loop, int wind_index, const Vec6& xw,
                 double omega_w, double delta_w,
                 DfigControlFlags* flags = nullptr);

// Supply rate of the DFIG block: -omega (P_w - P_w_opt).
double supply3(const ClosedLoop& loop, int wind_index, const Vec6& xw,
               double omega_w);

// LS = grad S . f + 1/2 sum_j g_j' (hess S) g_j via central differences,
// h = 1e-6 max(1, ||x||). diffusion columns are the g_j.
double ito_derivative_numeric(
    const std::function<double(const Eigen::VectorXd&)>& S,
    const Eigen::VectorXd& x, const Eigen::VectorXd& drift,
    const Eigen::MatrixXd& diffusion);

}  // namespace olfc
