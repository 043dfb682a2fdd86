#include "olfc/grid.hpp"

#include <cmath>

#include "olfc/errors.hpp"

namespace olfc {

Eigen::MatrixXd build_E_matrix(const NetworkTopology& topo,
                               const Eigen::VectorXd& chi_d,
                               const Eigen::VectorXd& theta) {
  const int n = topo.n_areas;
  if (theta.size() != topo.n_edges())
    throw ConfigError("build_E_matrix: theta needs one entry per edge");
  for (int i = 0; i < n; ++i)
    if (!(chi_d(i) > 0.0))
      throw ConfigError("build_E_matrix: chi_d must be > 0");
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) E(i, i) = 1.0 / chi_d(i) - topo.B_self(i);
  for (int k = 0; k < topo.n_edges(); ++k) {
    const auto& [i, j] = topo.edges[k];
    const double off = -topo.B_line(k) * std::cos(theta(k));
    E(i, j) = off;
    E(j, i) = off;
  }
  return E;
}

Eigen::VectorXd coupling_diagonal(const Eigen::VectorXd& voltage,
                                  const NetworkTopology& topo) {
  Eigen::VectorXd Y(topo.n_edges());
  for (int k = 0; k < topo.n_edges(); ++k) {
    const auto& [i, j] = topo.edges[k];
    Y(k) = voltage(i) * voltage(j) * topo.B_line(k);
  }
  return Y;
}

Eigen::MatrixXd coupling_matrix(const Eigen::VectorXd& voltage,
                                const NetworkTopology& topo) {
  return coupling_diagonal(voltage, topo).asDiagonal();
}

GridState swing_rhs(const GridState& state, const Eigen::VectorXd& P_gen,
                    const GridParams& params, const NetworkTopology& topo) {
  const auto& A = topo.incidence;
  const Eigen::VectorXd Y = coupling_diagonal(state.voltage, topo);
  const Eigen::VectorXd flow = Y.cwiseProduct(state.theta.array().sin().matrix());
  GridState d;
  d.theta = A.transpose() * state.omega;
  d.omega = (-params.psi.cwiseProduct(state.omega) + P_gen - params.P_load -
             A * flow)
                .cwiseQuotient(params.tau_p);
  const Eigen::MatrixXd E = build_E_matrix(topo, params.chi_d, state.theta);
  d.voltage = (params.E_f - params.chi_d.cwiseProduct(E * state.voltage))
                  .cwiseQuotient(params.tau_v);
  return d;
}

}  // namespace olfc
