#include "olfc/dispatch.hpp"

#include "olfc/errors.hpp"

namespace olfc {

double aggregate_cost(const Eigen::VectorXd& P, const CostModel& model) {
  return 0.5 * P.dot(model.q.cwiseProduct(P)) + model.z.dot(P) + model.c.sum();
}

double dispatch_lambda(const Eigen::VectorXd& P_load, const CostModel& model) {
  const Eigen::VectorXd qinv = model.q.cwiseInverse();
  return (P_load.sum() + qinv.dot(model.z)) / qinv.sum();
}

Eigen::VectorXd optimal_dispatch(const Eigen::VectorXd& P_load,
                                 const CostModel& model) {
  for (int i = 0; i < model.q.size(); ++i)
    if (!(model.q(i) > 0.0))
      throw ConfigError("optimal_dispatch: q must be > 0");
  const double lambda = dispatch_lambda(P_load, model);
  return (Eigen::VectorXd::Constant(P_load.size(), lambda) - model.z)
      .cwiseQuotient(model.q);
}

std::pair<double, double> governor_integral_rhs(double delta, double P_c,
                                                double tau_delta) {
  return {(-delta + P_c) / tau_delta, delta};
}

Eigen::VectorXd consensus_controller_rhs(const Eigen::VectorXd& delta,
                                         const Eigen::VectorXd& P,
                                         const CostModel& model,
                                         const Eigen::MatrixXd& L_com,
                                         const Eigen::VectorXd& xi,
                                         const Eigen::VectorXd& tau_delta) {
  const int n = static_cast<int>(delta.size());
  const int nc = static_cast<int>(xi.size());
  const Eigen::VectorXd marg = model.q.cwiseProduct(delta) + model.z;
  const Eigen::VectorXd cons = L_com * marg;
  Eigen::VectorXd d(n);
  for (int i = 0; i < n; ++i) {
    const double pref = i < nc ? model.q(i) / xi(i) : model.q(i);
    d(i) = (-delta(i) + P(i) - pref * cons(i)) / tau_delta(i);
  }
  return d;
}

Eigen::VectorXd consensus_controller_rhs(const Eigen::VectorXd& delta,
                                         const Eigen::VectorXd& P,
                                         const CostModel& model,
                                         const NetworkTopology& topo,
                                         const Eigen::VectorXd& xi,
                                         const Eigen::VectorXd& tau_delta) {
  return consensus_controller_rhs(delta, P, model, comm_laplacian(topo), xi,
                                  tau_delta);
}

}  // namespace olfc
