#pragma once

#include <Eigen/Dense>
#include <vector>

#include "olfc/control.hpp"
#include "olfc/params.hpp"
#include "olfc/steady_state.hpp"
#include "olfc/topology.hpp"

namespace olfc {

// Everything that defines the plant + controllers, independent of load level.
// State layout: [theta(m), V(n), omega(n), delta(n), P_c(nc), 6 per wind area].
struct SystemModel {
  NetworkTopology topo;
  GridParams grid;  // P_load field unused here; loads live on the schedule
  std::vector<GovernorParams> governors;  // size nc
  std::vector<DfigParams> dfigs;          // size nw
  std::vector<WindParams> winds;          // size nw
  CostModel cost;
  Eigen::VectorXd tau_delta;  // R^n
  Eigen::MatrixXd L_com;
  double epsilon_guard = 1e-4;
  double v_cap = 0.5;

  int n() const { return topo.n_areas; }
  int m() const { return topo.n_edges(); }
  int nc() const { return topo.n_conventional; }
  int nw() const { return topo.n_wind; }
  int state_dim() const { return m() + 3 * n() + nc() + 6 * nw(); }
  int off_theta() const { return 0; }
  int off_V() const { return m(); }
  int off_omega() const { return m() + n(); }
  int off_delta() const { return m() + 2 * n(); }
  int off_Pc() const { return m() + 3 * n(); }
  int off_dfig(int j) const { return m() + 3 * n() + nc() + 6 * j; }
  Eigen::VectorXd xi_vector() const;  // per conventional area
};

struct GuardCounters {
  long strip = 0;
  long sat = 0;
};

// One load level: dispatch target, equilibrium, and the controller contexts
// anchored to it.
struct ClosedLoop {
  const SystemModel* model = nullptr;
  Eigen::VectorXd P_load;
  Eigen::VectorXd P_opt;
  SteadyState steady;
  std::vector<DfigControllerContext> wind_ctx;
};

// Reusable temporaries for the hot path.
struct Workspace {
  Eigen::MatrixXd E;
  Eigen::VectorXd sin_th, flow, P, marg, cons, tmp_n, drift;
  explicit Workspace(const SystemModel& model);
};

// Dispatch + steady-state solve for the given load.
ClosedLoop make_closed_loop(const SystemModel& model,
                            const Eigen::VectorXd& P_load);

Eigen::VectorXd equilibrium_state(const ClosedLoop& loop);

// Per-area generated power col(P_c, P_w) at a state.
Eigen::VectorXd generated_power(const SystemModel& model,
                                const Eigen::VectorXd& x);

void closed_loop_drift(const ClosedLoop& loop, const Eigen::VectorXd& x,
                       Eigen::VectorXd& dx, Workspace& ws,
                       GuardCounters* guards = nullptr);
Eigen::VectorXd closed_loop_drift(const ClosedLoop& loop,
                                  const Eigen::VectorXd& x,
                                  GuardCounters* guards = nullptr);

// Diagonal of the diffusion: sigma_w v_tilde on each wind-speed channel,
// zero elsewhere.
void closed_loop_diffusion(const ClosedLoop& loop, const Eigen::VectorXd& x,
                           Eigen::VectorXd& diag);

// Controller guard flags per wind area at a state (for audit exclusion).
std::vector<DfigControlFlags> controller_flags(const ClosedLoop& loop,
                                               const Eigen::VectorXd& x);

}  // namespace olfc
