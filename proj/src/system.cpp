#include "olfc/system.hpp"

#include <cmath>

#include "olfc/dispatch.hpp"
#include "olfc/errors.hpp"
#include "olfc/units.hpp"

namespace olfc {

Eigen::VectorXd SystemModel::xi_vector() const {
  Eigen::VectorXd xi(nc());
  for (int i = 0; i < nc(); ++i) xi(i) = governors[i].xi;
  return xi;
}

Workspace::Workspace(const SystemModel& model)
    : E(model.n(), model.n()),
      sin_th(model.m()),
      flow(model.m()),
      P(model.n()),
      marg(model.n()),
      cons(model.n()),
      tmp_n(model.n()),
      drift(model.state_dim()) {}

ClosedLoop make_closed_loop(const SystemModel& model,
                            const Eigen::VectorXd& P_load) {
  ClosedLoop loop;
  loop.model = &model;
  loop.P_load = P_load;
  loop.P_opt = optimal_dispatch(P_load, model.cost);
  loop.steady = solve_steady_state(model.topo, model.grid, model.dfigs,
                                   model.winds, P_load, loop.P_opt);
  for (int j = 0; j < model.nw(); ++j) {
    DfigControllerContext ctx;
    ctx.x_bar = loop.steady.x_bar[j];
    ctx.P_w_opt = loop.P_opt(model.nc() + j);
    ctx.V_dr_bar = loop.steady.rotor_voltage_bar[j].first;
    ctx.V_qr_bar = loop.steady.rotor_voltage_bar[j].second;
    ctx.epsilon_guard = model.epsilon_guard;
    ctx.v_cap = model.v_cap;
    loop.wind_ctx.push_back(ctx);
  }
  return loop;
}

Eigen::VectorXd equilibrium_state(const ClosedLoop& loop) {
  const SystemModel& mod = *loop.model;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(mod.state_dim());
  x.segment(mod.off_theta(), mod.m()) = loop.steady.theta_bar;
  x.segment(mod.off_V(), mod.n()) = loop.steady.V_bar;
  x.segment(mod.off_delta(), mod.n()) = loop.steady.delta_bar;
  x.segment(mod.off_Pc(), mod.nc()) = loop.steady.u_c_bar;
  for (int j = 0; j < mod.nw(); ++j)
    x.segment<6>(mod.off_dfig(j)) = loop.steady.x_bar[j];
  return x;
}

Eigen::VectorXd generated_power(const SystemModel& model,
                                const Eigen::VectorXd& x) {
  Eigen::VectorXd P(model.n());
  P.head(model.nc()) = x.segment(model.off_Pc(), model.nc());
  for (int j = 0; j < model.nw(); ++j)
    P(model.nc() + j) =
        dfig_power_output(x.segment<6>(model.off_dfig(j)), model.dfigs[j]);
  return P;
}

void closed_loop_drift(const ClosedLoop& loop, const Eigen::VectorXd& x,
                       Eigen::VectorXd& dx, Workspace& ws,
                       GuardCounters* guards) {
  const SystemModel& mod = *loop.model;
  const int n = mod.n(), m = mod.m(), nc = mod.nc(), nw = mod.nw();
  dx.resize(mod.state_dim());

  const auto theta = x.segment(mod.off_theta(), m);
  const auto V = x.segment(mod.off_V(), n);
  const auto omega = x.segment(mod.off_omega(), n);
  const auto delta = x.segment(mod.off_delta(), n);
  const auto Pc = x.segment(mod.off_Pc(), nc);

  ws.P.head(nc) = Pc;
  for (int j = 0; j < nw; ++j)
    ws.P(nc + j) =
        dfig_power_output(x.segment<6>(mod.off_dfig(j)), mod.dfigs[j]);

  // theta_dot = A' omega; power flow accumulated edge by edge.
  ws.tmp_n = ws.P - loop.P_load;  // net injection
  for (int k = 0; k < m; ++k) {
    const auto [i, j] = mod.topo.edges[k];
    dx(mod.off_theta() + k) = omega(i) - omega(j);
    const double flow =
        V(i) * V(j) * mod.topo.B_line(k) * std::sin(theta(k));
    ws.tmp_n(i) -= flow;
    ws.tmp_n(j) += flow;
  }
  dx.segment(mod.off_omega(), n) =
      (ws.tmp_n - mod.grid.psi.cwiseProduct(omega))
          .cwiseQuotient(mod.grid.tau_p);

  // tau_v V_dot = -chi E(theta) V + E_f, with (E V) accumulated in place.
  for (int i = 0; i < n; ++i)
    ws.tmp_n(i) =
        (1.0 / mod.grid.chi_d(i) - mod.topo.B_self(i)) * V(i);
  for (int k = 0; k < m; ++k) {
    const auto [i, j] = mod.topo.edges[k];
    const double c = mod.topo.B_line(k) * std::cos(theta(k));
    ws.tmp_n(i) -= c * V(j);
    ws.tmp_n(j) -= c * V(i);
  }
  dx.segment(mod.off_V(), n) =
      (mod.grid.E_f - mod.grid.chi_d.cwiseProduct(ws.tmp_n))
          .cwiseQuotient(mod.grid.tau_v);

  // Consensus: tau_d delta_dot = -delta + P - pref L_com (q delta + z).
  ws.marg = mod.cost.q.cwiseProduct(delta) + mod.cost.z;
  ws.cons.noalias() = mod.L_com * ws.marg;
  for (int i = 0; i < n; ++i) {
    const double pref =
        i < nc ? mod.cost.q(i) / mod.governors[i].xi : mod.cost.q(i);
    dx(mod.off_delta() + i) =
        (-delta(i) + ws.P(i) - pref * ws.cons(i)) / mod.tau_delta(i);
  }

  for (int i = 0; i < nc; ++i)
    dx(mod.off_Pc() + i) =
        governor_rhs(Pc(i), omega(i), delta(i), mod.governors[i]);

  for (int j = 0; j < nw; ++j) {
    const Vec6 xw = x.segment<6>(mod.off_dfig(j));
    DfigControlFlags fl;
    const auto [V_dr, V_qr] =
        dfig_controller(xw, omega(nc + j), delta(nc + j), loop.wind_ctx[j],
                        mod.dfigs[j], mod.winds[j], &fl);
    if (guards) {
      if (fl.strip_d || fl.strip_q) ++guards->strip;
      if (fl.sat_d || fl.sat_q) ++guards->sat;
    }
    dx.segment<6>(mod.off_dfig(j)) =
        dfig_drift(xw, V_dr, V_qr, mod.dfigs[j], mod.winds[j]);
  }
}

Eigen::VectorXd closed_loop_drift(const ClosedLoop& loop,
                                  const Eigen::VectorXd& x,
                                  GuardCounters* guards) {
  Workspace ws(*loop.model);
  Eigen::VectorXd dx;
  closed_loop_drift(loop, x, dx, ws, guards);
  return dx;
}

void closed_loop_diffusion(const ClosedLoop& loop, const Eigen::VectorXd& x,
                           Eigen::VectorXd& diag) {
  const SystemModel& mod = *loop.model;
  diag = Eigen::VectorXd::Zero(mod.state_dim());
  for (int j = 0; j < mod.nw(); ++j) {
    const int idx = mod.off_dfig(j) + 5;
    diag(idx) = mod.winds[j].sigma_w * x(idx);
  }
}

std::vector<DfigControlFlags> controller_flags(const ClosedLoop& loop,
                                               const Eigen::VectorXd& x) {
  const SystemModel& mod = *loop.model;
  std::vector<DfigControlFlags> out(mod.nw());
  for (int j = 0; j < mod.nw(); ++j) {
    const Vec6 xw = x.segment<6>(mod.off_dfig(j));
    dfig_controller(xw, x(mod.off_omega() + mod.nc() + j),
                    x(mod.off_delta() + mod.nc() + j), loop.wind_ctx[j],
                    mod.dfigs[j], mod.winds[j], &out[j]);
  }
  return out;
}

}  // namespace olfc
