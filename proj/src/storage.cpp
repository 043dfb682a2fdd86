#include "olfc/storage.hpp"

#include <cmath>

#include "olfc/control.hpp"
#include "olfc/units.hpp"

namespace olfc {

namespace {

// Gradient of the DFIG block storage in (i_ds,i_qs,i_dr,i_qr,f_r,v_tilde).
Vec6 s3_gradient(const Vec6& x, const Vec6& x_bar, const DfigParams& dfig) {
  const double ws = dfig.K() / (dfig.f_b * dfig.X_r);
  const double wr = dfig.K() / (dfig.f_b * dfig.X_s);
  Vec6 g;
  g(0) = ws * (x(0) - x_bar(0));
  g(1) = ws * (x(1) - x_bar(1));
  g(2) = wr * (x(2) - x_bar(2));
  g(3) = wr * (x(3) - x_bar(3));
  g(4) = 4.0 * dfig.H * (x(4) - x_bar(4));
  g(5) = 2.0 * dfig.torque_coeff() * x(5);
  return g;
}

}  // namespace

double storage_S1(const GridState& state, const SteadyState& steady,
                  const GridParams& params, const NetworkTopology& topo) {
  const Eigen::ArrayXd D =
      params.chi_d.array().inverse() - topo.B_self.array();
  auto energy = [&](const Eigen::VectorXd& th, const Eigen::VectorXd& V) {
    const Eigen::VectorXd Y = coupling_diagonal(V, topo);
    return -Y.dot(th.array().cos().matrix()) +
           0.5 * (V.array().square() * D).sum();
  };
  const Eigen::VectorXd Y_bar = coupling_diagonal(steady.V_bar, topo);
  double s = energy(state.theta, state.voltage) -
             energy(steady.theta_bar, steady.V_bar);
  s -= (Y_bar.array() * steady.theta_bar.array().sin() *
        (state.theta - steady.theta_bar).array())
           .sum();
  s -= (params.E_f.array() / params.chi_d.array() *
        (state.voltage - steady.V_bar).array())
           .sum();
  s += 0.5 * state.omega.dot(params.tau_p.cwiseProduct(state.omega));
  return s;
}

double storage_S2(const Eigen::VectorXd& P_c, const Eigen::VectorXd& delta_c,
                  const SteadyState& steady,
                  const std::vector<GovernorParams>& governors,
                  const Eigen::VectorXd& tau_delta_c) {
  double s = 0.0;
  for (int i = 0; i < P_c.size(); ++i) {
    const double dp = P_c(i) - steady.u_c_bar(i);
    const double dd = delta_c(i) - steady.delta_bar(i);
    s += 0.5 * governors[i].xi *
         (governors[i].tau_c * dp * dp + tau_delta_c(i) * dd * dd);
  }
  return s;
}

double storage_S3(const Vec6& x, double delta_w, int wind_index,
                  const SteadyState& steady, const DfigParams& dfig,
                  const WindParams& wind, double tau_delta_w) {
  (void)wind;
  const Vec6& xb = steady.x_bar[wind_index];
  const double ws = dfig.K() / (2.0 * dfig.f_b * dfig.X_r);
  const double wr = dfig.K() / (2.0 * dfig.f_b * dfig.X_s);
  const int nc = static_cast<int>(steady.u_c_bar.size());
  const double dd = delta_w - steady.delta_bar(nc + wind_index);
  double s = ws * ((x(0) - xb(0)) * (x(0) - xb(0)) +
                   (x(1) - xb(1)) * (x(1) - xb(1)));
  s += wr * ((x(2) - xb(2)) * (x(2) - xb(2)) +
             (x(3) - xb(3)) * (x(3) - xb(3)));
  s += 2.0 * dfig.H * (x(4) - xb(4)) * (x(4) - xb(4));
  s += dfig.torque_coeff() * x(5) * x(5);
  s += 0.5 * tau_delta_w * dd * dd;
  return s;
}

double storage_total(const ClosedLoop& loop, const Eigen::VectorXd& x) {
  const SystemModel& mod = *loop.model;
  GridState gs{x.segment(mod.off_theta(), mod.m()),
               x.segment(mod.off_omega(), mod.n()),
               x.segment(mod.off_V(), mod.n())};
  double s = storage_S1(gs, loop.steady, mod.grid, mod.topo);
  s += storage_S2(x.segment(mod.off_Pc(), mod.nc()),
                  x.segment(mod.off_delta(), mod.nc()), loop.steady,
                  mod.governors, mod.tau_delta.head(mod.nc()));
  for (int j = 0; j < mod.nw(); ++j)
    s += storage_S3(x.segment<6>(mod.off_dfig(j)),
                    x(mod.off_delta() + mod.nc() + j), j, loop.steady,
                    mod.dfigs[j], mod.winds[j],
                    mod.tau_delta(mod.nc() + j));
  return s;
}

Eigen::VectorXd storage_gradient(const ClosedLoop& loop,
                                 const Eigen::VectorXd& x) {
  const SystemModel& mod = *loop.model;
  const int n = mod.n(), m = mod.m(), nc = mod.nc();
  Eigen::VectorXd g(mod.state_dim());

  const auto theta = x.segment(mod.off_theta(), m);
  const auto V = x.segment(mod.off_V(), n);
  const Eigen::VectorXd Y = coupling_diagonal(V, mod.topo);
  const Eigen::VectorXd Y_bar = coupling_diagonal(loop.steady.V_bar, mod.topo);
  g.segment(mod.off_theta(), m) =
      Y.cwiseProduct(theta.array().sin().matrix()) -
      Y_bar.cwiseProduct(loop.steady.theta_bar.array().sin().matrix());

  const Eigen::MatrixXd E = build_E_matrix(mod.topo, mod.grid.chi_d, theta);
  g.segment(mod.off_V(), n) =
      E * V - mod.grid.E_f.cwiseQuotient(mod.grid.chi_d);

  g.segment(mod.off_omega(), n) =
      mod.grid.tau_p.cwiseProduct(x.segment(mod.off_omega(), n));

  for (int i = 0; i < n; ++i) {
    const double xi = i < nc ? mod.governors[i].xi : 1.0;
    g(mod.off_delta() + i) = mod.tau_delta(i) * xi *
                             (x(mod.off_delta() + i) -
                              loop.steady.delta_bar(i));
  }
  for (int i = 0; i < nc; ++i)
    g(mod.off_Pc() + i) =
        mod.governors[i].tau_c * mod.governors[i].xi *
        (x(mod.off_Pc() + i) - loop.steady.u_c_bar(i));

  for (int j = 0; j < mod.nw(); ++j)
    g.segment<6>(mod.off_dfig(j)) = s3_gradient(
        x.segment<6>(mod.off_dfig(j)), loop.steady.x_bar[j], mod.dfigs[j]);
  return g;
}

Eigen::MatrixXd storage_hessian(const ClosedLoop& loop,
                                const Eigen::VectorXd& x) {
  const SystemModel& mod = *loop.model;
  const int n = mod.n(), m = mod.m(), nc = mod.nc();
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(mod.state_dim(), mod.state_dim());

  const auto theta = x.segment(mod.off_theta(), m);
  const auto V = x.segment(mod.off_V(), n);
  const Eigen::VectorXd Y = coupling_diagonal(V, mod.topo);
  for (int k = 0; k < m; ++k) {
    const auto [i, j] = mod.topo.edges[k];
    H(mod.off_theta() + k, mod.off_theta() + k) = Y(k) * std::cos(theta(k));
    // d/dV of Y_k sin th_k: the other endpoint's voltage times B sin.
    const double s = mod.topo.B_line(k) * std::sin(theta(k));
    H(mod.off_theta() + k, mod.off_V() + i) = V(j) * s;
    H(mod.off_V() + i, mod.off_theta() + k) = V(j) * s;
    H(mod.off_theta() + k, mod.off_V() + j) = V(i) * s;
    H(mod.off_V() + j, mod.off_theta() + k) = V(i) * s;
  }
  H.block(mod.off_V(), mod.off_V(), n, n) =
      build_E_matrix(mod.topo, mod.grid.chi_d, theta);
  H.block(mod.off_omega(), mod.off_omega(), n, n) =
      mod.grid.tau_p.asDiagonal();
  for (int i = 0; i < n; ++i) {
    const double xi = i < nc ? mod.governors[i].xi : 1.0;
    H(mod.off_delta() + i, mod.off_delta() + i) = mod.tau_delta(i) * xi;
  }
  for (int i = 0; i < nc; ++i)
    H(mod.off_Pc() + i, mod.off_Pc() + i) =
        mod.governors[i].tau_c * mod.governors[i].xi;
  for (int j = 0; j < mod.nw(); ++j) {
    const DfigParams& dp = mod.dfigs[j];
    const int o = mod.off_dfig(j);
    const double ws = dp.K() / (dp.f_b * dp.X_r);
    const double wr = dp.K() / (dp.f_b * dp.X_s);
    H(o + 0, o + 0) = ws;
    H(o + 1, o + 1) = ws;
    H(o + 2, o + 2) = wr;
    H(o + 3, o + 3) = wr;
    H(o + 4, o + 4) = 4.0 * dp.H;
    H(o + 5, o + 5) = 2.0 * dp.torque_coeff();
  }
  return H;
}

double ls_total(const ClosedLoop& loop, const Eigen::VectorXd& x,
                Workspace& ws) {
  const SystemModel& mod = *loop.model;
  closed_loop_drift(loop, x, ws.drift, ws, nullptr);
  double ls = storage_gradient(loop, x).dot(ws.drift);
  // Ito correction: the storage is exactly quadratic in v_tilde with
  // coefficient c_w, so 1/2 g' (hess S) g = c_w sigma^2 v^2 per wind area.
  for (int j = 0; j < mod.nw(); ++j) {
    const double v = x(mod.off_dfig(j) + 5);
    const double sig = mod.winds[j].sigma_w;
    ls += mod.dfigs[j].torque_coeff() * sig * sig * v * v;
  }
  return ls;
}

double ls3_block(const ClosedLoop& loop, int wind_index, const Vec6& xw,
                 double omega_w, double delta_w, DfigControlFlags* flags) {
  const SystemModel& mod = *loop.model;
  const DfigParams& dp = mod.dfigs[wind_index];
  const WindParams& wp = mod.winds[wind_index];
  const int nc = mod.nc();
  const auto [V_dr, V_qr] = dfig_controller(
      xw, omega_w, delta_w, loop.wind_ctx[wind_index], dp, wp, flags);
  const Vec6 f = dfig_drift(xw, V_dr, V_qr, dp, wp);
  double ls = s3_gradient(xw, loop.steady.x_bar[wind_index], dp).dot(f);
  ls += dp.torque_coeff() * wp.sigma_w * wp.sigma_w * xw(5) * xw(5);
  const double tau_d = mod.tau_delta(nc + wind_index);
  const double P_w = dfig_power_output(xw, dp);
  const double delta_dot = (-delta_w + P_w) / tau_d;
  ls += tau_d * (delta_w - loop.steady.delta_bar(nc + wind_index)) *
        delta_dot;
  return ls;
}

double supply3(const ClosedLoop& loop, int wind_index, const Vec6& xw,
               double omega_w) {
  const SystemModel& mod = *loop.model;
  const double P_w = dfig_power_output(xw, mod.dfigs[wind_index]);
  return -omega_w * (P_w - loop.wind_ctx[wind_index].P_w_opt);
}

double ito_derivative_numeric(
    const std::function<double(const Eigen::VectorXd&)>& S,
    const Eigen::VectorXd& x, const Eigen::VectorXd& drift,
    const Eigen::MatrixXd& diffusion) {
  const double h = 1e-6 * std::max(1.0, x.norm());
  double ls = 0.0;
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    if (drift(i) == 0.0) continue;
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    ls += drift(i) * (S(xp) - S(xm)) / (2.0 * h);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  const double S0 = S(x);
  for (int j = 0; j < diffusion.cols(); ++j) {
    const double g2 = diffusion.col(j).squaredNorm();
    if (g2 == 0.0) continue;
    const Eigen::VectorXd u = diffusion.col(j) / std::sqrt(g2);
    ls += 0.5 * g2 * (S(x + h * u) - 2.0 * S0 + S(x - h * u)) / (h * h);
  }
  return ls;
}

}  // namespace olfc
