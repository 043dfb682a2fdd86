#include "olfc/steady_state.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

#include "olfc/errors.hpp"
#include "olfc/grid.hpp"
#include "olfc/units.hpp"

namespace olfc {

namespace {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Damped Newton with forward-difference Jacobian and halving line search.
Eigen::VectorXd damped_newton(const ResidualFn& F, Eigen::VectorXd u,
                              double tol, int max_iter, const char* what) {
  const double h = 1e-7;
  Eigen::VectorXd r = F(u);
  double nrm = r.cwiseAbs().maxCoeff();
  for (int it = 0; it < max_iter; ++it) {
    if (nrm < tol) return u;
    const int d = static_cast<int>(u.size());
    Eigen::MatrixXd J(r.size(), d);
    for (int k = 0; k < d; ++k) {
      Eigen::VectorXd up = u;
      up(k) += h;
      J.col(k) = (F(up) - r) / h;
    }
    const Eigen::VectorXd step = J.fullPivLu().solve(-r);
    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1.0 / 64.0) {
      Eigen::VectorXd u_try = u + alpha * step;
      Eigen::VectorXd r_try = F(u_try);
      const double n_try = r_try.cwiseAbs().maxCoeff();
      if (std::isfinite(n_try) && n_try < nrm) {
        u = std::move(u_try);
        r = std::move(r_try);
        nrm = n_try;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }
  if (nrm < tol) return u;
  std::ostringstream msg;
  msg << what << ": Newton did not converge, residual " << nrm;
  throw SolverError(msg.str());
}

}  // namespace

SteadyState solve_steady_state(const NetworkTopology& topo,
                               const GridParams& grid,
                               const std::vector<DfigParams>& dfigs,
                               const std::vector<WindParams>& winds,
                               const Eigen::VectorXd& P_load,
                               const Eigen::VectorXd& P_target, double tol,
                               int max_iter) {
  const int n = topo.n_areas;
  const int m = topo.n_edges();
  const int nc = topo.n_conventional;
  const int nw = topo.n_wind;
  if (std::abs((P_target - P_load).sum()) > 1e-9)
    throw SolverError("solve_steady_state: P_target does not balance P_load");

  const auto& A = topo.incidence;

  // Grid unknowns: nodal angles of areas 2..n plus all voltages. The power
  // equation of area 1 is dropped (it is implied by the balance and the
  // lossless-network identity 1' A Y sin(theta) = 0).
  auto grid_residual = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
    phi.tail(n - 1) = u.head(n - 1);
    const Eigen::VectorXd V = u.tail(n);
    const Eigen::VectorXd theta = A.transpose() * phi;
    const Eigen::VectorXd Y = coupling_diagonal(V, topo);
    const Eigen::VectorXd r_p =
        P_target - P_load - A * Y.cwiseProduct(theta.array().sin().matrix());
    const Eigen::MatrixXd E = build_E_matrix(topo, grid.chi_d, theta);
    const Eigen::VectorXd r_v = grid.E_f - grid.chi_d.cwiseProduct(E * V);
    Eigen::VectorXd r(2 * n - 1);
    r.head(n - 1) = r_p.tail(n - 1);
    r.tail(n) = r_v;
    return r;
  };

  Eigen::VectorXd u0(2 * n - 1);
  u0.setZero();
  {
    // Voltage part of the initial guess: the linear solve at theta = 0
    // (one exact Newton step from the flat V = 1 start).
    const Eigen::MatrixXd E0 =
        build_E_matrix(topo, grid.chi_d, Eigen::VectorXd::Zero(m));
    u0.tail(n) = E0.fullPivLu().solve(
        grid.E_f.cwiseQuotient(grid.chi_d));
  }
  const Eigen::VectorXd u = damped_newton(grid_residual, u0, tol, max_iter,
                                          "solve_steady_state[grid]");

  SteadyState ss;
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
  phi.tail(n - 1) = u.head(n - 1);
  ss.theta_bar = A.transpose() * phi;
  ss.V_bar = u.tail(n);
  ss.omega_bar = Eigen::VectorXd::Zero(n);
  ss.P_bar = P_target;
  ss.delta_bar = P_target;
  ss.u_c_bar = P_target.head(nc);
  for (int i = 0; i < n; ++i)
    if (!(ss.V_bar(i) > 0.0))
      throw SolverError(
          "solve_steady_state: converged to a non-positive voltage");

  double res = grid_residual(u).cwiseAbs().maxCoeff();
  {
    const Eigen::VectorXd Y = coupling_diagonal(ss.V_bar, topo);
    const Eigen::VectorXd r_full =
        P_target - P_load -
        A * Y.cwiseProduct(ss.theta_bar.array().sin().matrix());
    res = std::max(res, r_full.cwiseAbs().maxCoeff());
  }

  // DFIG areas: solve currents and rotor voltages for the dispatched power
  // at the rotor-speed set point, v_tilde = 0.
  for (int j = 0; j < nw; ++j) {
    const DfigParams& dp = dfigs[j];
    const WindParams& wp = winds[j];
    const double fr = dp.f_r_ref;
    const double Pw = P_target(nc + j);
    const double Tm0 = mechanical_torque(fr, 0.0, dp, wp);
    auto dfig_residual = [&](const Eigen::VectorXd& y) {
      Vec6 x;
      x << y(0), y(1), y(2), y(3), fr, 0.0;
      const Vec6 d = dfig_drift(x, y(4), y(5), dp, wp);
      Eigen::VectorXd r(6);
      r.head(4) = d.head(4);
      r(4) = Tm0 - dp.X_m * (y(0) * y(3) - y(1) * y(2));
      r(5) = -dp.X_u() * y(3) * fr - Pw;
      return r;
    };
    Eigen::VectorXd y0(6);
    y0 << 0.1, 0.1, 0.1, -Pw / (dp.X_u() * fr), 0.0, 0.0;
    const Eigen::VectorXd y = damped_newton(dfig_residual, y0, tol, max_iter,
                                            "solve_steady_state[dfig]");
    Vec6 xb;
    xb << y(0), y(1), y(2), y(3), fr, 0.0;
    ss.x_bar.push_back(xb);
    ss.rotor_voltage_bar.emplace_back(y(4), y(5));
    res = std::max(res, dfig_residual(y).cwiseAbs().maxCoeff());
  }

  ss.residual_norm = res;
  if (!(res < 1e-10)) {
    std::ostringstream msg;
    msg << "solve_steady_state: residual " << res << " exceeds 1e-10";
    throw SolverError(msg.str());
  }
  return ss;
}

}  // namespace olfc
