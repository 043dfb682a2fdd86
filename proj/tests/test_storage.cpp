#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fixture.hpp"
#include "olfc/storage.hpp"
#include "olfc/system.hpp"
#include "olfc/units.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace olfc;

namespace {

ClosedLoop& loop0() {
  static SystemModel mod = four_area_model();
  static ClosedLoop loop = make_closed_loop(mod, four_area_load0());
  return loop;
}

// Perturbed 25-dim state used as a fixed probe: grid and governors displaced,
// DFIG at the solver's own equilibrium (bitwise, so the controller guard sees
// a current mismatch of exactly zero).
VectorXd probe_state() {
  VectorXd x = equilibrium_state(loop0());
  x.head(19) << -2.5215373800271321e-03, 3.3071473040771446e-02,
      -8.7527529138546306e-02, -5.6977593477801999e-02, 1.1653902878568512,
      1.1353665961225881, 1.1151658288093904, 1.1305879701867365, 0.05, -0.03,
      0.04, -0.02, 0.68589420654911837, 0.75654911838790928,
      0.47808564231738027, 3.2594710327455916, 0.73589420654911830,
      0.65654911838790919, 0.65808564231738020;
  return x;
}

}  // namespace

TEST_CASE("storage vanishes with zero gradient at the equilibrium") {
  const ClosedLoop& loop = loop0();
  const VectorXd xe = equilibrium_state(loop);
  CHECK(std::abs(storage_total(loop, xe)) < 1e-12);
  CHECK(storage_gradient(loop, xe).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("storage hessian is positive definite at the equilibrium") {
  const ClosedLoop& loop = loop0();
  const VectorXd xe = equilibrium_state(loop);
  const MatrixXd H = storage_hessian(loop, xe);
  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<MatrixXd> full(H);
  CHECK(full.eigenvalues().minCoeff() > 1e-4);
  // Frozen minimum eigenvalue of the grid (theta, V) block.
  Eigen::SelfAdjointEigenSolver<MatrixXd> grid_blk(H.topLeftCorner(8, 8));
  CHECK(grid_blk.eigenvalues().minCoeff() ==
        doctest::Approx(2.1263591940233386).epsilon(1e-6));
}

TEST_CASE("governor storage matches the closed form") {
  SteadyState stub;
  stub.u_c_bar = (VectorXd(1) << 0.5).finished();
  stub.delta_bar = (VectorXd(1) << 0.7).finished();
  const std::vector<GovernorParams> gov = {{7.2, 0.73}};
  const double s =
      storage_S2((VectorXd(1) << 0.6).finished(),
                 (VectorXd(1) << 0.8).finished(), stub, gov,
                 (VectorXd(1) << 0.2).finished());
  CHECK(s == doctest::Approx(0.027010000000000003).epsilon(1e-14));
}

TEST_CASE("total storage at the probe state matches the frozen value") {
  const ClosedLoop& loop = loop0();
  CHECK(storage_total(loop, probe_state()) ==
        doctest::Approx(0.21251741115981368).epsilon(1e-7));
}

TEST_CASE("closed-loop drift at the probe state matches the frozen vector") {
  const ClosedLoop& loop = loop0();
  VectorXd rhs(25);
  rhs << 0.08, -0.07, 0.06, 0.07, -0.49376926157213208, 0.43514262037192414,
      -0.36043615152785524, 0.39461227005804972, 0.32487640625289471,
      -0.54510795083503527, 0.60751953455651586, -0.43837662397997512,
      -6.4280821917808613, -23.616438356164355, 53.828082191780794,
      -2.6999999999999957, -0.016457382039573819, 0.020749395648670448,
      -0.026381406803139901, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  const VectorXd d = closed_loop_drift(loop, probe_state());
  // The DFIG sits at its equilibrium here, so its drift is zero to solver
  // precision; everything else is checked against the frozen reference.
  CHECK((d.head(19) - rhs.head(19)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(d.tail(6).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("storage gradient agrees with finite differences") {
  const ClosedLoop& loop = loop0();
  const VectorXd x = probe_state();
  const VectorXd g = storage_gradient(loop, x);
  const double h = 1e-6;
  VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const double fd =
        (storage_total(loop, xp) - storage_total(loop, xm)) / (2.0 * h);
    CHECK(std::abs(g(i) - fd) < 2e-7);
    xp(i) = x(i);
    xm(i) = x(i);
  }
}

TEST_CASE("storage hessian agrees with finite differences of the gradient") {
  const ClosedLoop& loop = loop0();
  const VectorXd x = probe_state();
  const MatrixXd H = storage_hessian(loop, x);
  const double h = 1e-6;
  VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    const VectorXd col =
        (storage_gradient(loop, xp) - storage_gradient(loop, xm)) / (2.0 * h);
    CHECK((H.col(i) - col).cwiseAbs().maxCoeff() < 1e-6);
    xp(i) = x(i);
    xm(i) = x(i);
  }
}

TEST_CASE("ls_total matches the numeric Ito derivative") {
  const ClosedLoop& loop = loop0();
  const SystemModel& mod = *loop.model;
  // Probe with the wind block displaced too so the Ito correction is live.
  VectorXd x = probe_state();
  x(mod.off_dfig(0) + 0) += 0.002;
  x(mod.off_dfig(0) + 3) += 0.003;
  x(mod.off_dfig(0) + 4) = 1.001;
  x(mod.off_dfig(0) + 5) = 0.05;

  Workspace ws(mod);
  const double ls = ls_total(loop, x, ws);

  const VectorXd drift = closed_loop_drift(loop, x);
  VectorXd diag(mod.state_dim());
  closed_loop_diffusion(loop, x, diag);
  MatrixXd g = MatrixXd::Zero(mod.state_dim(), 1);
  g(mod.off_dfig(0) + 5, 0) = diag(mod.off_dfig(0) + 5);
  const double ls_fd = ito_derivative_numeric(
      [&](const VectorXd& y) { return storage_total(loop, y); }, x, drift, g);
  CHECK(std::abs(ls - ls_fd) < 1e-5 * std::max(1.0, std::abs(ls)));
}

TEST_CASE("supply3 is the wind power mismatch against frequency") {
  const ClosedLoop& loop = loop0();
  Vec6 xw = loop.steady.x_bar[0];
  xw(3) += 0.01;
  const double om = 0.07;
  const double pw = dfig_power_output(xw, loop.model->dfigs[0]);
  CHECK(supply3(loop, 0, xw, om) ==
        doctest::Approx(-om * (pw - loop.P_opt(3))).epsilon(1e-14));
}

TEST_CASE("grid storage is a Bregman distance: positive off equilibrium") {
  const ClosedLoop& loop = loop0();
  GridState gs;
  gs.theta = loop.steady.theta_bar + (VectorXd(4) << 0.01, -0.02, 0.015,
                                      -0.005)
                                         .finished();
  gs.voltage = loop.steady.V_bar +
               (VectorXd(4) << 0.02, -0.01, 0.03, -0.02).finished();
  gs.omega = VectorXd::Zero(4);
  const double s1 =
      storage_S1(gs, loop.steady, loop.model->grid, loop.model->topo);
  CHECK(s1 > 0.0);
  GridState eq{loop.steady.theta_bar, VectorXd::Zero(4), loop.steady.V_bar};
  CHECK(std::abs(storage_S1(eq, loop.steady, loop.model->grid,
                            loop.model->topo)) < 1e-14);
}
