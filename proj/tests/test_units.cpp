#include <doctest.h>

#include <cmath>

#include "fixture.hpp"
#include "olfc/units.hpp"

using namespace olfc;

TEST_CASE("torque coefficient and mechanical torque match frozen values") {
  const SystemModel mod = four_area_model();
  const DfigParams& dp = mod.dfigs[0];
  const WindParams& wp = mod.winds[0];
  CHECK(dp.torque_coeff() ==
        doctest::Approx(0.04299569195103301).epsilon(1e-15));
  CHECK(mechanical_torque(1.0, 0.0, dp, wp) ==
        doctest::Approx(0.007739224551185942).epsilon(1e-14));
  // v_pred + v_tilde = 1: T_m = c_w / 2.
  CHECK(mechanical_torque(1.0, 0.4, dp, wp) ==
        doctest::Approx(0.021497845975516506).epsilon(1e-14));
  // The first argument is unused by this turbine model.
  CHECK(mechanical_torque(0.3, 0.1, dp, wp) ==
        mechanical_torque(1.7, 0.1, dp, wp));
}

TEST_CASE("dfig reactance combinations") {
  const SystemModel mod = four_area_model();
  const DfigParams& dp = mod.dfigs[0];
  CHECK(dp.K() == doctest::Approx(0.1081999999999983).epsilon(1e-12));
  CHECK(dp.X_u() == doctest::Approx(0.994475138121547).epsilon(1e-14));
}

TEST_CASE("dfig_drift matches the frozen sample") {
  const SystemModel mod = four_area_model();
  Vec6 x;
  x << 0.21, 2.73, -0.24, -3.05, 0.97, 0.08;
  const Vec6 d = dfig_drift(x, -0.012, -0.09, mod.dfigs[0], mod.winds[0]);
  Vec6 ref;
  ref << -2.08692329020336587, 0.98688077634013105, 2.06965341959336691,
      -0.98703844731979384, -0.00671553062826896, -1.37199999999999989;
  CHECK((d - ref).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dfig_diffusion only drives the wind channel") {
  const SystemModel mod = four_area_model();
  const WindParams& wp = mod.winds[0];
  Vec6 x = Vec6::Zero();
  x(5) = 0.07;
  const Mat6 g = dfig_diffusion(x, wp);
  CHECK(g(5, 5) == doctest::Approx(2.65 * 0.07).epsilon(1e-15));
  CHECK(g.cwiseAbs().sum() == doctest::Approx(std::abs(g(5, 5))));
}

TEST_CASE("dfig_power_output and wind SDE coefficients") {
  const SystemModel mod = four_area_model();
  Vec6 x = Vec6::Zero();
  x(3) = -3.0;
  x(4) = 1.01;
  CHECK(dfig_power_output(x, mod.dfigs[0]) ==
        doctest::Approx(-mod.dfigs[0].X_u() * -3.0 * 1.01).epsilon(1e-15));
  const auto [a, b] = wind_sde_coefficients(0.2, mod.winds[0]);
  CHECK(a == doctest::Approx(-17.15 * 0.2).epsilon(1e-15));
  CHECK(b == doctest::Approx(2.65 * 0.2).epsilon(1e-15));
}

TEST_CASE("governor_rhs") {
  GovernorParams gp{7.2, 0.73};
  CHECK(governor_rhs(0.6, 0.02, 0.7, gp) ==
        doctest::Approx((-0.6 - 0.02 / 0.73 + 0.7) / 7.2).epsilon(1e-15));
  // Equilibrium: P_c = u_c, omega = 0.
  CHECK(governor_rhs(0.7, 0.0, 0.7, gp) == 0.0);
}
