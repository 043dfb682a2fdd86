#pragma once

#include <Eigen/Dense>
#include <numbers>

namespace olfc {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Per-unit base quantities: 1000 MVA power base, 120*pi rad/s nominal speed.
inline constexpr double kPowerBaseWatt = 1e9;
inline constexpr double kOmegaBase = 120.0 * std::numbers::pi;
inline constexpr double kTorqueBase = kPowerBaseWatt / kOmegaBase;

struct GridParams {
  Eigen::VectorXd tau_p;   // inertia time constants, diagonal entries > 0
  Eigen::VectorXd tau_v;   // voltage time constants > 0
  Eigen::VectorXd psi;     // damping > 0
  Eigen::VectorXd chi_d;   // X_d - X_d' > 0
  Eigen::VectorXd E_f;     // exciter voltages
  Eigen::VectorXd P_load;  // current per-area load
};

struct GovernorParams {
  double tau_c = 0.0;  // turbine time constant, s
  double xi = 0.0;     // speed regulation coefficient
};

struct CostModel {
  Eigen::VectorXd q;  // diagonal of Q, > 0
  Eigen::VectorXd z;
  Eigen::VectorXd c;
};

struct WindParams {
  double mu_w = 0.0;     // mean-reversion rate
  double sigma_w = 0.0;  // volatility
  double v_pred = 0.6;   // predicted wind speed, p.u. of rated
};

struct DfigParams {
  double R_s = 0.0, R_r = 0.0;           // stator/rotor resistances
  double X_s = 0.0, X_r = 0.0, X_m = 0.0;  // reactances
  // Base electrical speed multiplying the current dynamics. The storage
  // identities close only with the same scaling on all terms, so the
  // per-unit value 1.0 is the default (configurable).
  double f_b = 1.0;
  double H = 0.0;              // turbine inertia
  double V_t = 1.0;            // terminal voltage, constant exogenous
  double rotor_radius = 42.0;  // m
  double C_Q = 0.4;            // power coefficient, constant
  double air_density = 1.225;  // kg/m^3
  double gamma_bar = 1.2;      // rotor-speed bound
  double f_r_ref = 1.0;        // rotor-speed set point at steady state

  double K() const { return X_s * X_r - X_m * X_m; }
  double X_u() const { return X_m / X_s; }
  // c_w: the per-unit torque coefficient; T_m = (c_w/2)(v + v_tilde)^2.
  double torque_coeff() const {
    return air_density * std::numbers::pi * rotor_radius * rotor_radius *
           rotor_radius * C_Q / kTorqueBase;
  }
};

}  // namespace olfc
