#pragma once

#include <utility>

#include "olfc/params.hpp"

namespace olfc {

// P_c_dot = (-P_c - omega/xi + u_c)/tau_c
double governor_rhs(double P_c, double omega, double u_c,
                    const GovernorParams& params);

// T_m = (c_w/2)(v_pred + v_tilde)^2, per-unit (c_w = rho pi r^3 C_Q / T_base).
// First argument kept for signature stability; the torque does not depend
// on rotor speed in this model.
double mechanical_torque(double f_r_unused, double v_tilde,
                         const DfigParams& dfig, const WindParams& wind);

// Six-state DFIG drift, x = (i_ds, i_qs, i_dr, i_qr, f_r, v_tilde).
Vec6 dfig_drift(const Vec6& x, double V_dr, double V_qr,
                const DfigParams& dfig, const WindParams& wind);

// diag(0,0,0,0,0, sigma_w v_tilde)
Mat6 dfig_diffusion(const Vec6& x, const WindParams& wind);

// P_w = -X_u i_qr f_r
double dfig_power_output(const Vec6& x, const DfigParams& dfig);

// (drift, diffusion) of dv = -mu_w v dt + sigma_w v dbeta
std::pair<double, double> wind_sde_coefficients(double v_tilde,
                                                const WindParams& wind);

}  // namespace olfc
