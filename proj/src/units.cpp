#include "olfc/units.hpp"

#include <cmath>

#include "olfc/errors.hpp"

namespace olfc {

double governor_rhs(double P_c, double omega, double u_c,
                    const GovernorParams& params) {
  return (-P_c - omega / params.xi + u_c) / params.tau_c;
}

double mechanical_torque(double /*f_r_unused*/, double v_tilde,
                         const DfigParams& dfig, const WindParams& wind) {
  const double v = wind.v_pred + v_tilde;
  return 0.5 * dfig.torque_coeff() * v * v;
}

Vec6 dfig_drift(const Vec6& x, double V_dr, double V_qr,
                const DfigParams& dfig, const WindParams& wind) {
  const double K = dfig.K();
  if (K == 0.0) throw ConfigError("dfig_drift: K = X_s X_r - X_m^2 must be nonzero");
  const double Rs = dfig.R_s, Rr = dfig.R_r;
  const double Xs = dfig.X_s, Xr = dfig.X_r, Xm = dfig.X_m;
  const double s = dfig.f_b / K;
  const double ids = x(0), iqs = x(1), idr = x(2), iqr = x(3);
  const double fr = x(4), vt = x(5);
  Vec6 d;
  d(0) = s * (-Rs * Xr * ids + (K + Xm * Xm * fr) * iqs + Rr * Xm * idr +
              Xm * Xr * fr * iqr + Xr * dfig.V_t - Xm * V_dr);
  d(1) = s * (-(K + Xm * Xm * fr) * ids - Rs * Xr * iqs - Xm * Xr * fr * idr +
              Rr * Xm * iqr - Xm * V_qr);
  d(2) = s * (Rs * Xm * ids - Xs * Xm * fr * iqs - Rr * Xs * idr +
              (K - Xs * Xr * fr) * iqr - Xm * dfig.V_t + Xs * V_dr);
  d(3) = s * (Xs * Xm * fr * ids + Rs * Xm * iqs + (Xs * Xr * fr - K) * idr -
              Rr * Xs * iqr + Xs * V_qr);
  const double T_m = mechanical_torque(fr, vt, dfig, wind);
  d(4) = (T_m - Xm * (ids * iqr - iqs * idr)) / (2.0 * dfig.H);
  d(5) = -wind.mu_w * vt;
  return d;
}

Mat6 dfig_diffusion(const Vec6& x, const WindParams& wind) {
  Mat6 g = Mat6::Zero();
  g(5, 5) = wind.sigma_w * x(5);
  return g;
}

double dfig_power_output(const Vec6& x, const DfigParams& dfig) {
  return -dfig.X_u() * x(3) * x(4);
}

std::pair<double, double> wind_sde_coefficients(double v_tilde,
                                                const WindParams& wind) {
  return {-wind.mu_w * v_tilde, wind.sigma_w * v_tilde};
}

}  // namespace olfc
