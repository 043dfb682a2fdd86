#include "olfc/control.hpp"

#include <algorithm>
#include <cmath>

#include "olfc/units.hpp"

namespace olfc {

namespace {

// 1/d outside the guard strip, the linear taper d/eps^2 inside. Continuous
// at |d| = eps and zero at d = 0, so the correction vanishes smoothly on the
// singular surface instead of blowing up.
double guarded_inverse(double d, double eps, bool* strip) {
  if (std::abs(d) >= eps) {
    *strip = false;
    return 1.0 / d;
  }
  *strip = true;
  return d / (eps * eps);
}

double clamp_correction(double c, double cap, bool* sat) {
  if (std::abs(c) <= cap) {
    *sat = false;
    return c;
  }
  *sat = true;
  return std::copysign(cap, c);
}

}  // namespace

std::pair<double, double> dfig_controller(const Vec6& x, double omega,
                                          double delta,
                                          const DfigControllerContext& ctx,
                                          const DfigParams& dfig,
                                          const WindParams& wind,
                                          DfigControlFlags* flags) {
  const double Xr = dfig.X_r, Xs = dfig.X_s, Xm = dfig.X_m;
  const double cw = dfig.torque_coeff();
  const Vec6& xb = ctx.x_bar;
  const double dds = x(0) - xb(0), dqs = x(1) - xb(1);
  const double ddr = x(2) - xb(2), dqr = x(3) - xb(3);
  const double df = x(4) - xb(4);

  const double Xcross = dfig.R_r * Xm / Xr + dfig.R_s * Xm / Xs;
  const double dW = dds * dqr - dqs * ddr;
  const double N_dr =
      (1.0 + cw * wind.v_pred) * df * df + Xcross * (dds * ddr + dqs * dqr) +
      2.0 * xb(4) * Xm * dW +
      df * ((Xm * Xm / Xr) * (dds * xb(1) - dqs * xb(0)) -
            Xm * (dds * xb(3) - dqs * xb(2) - ddr * xb(1) + dqr * xb(0)) -
            Xr * (ddr * xb(3) - dqr * xb(2)));

  const double P_w = dfig_power_output(x, dfig);
  const double P_w_bar = dfig_power_output(xb, dfig);
  const double N_qr = (P_w - P_w_bar) * omega + (P_w - ctx.P_w_opt) * delta +
                      (delta - P_w) * (delta - P_w) -
                      (P_w - ctx.P_w_opt) * ctx.P_w_opt;

  const double d_d = Xr * ddr - Xm * dds;
  const double d_q = Xr * dqr - Xm * dqs;

  DfigControlFlags f;
  f.d_d = d_d;
  f.d_q = d_q;
  double c_d =
      -Xr * N_dr * guarded_inverse(d_d, ctx.epsilon_guard, &f.strip_d);
  double c_q =
      -Xr * N_qr * guarded_inverse(d_q, ctx.epsilon_guard, &f.strip_q);
  c_d = clamp_correction(c_d, ctx.v_cap, &f.sat_d);
  c_q = clamp_correction(c_q, ctx.v_cap, &f.sat_q);
  if (flags) *flags = f;
  return {ctx.V_dr_bar + c_d, ctx.V_qr_bar + c_q};
}

}  // namespace olfc
