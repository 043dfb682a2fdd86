#pragma once

#include <utility>

#include "olfc/params.hpp"

namespace olfc {

// Equilibrium data the rotor-voltage law is anchored to.
struct DfigControllerContext {
  Vec6 x_bar = Vec6::Zero();  // steady-state DFIG state (v_tilde = 0)
  double P_w_opt = 0.0;       // dispatch target of the wind area
  double V_dr_bar = 0.0;      // equilibrium rotor voltages
  double V_qr_bar = 0.0;
  // Gain guard: the exact law divides by d(x) = X_r di_dr - X_m di_ds
  // (and its q-axis twin), which vanishes at the equilibrium. Inside
  // |d| < epsilon_guard the inverse is replaced by the linear taper d/eps^2
  // (continuous, zero at d = 0); the resulting correction is then clamped
  // to |c| <= v_cap.
  double epsilon_guard = 1e-4;
  double v_cap = 0.5;
};

struct DfigControlFlags {
  bool strip_d = false, strip_q = false;  // taper active
  bool sat_d = false, sat_q = false;      // clamp active
  double d_d = 0.0, d_q = 0.0;
  // True when the returned voltages satisfy the exact dissipation identity.
  bool exact() const { return !(strip_d || strip_q || sat_d || sat_q); }
};

// Passivating rotor-voltage law (V_dr, V_qr). omega and delta are the wind
// area's frequency deviation and consensus state.
std::pair<double, double> dfig_controller(const Vec6& x, double omega,
                                          double delta,
                                          const DfigControllerContext& ctx,
                                          const DfigParams& dfig,
                                          const WindParams& wind,
                                          DfigControlFlags* flags = nullptr);

}  // namespace olfc
