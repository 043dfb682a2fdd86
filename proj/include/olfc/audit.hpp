#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "olfc/sde.hpp"
#include "olfc/steady_state.hpp"
#include "olfc/system.hpp"

namespace olfc {

struct CheckResult {
  bool pass = false;
  double value = 0.0;  // margin or min eigenvalue
};

// theta_bar in (-pi/2, pi/2)^m and positive definiteness of
// chi_d E(th) - [V]^{-1} |A| Y [sin^2/cos] |A|' [V]^{-1}
// (min eigenvalue of the symmetric part).
CheckResult check_assumption2(const SteadyState& steady,
                              const NetworkTopology& topo,
                              const Eigen::VectorXd& chi_d);

// margin = mu_w + f_r_bar - sigma_w^2/2 - v_pred - gamma_bar; pass iff > 0.
CheckResult check_assumption4(const WindParams& wind, double f_r_bar,
                              double gamma_bar);

struct AuditReport {
  struct Entry {
    std::string name;
    bool pass = false;
    double margin = 0.0;
    std::string detail;
  };
  std::vector<Entry> checks;

  // Trajectory statistics.
  long samples_checked = 0;
  long samples_excluded_guard = 0;  // guard strip or clamp active
  long ls_violations = 0;
  double worst_ls_margin = 0.0;  // most positive LS over checked samples
  long ls3_violations = 0;
  double worst_ls3_margin = 0.0;  // most positive LS3 - supply
  long decrement_pairs = 0;
  long decrement_positive = 0;
  double worst_decrement = 0.0;  // most positive recorded delta S
  bool trajectories_audited = false;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

// Equilibrium certificates + along-trajectory passivity checks. Samples where
// the controller guard is active are excluded from the exact-identity checks
// and counted separately. Tolerances: LS <= 1e-6; LS3 <= supply +
// 1e-6 (1 + |supply|).
AuditReport passivity_audit(const std::vector<Trajectory>& trajectories,
                            const std::vector<ClosedLoop>& segments,
                            const SystemModel& model);

}  // namespace olfc
