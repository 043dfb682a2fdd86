#include "olfc/audit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "olfc/grid.hpp"
#include "olfc/storage.hpp"

namespace olfc {

namespace {
constexpr double kGradTol = 1e-6;
constexpr double kHessMargin = 1e-8;
constexpr double kLsTol = 1e-6;
}  // namespace

CheckResult check_assumption2(const SteadyState& steady,
                              const NetworkTopology& topo,
                              const Eigen::VectorXd& chi_d) {
  const double max_abs = steady.theta_bar.size() > 0
                             ? steady.theta_bar.cwiseAbs().maxCoeff()
                             : 0.0;
  if (!(max_abs < std::numbers::pi / 2))
    return {false, std::numbers::pi / 2 - max_abs};
  const Eigen::MatrixXd E = build_E_matrix(topo, chi_d, steady.theta_bar);
  Eigen::MatrixXd M = chi_d.asDiagonal() * E;
  const Eigen::MatrixXd absA = topo.incidence.cwiseAbs();
  const Eigen::VectorXd Y_bar = coupling_diagonal(steady.V_bar, topo);
  Eigen::VectorXd d(topo.n_edges());
  for (int k = 0; k < topo.n_edges(); ++k) {
    const double s = std::sin(steady.theta_bar(k));
    d(k) = Y_bar(k) * s * s / std::cos(steady.theta_bar(k));
  }
  const Eigen::VectorXd v_inv = steady.V_bar.cwiseInverse();
  M -= v_inv.asDiagonal() * (absA * d.asDiagonal() * absA.transpose()) *
       v_inv.asDiagonal();
  const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym,
                                                    Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  return {min_eig > 0.0, min_eig};
}

CheckResult check_assumption4(const WindParams& wind, double f_r_bar,
                              double gamma_bar) {
  const double margin = wind.mu_w + f_r_bar -
                        0.5 * wind.sigma_w * wind.sigma_w - wind.v_pred -
                        gamma_bar;
  return {margin > 0.0, margin};
}

bool AuditReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  if (trajectories_audited && (ls_violations > 0 || ls3_violations > 0))
    return false;
  return true;
}

nlohmann::json AuditReport::to_json() const {
  nlohmann::json j;
  j["pass"] = all_pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"margin", c.margin},
                           {"detail", c.detail}});
  j["trajectories_audited"] = trajectories_audited;
  j["samples_checked"] = samples_checked;
  j["samples_excluded_guard"] = samples_excluded_guard;
  j["ls_violations"] = ls_violations;
  j["worst_ls_margin"] = worst_ls_margin;
  j["ls3_violations"] = ls3_violations;
  j["worst_ls3_margin"] = worst_ls3_margin;
  j["decrement_pairs"] = decrement_pairs;
  j["decrement_positive"] = decrement_positive;
  j["worst_decrement"] = worst_decrement;
  return j;
}

AuditReport passivity_audit(const std::vector<Trajectory>& trajectories,
                            const std::vector<ClosedLoop>& segments,
                            const SystemModel& model) {
  AuditReport rep;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    const ClosedLoop& loop = segments[s];
    const std::string tag = "[segment " + std::to_string(s) + "]";
    const Eigen::VectorXd x_eq = equilibrium_state(loop);

    {
      const double gn = storage_gradient(loop, x_eq)
                            .lpNorm<Eigen::Infinity>();
      std::ostringstream det;
      det << "max |grad S| at the equilibrium = " << gn;
      rep.checks.push_back(
          {"gradient_at_equilibrium" + tag, gn < kGradTol, kGradTol - gn,
           det.str()});
    }
    {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
          storage_hessian(loop, x_eq), Eigen::EigenvaluesOnly);
      const double min_eig = es.eigenvalues().minCoeff();
      std::ostringstream det;
      det << "min eigenvalue of hess S = " << min_eig;
      rep.checks.push_back({"hessian_positive_definite" + tag,
                            min_eig > kHessMargin, min_eig, det.str()});
    }
    {
      const CheckResult a2 =
          check_assumption2(loop.steady, model.topo, model.grid.chi_d);
      std::ostringstream det;
      det << "steady-state coupling margin = " << a2.value;
      rep.checks.push_back(
          {"assumption2" + tag, a2.pass, a2.value, det.str()});
    }
    for (int j = 0; j < model.nw(); ++j) {
      const CheckResult a4 =
          check_assumption4(model.winds[j], loop.steady.x_bar[j](4),
                            model.dfigs[j].gamma_bar);
      std::ostringstream det;
      det << "mu_w + f_r_bar - sigma_w^2/2 - v_pred - gamma_bar = "
          << a4.value;
      rep.checks.push_back({"assumption4" + tag + "[wind " +
                                std::to_string(j) + "]",
                            a4.pass, a4.value, det.str()});
    }
  }

  if (trajectories.empty()) return rep;
  rep.trajectories_audited = true;
  Workspace ws(model);

  for (const Trajectory& tr : trajectories) {
    double prev_S = 0.0;
    int prev_seg = -1;
    for (Eigen::Index r = 0; r < tr.states.rows(); ++r) {
      const int seg = tr.segment_of_record[static_cast<std::size_t>(r)];
      const ClosedLoop& loop = segments[static_cast<std::size_t>(seg)];
      const Eigen::VectorXd x = tr.states.row(r).transpose();

      ++rep.samples_checked;
      const auto flags = controller_flags(loop, x);
      bool guarded = false;
      for (const auto& f : flags) guarded = guarded || !f.exact();
      if (guarded) {
        ++rep.samples_excluded_guard;
      } else {
        const double ls = ls_total(loop, x, ws);
        rep.worst_ls_margin = std::max(rep.worst_ls_margin, ls);
        if (ls > kLsTol) ++rep.ls_violations;
        for (int j = 0; j < model.nw(); ++j) {
          const Vec6 xw = x.segment<6>(model.off_dfig(j));
          const double om = x(model.off_omega() + model.nc() + j);
          const double de = x(model.off_delta() + model.nc() + j);
          const double ls3 = ls3_block(loop, j, xw, om, de);
          const double sup = supply3(loop, j, xw, om);
          rep.worst_ls3_margin =
              std::max(rep.worst_ls3_margin, ls3 - sup);
          if (ls3 > sup + kLsTol * (1.0 + std::abs(sup)))
            ++rep.ls3_violations;
        }
      }

      const double S = storage_total(loop, x);
      if (seg == prev_seg) {
        ++rep.decrement_pairs;
        const double dS = S - prev_S;
        rep.worst_decrement = std::max(rep.worst_decrement, dS);
        if (dS > 0.0) ++rep.decrement_positive;
      }
      prev_S = S;
      prev_seg = seg;
    }
  }
  return rep;
}

}  // namespace olfc
