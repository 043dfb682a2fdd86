#include "olfc/sde.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "olfc/errors.hpp"
#include "olfc/storage.hpp"

namespace olfc {

std::uint64_t derive_path_seed(std::uint64_t master_seed, int path_index) {
  // splitmix64 of master_seed advanced by path_index + 1.
  std::uint64_t z = master_seed +
                    0x9E3779B97F4A7C15ULL *
                        (static_cast<std::uint64_t>(path_index) + 1ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double NormalRng::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  constexpr double kInv = 5.421010862427522e-20;  // 2^-64
  const double u1 = (static_cast<double>(eng_()) + 1.0) * kInv;  // (0, 1]
  const double u2 = static_cast<double>(eng_()) * kInv;          // [0, 1)
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

void em_step(const ClosedLoop& loop, double dt, const double* noise,
             Eigen::VectorXd& x, Workspace& ws, GuardCounters* guards) {
  const SystemModel& mod = *loop.model;
  closed_loop_drift(loop, x, ws.drift, ws, guards);
  const double sdt = std::sqrt(dt);
  // Diffusion on the pre-step state, captured before the drift update.
  for (int j = 0; j < mod.nw(); ++j) {
    const int idx = mod.off_dfig(j) + 5;
    ws.drift(idx) += mod.winds[j].sigma_w * x(idx) * noise[j] * sdt / dt;
  }
  x += dt * ws.drift;
}

Trajectory simulate_path(const SystemModel& model,
                         const std::vector<ClosedLoop>& segments,
                         const std::vector<ScheduleEvent>& schedule,
                         const Eigen::VectorXd& x0, const SimConfig& config,
                         int path_index) {
  if (segments.empty() || segments.size() != schedule.size())
    throw ConfigError("simulate_path: schedule/segment mismatch");
  if (std::abs(schedule.front().time) > 1e-12)
    throw ConfigError("simulate_path: first schedule event must be at t = 0");
  for (std::size_t s = 1; s < schedule.size(); ++s)
    if (!(schedule[s].time > schedule[s - 1].time))
      throw ConfigError("simulate_path: schedule times must increase");
  if (!(config.horizon > schedule.back().time))
    throw ConfigError("simulate_path: horizon must exceed the last event");
  if (!(config.dt > 0.0)) throw ConfigError("simulate_path: dt must be > 0");
  if (config.record_stride < 1)
    throw ConfigError("simulate_path: record_stride must be >= 1");

  Trajectory traj;
  traj.path_seed = derive_path_seed(config.master_seed, path_index);
  NormalRng rng(traj.path_seed);
  Workspace ws(model);
  Eigen::VectorXd x = x0;
  std::vector<double> noise(std::max(1, model.nw()));
  std::vector<Eigen::VectorXd> recs;
  long k_global = 0;

  auto record = [&](double t, int seg) {
    traj.times.push_back(t);
    traj.segment_of_record.push_back(seg);
    recs.push_back(x);
  };
  auto check_state = [&](double t) {
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > 1e6) {
      std::ostringstream msg;
      msg << "simulate_path: state left the finite range at t = " << t;
      throw IntegrationError(msg.str(), k_global);
    }
  };

  for (std::size_t s = 0; s < segments.size(); ++s) {
    const double t0 = schedule[s].time;
    const double t1 =
        s + 1 < segments.size() ? schedule[s + 1].time : config.horizon;
    if (schedule[s].v_tilde_set.size() == model.nw() && model.nw() > 0)
      for (int j = 0; j < model.nw(); ++j)
        x(model.off_dfig(j) + 5) = schedule[s].v_tilde_set(j);
    if (s == 0) record(t0, 0);
    const double tol = 1e-12 * std::max(1.0, std::abs(t1));
    long i = 0;
    double t = t0;
    while (t < t1 - tol) {
      const double h = std::min(config.dt, t1 - t);
      for (int j = 0; j < model.nw(); ++j) noise[j] = rng.next();
      em_step(segments[s], h, noise.data(), x, ws, &traj.guards);
      ++i;
      ++k_global;
      t = t0 + static_cast<double>(i) * config.dt;
      if (t > t1) t = t1;
      check_state(t);
      if (k_global % config.record_stride == 0)
        record(t, static_cast<int>(s));
    }
  }
  if (traj.times.empty() || traj.times.back() < config.horizon - 1e-9)
    record(config.horizon, static_cast<int>(segments.size()) - 1);

  traj.states.resize(static_cast<Eigen::Index>(recs.size()), x.size());
  for (std::size_t r = 0; r < recs.size(); ++r)
    traj.states.row(static_cast<Eigen::Index>(r)) = recs[r].transpose();
  return traj;
}

std::vector<std::string> output_columns(const SystemModel& model) {
  std::vector<std::string> cols;
  cols.push_back("time");
  for (int i = 0; i < model.n(); ++i)
    cols.push_back("omega_" + std::to_string(i + 1));
  for (int i = 0; i < model.n(); ++i)
    cols.push_back("P_" + std::to_string(i + 1));
  for (int i = 0; i < model.n(); ++i)
    cols.push_back("V_" + std::to_string(i + 1));
  for (int i = 0; i < model.n(); ++i)
    cols.push_back("delta_" + std::to_string(i + 1));
  for (int j = 0; j < model.nw(); ++j)
    cols.push_back("v_tilde_" + std::to_string(j + 1));
  cols.push_back("S");
  return cols;
}

Eigen::VectorXd output_row(const ClosedLoop& loop, double t,
                           const Eigen::VectorXd& x) {
  const SystemModel& mod = *loop.model;
  const int n = mod.n();
  Eigen::VectorXd y(1 + 4 * n + mod.nw() + 1);
  int c = 0;
  y(c++) = t;
  y.segment(c, n) = x.segment(mod.off_omega(), n);
  c += n;
  y.segment(c, n) = generated_power(mod, x);
  c += n;
  y.segment(c, n) = x.segment(mod.off_V(), n);
  c += n;
  y.segment(c, n) = x.segment(mod.off_delta(), n);
  c += n;
  for (int j = 0; j < mod.nw(); ++j) y(c++) = x(mod.off_dfig(j) + 5);
  y(c) = storage_total(loop, x);
  return y;
}

Eigen::MatrixXd EnsembleResult::variance() const {
  if (n_paths < 2) return Eigen::MatrixXd::Zero(m2.rows(), m2.cols());
  return m2 / static_cast<double>(n_paths - 1);
}

EnsembleResult run_ensemble(const SystemModel& model,
                            const std::vector<ClosedLoop>& segments,
                            const std::vector<ScheduleEvent>& schedule,
                            const SimConfig& config, bool keep_paths) {
  if (config.n_paths < 1)
    throw ConfigError("run_ensemble: n_paths must be >= 1");
  EnsembleResult res;
  res.columns = output_columns(model);
  const Eigen::VectorXd x0 = equilibrium_state(segments.front());
  const int ncol = static_cast<int>(res.columns.size());

  for (int p = 0; p < config.n_paths; ++p) {
    Trajectory tr = simulate_path(model, segments, schedule, x0, config, p);
    const int nrec = static_cast<int>(tr.times.size());
    if (p == 0) {
      res.times = tr.times;
      res.segment_of_record = tr.segment_of_record;
      res.mean = Eigen::MatrixXd::Zero(nrec, ncol);
      res.m2 = Eigen::MatrixXd::Zero(nrec, ncol);
    } else if (nrec != static_cast<int>(res.times.size())) {
      throw SolverError("run_ensemble: record grid differs across paths");
    }
    for (int r = 0; r < nrec; ++r) {
      const Eigen::VectorXd y =
          output_row(segments[res.segment_of_record[r]], res.times[r],
                     tr.states.row(r).transpose());
      const Eigen::VectorXd d1 = y - res.mean.row(r).transpose();
      res.mean.row(r) += d1.transpose() / static_cast<double>(p + 1);
      const Eigen::VectorXd d2 = y - res.mean.row(r).transpose();
      res.m2.row(r) += d1.cwiseProduct(d2).transpose();
    }
    res.seeds.push_back(tr.path_seed);
    res.guards.strip += tr.guards.strip;
    res.guards.sat += tr.guards.sat;
    if (keep_paths) res.paths.push_back(std::move(tr));
  }
  res.n_paths = config.n_paths;
  return res;
}

std::pair<double, double> wind_em_path(double v0, const WindParams& wind,
                                       double dt, double T, NormalRng& rng) {
  const long n = std::llround(T / dt);
  const double h = T / static_cast<double>(n);
  const double sh = std::sqrt(h);
  double v = v0, beta = 0.0;
  for (long k = 0; k < n; ++k) {
    const double xi = rng.next();
    v += -wind.mu_w * v * h + wind.sigma_w * v * sh * xi;
    beta += sh * xi;
  }
  return {v, beta};
}

double wind_exact_path(double v0, const WindParams& wind, double T,
                       double beta_T) {
  return v0 * std::exp((-wind.mu_w - 0.5 * wind.sigma_w * wind.sigma_w) * T +
                       wind.sigma_w * beta_T);
}

}  // namespace olfc
