#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "olfc/system.hpp"

namespace olfc {

struct SimConfig {
  double dt = 1e-3;
  double horizon = 0.0;
  std::uint64_t master_seed = 0;
  int n_paths = 1;
  int record_stride = 1;
};

// Piecewise-constant load schedule. v_tilde_set, when non-empty, assigns the
// wind-speed deviation of each wind area at the event time.
struct ScheduleEvent {
  double time = 0.0;
  Eigen::VectorXd P_load;
  Eigen::VectorXd v_tilde_set;
};

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;  // one row per record
  std::vector<int> segment_of_record;
  std::uint64_t path_seed = 0;
  GuardCounters guards;
};

// splitmix64 mix of (master_seed, path_index): reproducible, path-independent
// substreams.
std::uint64_t derive_path_seed(std::uint64_t master_seed, int path_index);

// Normal draws via Box-Muller on mt19937_64 (fully specified, so streams are
// reproducible across standard libraries).
class NormalRng {
 public:
  explicit NormalRng(std::uint64_t seed) : eng_(seed) {}
  double next();

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One explicit Euler-Maruyama step; noise has one standard-normal draw per
// wind area, drift and diffusion both evaluated on the pre-step state.
void em_step(const ClosedLoop& loop, double dt, const double* noise,
             Eigen::VectorXd& x, Workspace& ws, GuardCounters* guards);

// Integrates the schedule from the equilibrium of the first segment.
// Event times are hit exactly (the straddling step is shortened). Throws
// IntegrationError if the state leaves the finite range.
Trajectory simulate_path(const SystemModel& model,
                         const std::vector<ClosedLoop>& segments,
                         const std::vector<ScheduleEvent>& schedule,
                         const Eigen::VectorXd& x0, const SimConfig& config,
                         int path_index);

struct EnsembleResult {
  std::vector<double> times;
  std::vector<int> segment_of_record;
  std::vector<std::string> columns;  // output-row schema
  Eigen::MatrixXd mean;              // records x columns
  Eigen::MatrixXd m2;                // Welford sum of squared deviations
  int n_paths = 0;
  std::vector<std::uint64_t> seeds;
  GuardCounters guards;
  std::vector<Trajectory> paths;  // filled when keep_paths

  Eigen::MatrixXd variance() const;
};

// Output row used by CSV files and ensemble statistics:
// time, omega_1..n, P_1..n, V_1..n, delta_1..n, v_tilde per wind area, S.
std::vector<std::string> output_columns(const SystemModel& model);
Eigen::VectorXd output_row(const ClosedLoop& loop, double t,
                           const Eigen::VectorXd& x);

// Sequential, order-deterministic ensemble; statistics are accumulated in
// path order so results are bit-stable across reruns.
EnsembleResult run_ensemble(const SystemModel& model,
                            const std::vector<ClosedLoop>& segments,
                            const std::vector<ScheduleEvent>& schedule,
                            const SimConfig& config, bool keep_paths = false);

// Wind-only helpers for integrator-fidelity checks. wind_em_path returns
// (v_em(T), beta(T)) under one Brownian path; wind_exact_path evaluates the
// closed-form solution at the same beta(T).
std::pair<double, double> wind_em_path(double v0, const WindParams& wind,
                                       double dt, double T, NormalRng& rng);
double wind_exact_path(double v0, const WindParams& wind, double T,
                       double beta_T);

}  // namespace olfc
