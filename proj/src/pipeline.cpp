#include "qomsync/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace qomsync {

PointResult run_pipeline(const SystemConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();

  const double t_transient = cfg.numerics.t_transient;
  const double t_end = t_transient + cfg.numerics.t_average;
  const double eps = 1e-9;

  PointResult result;
  result.min_physicality_eig = std::numeric_limits<double>::infinity();

  PhaseTracker tracker(cfg.numerics.phase_epsilon);
  ClassicalTrajectory& traj = result.trajectory;
  traj.dt = cfg.numerics.dt;
  traj.stride = cfg.numerics.sample_stride;

  const bool ok = co_integrate(cfg, t_end, [&](const CoIntegrationSample& cs) {
    traj.samples.push_back(cs.classical);
    const std::array<double, 4>& phases = tracker.update(cs.classical);
    result.series.samples.push_back(
        evaluate_measures(cs.cov, phases, cs.t, cfg.measures.discord_measurement));
    if (cs.t >= t_transient - eps) {
      const double ev = physicality_min_eig(cs.cov);
      if (ev < result.min_physicality_eig) result.min_physicality_eig = ev;
    }
  });

  if (!ok) {
    result.diverged = true;
    traj.diverged = true;
    traj.t_diverged = traj.samples.empty() ? 0.0 : traj.t_at(traj.n() - 1);
    result.t_diverged = traj.t_diverged;
    // Attribute the blow-up: if the mean field alone diverges the classical
    // equations are the culprit, otherwise the covariance overflowed.
    result.divergence_stage =
        integrate_classical(cfg, t_end).diverged ? "mean-field" : "covariance";
    result.averages.S_p = result.averages.D_G = result.averages.E_N =
        std::numeric_limits<double>::quiet_NaN();
    result.min_physicality_eig = std::numeric_limits<double>::quiet_NaN();
  } else {
    result.averages = time_average(result.series, t_transient, t_end);
    if (traj.n() >= 64) {
      result.cycle = detect_limit_cycle(traj, cfg.numerics.convergence_tol);
      result.converged =
          result.cycle.found && result.cycle.transient_end <= t_transient + eps;
    }
    result.physical = result.min_physicality_eig >= -1e-8;
  }

  result.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

}  // namespace qomsync
