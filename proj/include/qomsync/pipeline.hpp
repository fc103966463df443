#pragma once

#include <string>

#include "qomsync/fluctuations.hpp"
#include "qomsync/meanfield.hpp"
#include "qomsync/measures.hpp"
#include "qomsync/model.hpp"

namespace qomsync {

// Everything one operating point produces: the measure time series on the
// sample grid, its average over the window [t_transient, t_transient +
// t_average], the detected classical steady state, and the quality flags the
// sweep layer reports.
struct PointResult {
  MeasureSeries series;
  ClassicalTrajectory trajectory;  // mean-field samples on the same grid
  Averages averages;
  LimitCycleInfo cycle;
  bool diverged = false;
  bool converged = false;  // periodic (or stationary) before the averaging window
  bool physical = false;   // covariance stayed a valid quantum state in the window
  double min_physicality_eig = 0.0;
  double runtime_seconds = 0.0;
  // Divergence diagnostics: which stage blew up ("mean-field" when the
  // classical equations alone diverge, "covariance" otherwise) and the last
  // sampled time before the guard tripped.
  std::string divergence_stage;
  double t_diverged = 0.0;
};

// Integrates mean field + covariance from vacuum to t_transient + t_average,
// evaluating all measures in the co-rotating frame at every sample.
// Physicality (smallest eigenvalue of sigma + i Omega, tolerance 1e-8) is
// checked on every sample inside the averaging window. A divergence leaves
// NaN averages and both flags false.
PointResult run_pipeline(const SystemConfig& cfg);

}  // namespace qomsync
