#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "qomsync/fluctuations.hpp"
#include "qomsync/model.hpp"

namespace qomsync {

// Rotates the covariance into the frame co-rotating with the classical
// amplitudes: mode m with phase phi_m maps (dc, dc^dag) -> (dc e^{-i phi},
// dc^dag e^{+i phi}). phases = (optical L, mech L, optical R, mech R), the
// same order compute_phases produces.
CMat8 rotate_covariance(const CMat8& C, const std::array<double, 4>& phases);

// Momentum-quadrature statistics of the two mechanical modes in the rotated
// frame. var_p_minus is Var((p_L - p_R)/sqrt(2)); the synchronization measure
// caps it from below so a perfectly synchronized pair stays finite.
struct PhaseSyncResult {
  double var_p_left = 0.0;
  double var_p_right = 0.0;
  double cov_p = 0.0;        // <dp_L dp_R>, symmetrized
  double var_p_minus = 0.0;
  double S_p = 0.0;          // 1 / (2 var_p_minus)
};
PhaseSyncResult phase_sync(const CMat8& rotated);

// 4x4 quadrature covariance (x_L, p_L, x_R, p_R) of the mechanical pair,
// vacuum normalized to 1, built from the rotated 8x8 covariance.
Eigen::Matrix4d mechanical_quadrature_cm(const CMat8& rotated);

// Gaussian quantum discord of a two-mode Gaussian state with covariance
// sigma, optimized over Gaussian measurements on the chosen mode. Natural
// logarithms. Returns 0 for product states and f(cosh 2r) for a two-mode
// squeezed vacuum measured on either side.
double gaussian_discord(const Eigen::Matrix4d& sigma, MeasureSide measured);

// Logarithmic negativity of the two-mode Gaussian state: max(0, -ln nu_min)
// with nu_min the smaller symplectic eigenvalue of the partial transpose.
double log_negativity(const Eigen::Matrix4d& sigma);

// Entropy-like kernel f(x) = (x+1)/2 ln((x+1)/2) - (x-1)/2 ln((x-1)/2) used by
// both discord and the fixture oracles; flat zero at and below the vacuum
// value x = 1.
double entropy_f(double x);

// One evaluated sample and the series the pipeline accumulates. D_G is the
// discord with the measurement on the configured side; D_G_other measures the
// opposite side (the two differ on asymmetric states, so both are kept).
struct MeasureSample {
  double t = 0.0;
  double S_p = 0.0;
  double D_G = 0.0;
  double D_G_other = 0.0;
  double E_N = 0.0;
  double var_p_minus = 0.0;
};
struct MeasureSeries {
  std::vector<MeasureSample> samples;
};

struct Averages {
  double S_p = 0.0;
  double D_G = 0.0;
  double D_G_other = 0.0;
  double E_N = 0.0;
  int n_samples = 0;
};

// Trapezoidal mean over the samples with t0 <= t <= t1 (uniform grid, half
// weight at the window ends). Throws if the series does not cover the window.
Averages time_average(const MeasureSeries& series, double t0, double t1);

// Full evaluation at one instant: rotate, then all three measures.
MeasureSample evaluate_measures(const CMat8& C,
                                const std::array<double, 4>& phases, double t,
                                MeasureSide discord_side);

}  // namespace qomsync
