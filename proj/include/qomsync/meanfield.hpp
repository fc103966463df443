#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qomsync/model.hpp"

namespace qomsync {

// Classical mean-field state, ordered (alpha_L, beta_L, alpha_R, beta_R):
// cavity and mechanical coherent amplitudes of the left then right oscillator.
using CVec4 = Eigen::Vector4cd;

// Nonlinear mean-field equations (noise terms dropped, operators -> c-numbers):
//   d alpha_j/dt = (-kappa_j + i(delta0_j + 2 g_j Re beta_j)) alpha_j + coupling + E
//   d beta_j/dt  = (-gamma_j - i omega_mj) beta_j + i g_j |alpha_j|^2
// Bidirectional coupling adds i lambda alpha_other to both cavities and drives
// both; unidirectional feeds -2 sqrt(eta kappa_L kappa_R) alpha_L into the
// right cavity, which is driven only if topology.drive_right is set.
CVec4 classical_rhs(const CVec4& s, const SystemConfig& cfg);

// One classical RK4 step of size h.
CVec4 classical_rk4_step(const CVec4& s, double h, const SystemConfig& cfg);

struct ClassicalTrajectory {
  double dt = 0.0;      // integration step used
  int stride = 1;       // samples are every `stride` steps
  bool diverged = false;
  double t_diverged = 0.0;              // first time the guard tripped (if diverged)
  std::vector<CVec4> samples;           // samples[k] = state at t = k*stride*dt
  double sample_dt() const { return dt * stride; }
  double t_at(int k) const { return k * sample_dt(); }
  int n() const { return static_cast<int>(samples.size()); }
};

// Fixed-step RK4 from the vacuum state (all amplitudes zero) to t_end,
// sampling every numerics.sample_stride steps. Blow-ups (non-finite values or
// amplitudes beyond 1e9) stop the integration and set the diverged flag.
ClassicalTrajectory integrate_classical(const SystemConfig& cfg, double t_end);

// Instantaneous phases arg(component), unwrapped to be continuous in time.
// While an amplitude is below phase_epsilon the previous phase is held (the
// phase of a near-zero amplitude is numerical noise). Order matches CVec4.
struct PhaseTracker {
  double epsilon;
  std::array<double, 4> phase{};  // starts at zero (vacuum has no phase)
  explicit PhaseTracker(double eps) : epsilon(eps) {}
  const std::array<double, 4>& update(const CVec4& s);
};

std::vector<std::array<double, 4>> compute_phases(const ClassicalTrajectory& traj,
                                                  double epsilon);

struct LimitCycleInfo {
  bool found = false;        // periodic steady state reached within tolerance
  bool fixed_point = false;  // degenerate cycle: stationary solution
  double period = 0.0;
  double transient_end = 0.0;  // earliest time after which the orbit repeats within tol
  double residual = 0.0;       // relative stroboscopic mismatch at the detected period
};

// Detects the periodic steady state of a trajectory: seeds the period from the
// spectrum of beta_L (Hann window + parabolic peak interpolation), then refines
// it by minimizing the stroboscopic mismatch |s(t+P) - s(t)| over the tail,
// with cubic (Catmull-Rom) interpolation between samples since the true period
// is never a multiple of the sampling step. Quasiperiodic or still-transient
// trajectories come back found=false.
LimitCycleInfo detect_limit_cycle(const ClassicalTrajectory& traj, double convergence_tol);

}  // namespace qomsync
