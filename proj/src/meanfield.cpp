#include "qomsync/meanfield.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

namespace qomsync {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kDivergenceGuard = 1e9;

inline bool state_ok(const CVec4& s) {
  for (int i = 0; i < 4; ++i) {
    const auto z = s[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    if (std::abs(z.real()) > kDivergenceGuard || std::abs(z.imag()) > kDivergenceGuard)
      return false;
  }
  return true;
}
}  // namespace

CVec4 classical_rhs(const CVec4& s, const SystemConfig& cfg) {
  const std::complex<double> I(0.0, 1.0);
  const auto& L = cfg.left;
  const auto& R = cfg.right;
  const std::complex<double> aL = s[0], bL = s[1], aR = s[2], bR = s[3];

  // Radiation pressure shifts each cavity detuning by 2 g Re(beta).
  const double det_L = L.delta0 + 2.0 * L.g * bL.real();
  const double det_R = R.delta0 + 2.0 * R.g * bR.real();

  std::complex<double> daL = (-L.kappa + I * det_L) * aL;
  std::complex<double> daR = (-R.kappa + I * det_R) * aR;
  const std::complex<double> dbL = (-L.gamma - I * L.omega_m) * bL + I * L.g * std::norm(aL);
  const std::complex<double> dbR = (-R.gamma - I * R.omega_m) * bR + I * R.g * std::norm(aR);

  if (cfg.topology.kind == TopologyKind::Bidirectional) {
    daL += I * cfg.topology.lambda * aR + cfg.drive.amplitude;
    daR += I * cfg.topology.lambda * aL + cfg.drive.amplitude;
  } else {
    daL += cfg.drive.amplitude;
    daR += -2.0 * std::sqrt(cfg.topology.eta * L.kappa * R.kappa) * aL;
    if (cfg.topology.drive_right) daR += cfg.drive.amplitude;
  }

  CVec4 out;
  out << daL, dbL, daR, dbR;
  return out;
}

CVec4 classical_rk4_step(const CVec4& s, double h, const SystemConfig& cfg) {
  const CVec4 k1 = classical_rhs(s, cfg);
  const CVec4 k2 = classical_rhs(s + (0.5 * h) * k1, cfg);
  const CVec4 k3 = classical_rhs(s + (0.5 * h) * k2, cfg);
  const CVec4 k4 = classical_rhs(s + h * k3, cfg);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

ClassicalTrajectory integrate_classical(const SystemConfig& cfg, double t_end) {
  const double dt = cfg.numerics.dt;
  const int stride = cfg.numerics.sample_stride;
  const long nsteps = std::lround(t_end / dt);

  ClassicalTrajectory traj;
  traj.dt = dt;
  traj.stride = stride;
  traj.samples.reserve(static_cast<size_t>(nsteps / stride) + 2);

  CVec4 s = CVec4::Zero();
  traj.samples.push_back(s);
  for (long i = 0; i < nsteps; ++i) {
    s = classical_rk4_step(s, dt, cfg);
    if (!state_ok(s)) {
      traj.diverged = true;
      traj.t_diverged = (i + 1) * dt;
      break;
    }
    if ((i + 1) % stride == 0) traj.samples.push_back(s);
  }
  return traj;
}

const std::array<double, 4>& PhaseTracker::update(const CVec4& s) {
  for (int i = 0; i < 4; ++i) {
    if (std::abs(s[i]) < epsilon) continue;  // hold the previous phase
    const double raw = std::arg(s[i]);
    phase[i] += std::remainder(raw - phase[i], 2.0 * kPi);
  }
  return phase;
}

std::vector<std::array<double, 4>> compute_phases(const ClassicalTrajectory& traj,
                                                  double epsilon) {
  std::vector<std::array<double, 4>> out;
  out.reserve(traj.samples.size());
  PhaseTracker tracker(epsilon);
  for (const auto& s : traj.samples) out.push_back(tracker.update(s));
  return out;
}

namespace {

// Catmull-Rom interpolation of the sampled state at continuous sample index x.
CVec4 interp_state(const std::vector<CVec4>& s, double x) {
  const int n = static_cast<int>(s.size());
  int i = static_cast<int>(std::floor(x));
  if (i < 1) i = 1;
  if (i > n - 3) i = n - 3;
  const double u = x - i;
  const CVec4& p0 = s[i - 1];
  const CVec4& p1 = s[i];
  const CVec4& p2 = s[i + 1];
  const CVec4& p3 = s[i + 2];
  // Standard Catmull-Rom weights.
  const double w0 = ((-u + 2.0) * u - 1.0) * u * 0.5;
  const double w1 = (((3.0 * u - 5.0) * u) * u + 2.0) * 0.5;
  const double w2 = ((-3.0 * u + 4.0) * u + 1.0) * u * 0.5;
  const double w3 = ((u - 1.0) * u * u) * 0.5;
  return w0 * p0 + w1 * p1 + w2 * p2 + w3 * p3;
}

// Mean squared stroboscopic mismatch over sample indices [k0, k1) at period
// `periods` (in sample-index units).
double strobe_mismatch(const std::vector<CVec4>& s, int k0, int k1, double period_idx) {
  double acc = 0.0;
  int cnt = 0;
  for (int k = k0; k < k1; ++k) {
    const double back = k - period_idx;
    if (back < 1.0) continue;
    const CVec4 d = s[k] - interp_state(s, back);
    acc += d.squaredNorm();
    ++cnt;
  }
  return cnt > 0 ? acc / cnt : std::numeric_limits<double>::infinity();
}

}  // namespace

LimitCycleInfo detect_limit_cycle(const ClassicalTrajectory& traj, double convergence_tol) {
  LimitCycleInfo info;
  const auto& s = traj.samples;
  const int n = traj.n();
  if (n < 64)
    throw std::invalid_argument(
        "detect_limit_cycle: trajectory too short (" + std::to_string(n) +
        " samples; need at least 64)");
  if (traj.diverged) return info;
  const double hs = traj.sample_dt();

  // Orbit scale from the tail: RMS distance to the tail mean. A scale near
  // zero (relative to the state magnitude) means the orbit collapsed to a
  // stationary point rather than a cycle.
  const int tail0 = n / 2;
  CVec4 mean = CVec4::Zero();
  for (int k = tail0; k < n; ++k) mean += s[k];
  mean /= double(n - tail0);
  double var = 0.0;
  for (int k = tail0; k < n; ++k) var += (s[k] - mean).squaredNorm();
  const double scale = std::sqrt(var / (n - tail0));
  const double state_mag = std::max(1.0, std::sqrt(mean.squaredNorm()));

  if (scale < convergence_tol * state_mag) {
    info.fixed_point = true;
    info.found = true;
    info.period = 0.0;
    info.residual = scale / state_mag;
    // Earliest time after which the state stays within tolerance of the endpoint.
    int k0 = n - 1;
    while (k0 > 0 && (s[k0 - 1] - s[n - 1]).norm() <= convergence_tol * state_mag) --k0;
    info.transient_end = traj.t_at(k0);
    return info;
  }

  // Period seed: spectral peak of beta_L over the tail (Hann window, parabolic
  // refinement of the peak bin). beta_L carries the mechanical oscillation
  // that defines the cycle.
  const int m = n - tail0;
  std::vector<std::complex<double>> win(m);
  std::complex<double> bmean(0, 0);
  for (int k = 0; k < m; ++k) bmean += s[tail0 + k][1];
  bmean /= double(m);
  for (int k = 0; k < m; ++k) {
    const double w = 0.5 * (1.0 - std::cos(2.0 * kPi * k / (m - 1)));
    win[k] = w * (s[tail0 + k][1] - bmean);
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, win);
  int peak = 1;
  double peak_mag = 0.0;
  for (int k = 1; k < m; ++k) {  // skip DC; beta_L rotates as exp(-i omega t)
    const double mag = std::abs(spec[k]);
    if (mag > peak_mag) {
      peak_mag = mag;
      peak = k;
    }
  }
  if (peak_mag == 0.0) return info;
  // Parabolic interpolation on log magnitude around the peak bin.
  const double y1 = std::abs(spec[(peak - 1 + m) % m]);
  const double y2 = peak_mag;
  const double y3 = std::abs(spec[(peak + 1) % m]);
  double shift = 0.0;
  const double denom = (y1 - 2.0 * y2 + y3);
  if (std::abs(denom) > 0.0) shift = 0.5 * (y1 - y3) / denom;
  if (!(shift > -1.0 && shift < 1.0)) shift = 0.0;
  double freq_idx = peak + shift;         // cycles per m samples
  if (freq_idx > m / 2.0) freq_idx -= m;  // negative-frequency branch
  const double period_idx0 = std::abs(double(m) / freq_idx);
  if (!(period_idx0 > 2.0) || period_idx0 > n / 4.0) return info;

  // Refine by golden-section minimization of the stroboscopic mismatch over
  // the last quarter of the trajectory.
  const int k1 = n;
  const int k0 = std::max(tail0, n - std::max(64, n / 4));
  double lo = 0.98 * period_idx0, hi = 1.02 * period_idx0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo);
  double d = lo + gr * (hi - lo);
  double fc = strobe_mismatch(s, k0, k1, c);
  double fd = strobe_mismatch(s, k0, k1, d);
  for (int it = 0; it < 60 && (hi - lo) * hs > 1e-10; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = strobe_mismatch(s, k0, k1, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = strobe_mismatch(s, k0, k1, d);
    }
  }
  const double period_idx = 0.5 * (lo + hi);
  info.period = period_idx * hs;
  info.residual = std::sqrt(strobe_mismatch(s, k0, k1, period_idx)) / scale;
  info.found = info.residual <= convergence_tol;
  if (!info.found) {
    info.transient_end = traj.t_at(n - 1);
    return info;
  }

  // Transient end: earliest sample from which the mismatch stays within
  // tolerance for the rest of the trajectory.
  const double tol_abs = convergence_tol * scale;
  int first_bad = -1;  // last index whose mismatch exceeds tolerance
  for (int k = n - 1; k >= 0; --k) {
    const double back = k - period_idx;
    if (back < 1.0) break;
    const double miss = (s[k] - interp_state(s, back)).norm();
    if (miss > tol_abs) {
      first_bad = k;
      break;
    }
  }
  info.transient_end = first_bad < 0 ? info.period : traj.t_at(first_bad) + info.period;
  return info;
}

}  // namespace qomsync
