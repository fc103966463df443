#include "qomsync/fluctuations.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qomsync/text_io.hpp"

namespace qomsync {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Fills the four diagonal 2x2 blocks of one oscillator cell (optical rows
// r..r+1, mechanical rows r+2..r+3) plus the optomechanical cross blocks.
void fill_cell(CMat8& A, int r, const OscillatorParams& osc,
               const std::complex<double>& alpha,
               const std::complex<double>& beta) {
  const double detuning = osc.delta0 + 2.0 * osc.g * beta.real();
  const std::complex<double> ga = kI * osc.g * alpha;        // i g alpha
  const std::complex<double> gac = kI * osc.g * std::conj(alpha);

  // Adjoint rows are the pairwise conjugates: A[i^1][l^1] = conj(A[i][l]).
  A(r, r) = std::complex<double>(-osc.kappa, detuning);
  A(r, r + 2) = ga;
  A(r, r + 3) = ga;
  A(r + 1, r + 1) = std::conj(A(r, r));
  A(r + 1, r + 2) = std::conj(ga);
  A(r + 1, r + 3) = std::conj(ga);

  A(r + 2, r + 2) = std::complex<double>(-osc.gamma, -osc.omega_m);
  A(r + 2, r) = gac;
  A(r + 2, r + 1) = ga;
  A(r + 3, r + 3) = std::conj(A(r + 2, r + 2));
  A(r + 3, r) = std::conj(ga);
  A(r + 3, r + 1) = std::conj(gac);
}

}  // namespace

CMat8 drift_matrix(const CVec4& classical, const SystemConfig& cfg) {
  CMat8 A = CMat8::Zero();
  fill_cell(A, 0, cfg.left, classical(0), classical(1));
  fill_cell(A, 4, cfg.right, classical(2), classical(3));

  if (cfg.topology.kind == TopologyKind::Bidirectional) {
    const std::complex<double> il = kI * cfg.topology.lambda;
    A(0, 4) = il;
    A(1, 5) = -il;
    A(4, 0) = il;
    A(5, 1) = -il;
  } else {
    // One-way light: the left output (carrying -sqrt(2 kappa_L) a_L) drives
    // the right cavity and never returns.
    const double hop =
        -2.0 * std::sqrt(cfg.topology.eta * cfg.left.kappa * cfg.right.kappa);
    A(4, 0) = hop;
    A(5, 1) = hop;
  }
  return A;
}

NoiseModel noise_model(const SystemConfig& cfg) {
  const double m_strength = 2.0 * cfg.bath.n_th + 1.0;
  NoiseModel nm;

  if (cfg.topology.kind == TopologyKind::Bidirectional) {
    // Four independent baths, one port pair (operator, adjoint) each.
    nm.B.setZero(8, 8);
    nm.sigma.resize(8);
    const double amps[4] = {std::sqrt(2.0 * cfg.left.kappa),
                            std::sqrt(2.0 * cfg.left.gamma),
                            std::sqrt(2.0 * cfg.right.kappa),
                            std::sqrt(2.0 * cfg.right.gamma)};
    const double strengths[4] = {1.0, m_strength, 1.0, m_strength};
    for (int mode = 0; mode < 4; ++mode) {
      nm.B(2 * mode, 2 * mode) = amps[mode];
      nm.B(2 * mode + 1, 2 * mode + 1) = amps[mode];
      nm.sigma(2 * mode) = strengths[mode];
      nm.sigma(2 * mode + 1) = strengths[mode];
    }
  } else {
    // Cascaded: the left optical vacuum port feeds both cavities; the right
    // cavity sees it with amplitude sqrt(2 eta kappa_R). Mechanical baths stay
    // independent. With vacuum_topup the lossy tap (eta < 1) is completed by
    // an extra vacuum port of weight sqrt(2 (1-eta) kappa_R); without it the
    // right optical input is undercomplete, exactly as the one-way equations
    // are printed.
    const bool topup = cfg.topology.vacuum_topup && cfg.topology.eta < 1.0;
    const int ports = topup ? 8 : 6;
    nm.B.setZero(8, ports);
    nm.sigma.resize(ports);

    const double aL = std::sqrt(2.0 * cfg.left.kappa);
    const double aR = std::sqrt(2.0 * cfg.topology.eta * cfg.right.kappa);
    nm.B(0, 0) = aL;
    nm.B(4, 0) = aR;
    nm.B(1, 1) = aL;
    nm.B(5, 1) = aR;
    nm.sigma(0) = 1.0;
    nm.sigma(1) = 1.0;

    nm.B(2, 2) = std::sqrt(2.0 * cfg.left.gamma);
    nm.B(3, 3) = nm.B(2, 2);
    nm.B(6, 4) = std::sqrt(2.0 * cfg.right.gamma);
    nm.B(7, 5) = nm.B(6, 4);
    nm.sigma(2) = m_strength;
    nm.sigma(3) = m_strength;
    nm.sigma(4) = m_strength;
    nm.sigma(5) = m_strength;

    if (topup) {
      const double tu =
          std::sqrt(2.0 * (1.0 - cfg.topology.eta) * cfg.right.kappa);
      nm.B(4, 6) = tu;
      nm.B(5, 7) = tu;
      nm.sigma(6) = 1.0;
      nm.sigma(7) = 1.0;
    }
  }

  nm.D = nm.B * nm.sigma.asDiagonal() * nm.B.adjoint();
  return nm;
}

CMat8 initial_covariance(const SystemConfig& cfg) {
  const double m = 2.0 * cfg.bath.n_th + 1.0;
  CMat8 C = CMat8::Zero();
  C.diagonal() << 1.0, 1.0, m, m, 1.0, 1.0, m, m;
  return C;
}

// Right-hand side of dC/dt = A C + C A^dag + D for Hermitian C: one product
// plus its adjoint.
CMat8 covariance_rhs(const CMat8& C, const CMat8& A, const CMat8& D) {
  CMat8 M = A * C;
  return M + M.adjoint() + D;
}

CMat8 covariance_rk4_step(const CMat8& C, const CMat8& A0, const CMat8& Am,
                          const CMat8& A1, const CMat8& D, double dt) {
  const CMat8 k1 = covariance_rhs(C, A0, D);
  const CMat8 k2 = covariance_rhs(C + (0.5 * dt) * k1, Am, D);
  const CMat8 k3 = covariance_rhs(C + (0.5 * dt) * k2, Am, D);
  const CMat8 k4 = covariance_rhs(C + dt * k3, A1, D);
  CMat8 next = C + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  // The exact flow preserves Hermiticity; fold round-off drift back in.
  next = 0.5 * (next + next.adjoint()).eval();
  return next;
}

bool co_integrate(const SystemConfig& cfg, double t_end,
                  const std::function<void(const CoIntegrationSample&)>& sink) {
  const double dt = cfg.numerics.dt;
  const int stride = cfg.numerics.sample_stride;
  const long n_steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));

  const NoiseModel nm = noise_model(cfg);
  CVec4 s = CVec4::Zero();  // classical start: cavities ramp up from vacuum
  CMat8 C = initial_covariance(cfg);
  CMat8 A0 = drift_matrix(s, cfg);

  int sample_index = 0;
  sink(CoIntegrationSample{sample_index++, 0.0, s, C});

  for (long step = 0; step < n_steps; ++step) {
    // Classical field on half steps, so the covariance stages use exact-grid
    // drift matrices at t, t + dt/2 and t + dt.
    const CVec4 s_mid = classical_rk4_step(s, 0.5 * dt, cfg);
    const CVec4 s_next = classical_rk4_step(s_mid, 0.5 * dt, cfg);
    const CMat8 Am = drift_matrix(s_mid, cfg);
    const CMat8 A1 = drift_matrix(s_next, cfg);

    C = covariance_rk4_step(C, A0, Am, A1, nm.D, dt);
    s = s_next;
    A0 = A1;

    if (!s.allFinite() || s.cwiseAbs().maxCoeff() > 1e9 || !C.allFinite() ||
        C.cwiseAbs().maxCoeff() > 1e12) {
      return false;
    }

    if ((step + 1) % stride == 0) {
      sink(CoIntegrationSample{sample_index++, (step + 1) * dt, s, C});
    }
  }
  return true;
}

CovarianceSeries propagate(const SystemConfig& cfg, double t_end) {
  CovarianceSeries series;
  series.sample_dt = cfg.numerics.dt * cfg.numerics.sample_stride;
  const bool ok = co_integrate(cfg, t_end, [&](const CoIntegrationSample& s) {
    series.classical.push_back(s.classical);
    series.cov.push_back(s.cov);
  });
  series.diverged = !ok;
  return series;
}

double physicality_min_eig(const CMat8& C) {
  const double skew = (C - C.adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-9 * std::max(1.0, C.cwiseAbs().maxCoeff()))
    throw std::runtime_error("physicality_min_eig: non-Hermitian input (|C - C^dag| = " +
                             std::to_string(skew) + ")");
  // Quadrature map per mode: (x, p) = T (c, c^dag) with T = [[1,1],[-i,i]]/sqrt(2).
  CMat8 T = CMat8::Zero();
  const double s = 1.0 / std::sqrt(2.0);
  for (int m = 0; m < 4; ++m) {
    T(2 * m, 2 * m) = s;
    T(2 * m, 2 * m + 1) = s;
    T(2 * m + 1, 2 * m) = std::complex<double>(0.0, -s);
    T(2 * m + 1, 2 * m + 1) = std::complex<double>(0.0, s);
  }
  const CMat8 sigma = T * C * T.adjoint();

  CMat8 M = sigma;
  for (int m = 0; m < 4; ++m) {
    M(2 * m, 2 * m + 1) += kI;       // + i Omega, Omega = [[0,1],[-1,0]] blocks
    M(2 * m + 1, 2 * m) += -kI;
  }
  M = 0.5 * (M + M.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat8> solver(M, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_physical(const CMat8& C, double tol) {
  return physicality_min_eig(C) >= -tol;
}

std::string covariance_csv(const CMat8& C) {
  std::string out;
  for (int i = 0; i < 8; ++i) {
    for (int l = 0; l < 8; ++l) {
      if (l) out += ',';
      out += format_double(C(i, l).real());
      out += ',';
      out += format_double(C(i, l).imag());
    }
    out += '\n';
  }
  return out;
}

}  // namespace qomsync
