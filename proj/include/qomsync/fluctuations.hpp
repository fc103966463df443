#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qomsync/meanfield.hpp"
#include "qomsync/model.hpp"

namespace qomsync {

// Fluctuation vector ordering, fixed everywhere in this code base:
//   R = (da_L, da_L^dag, db_L, db_L^dag, da_R, da_R^dag, db_R, db_R^dag)
// Index pairs (2m, 2m+1) are operator/adjoint pairs of mode m; the "bar" map
// i -> i^1 swaps them. The covariance is the symmetrized second moment
//   C[i][l] = <R_i R_l^dag + R_l^dag R_i>,
// so optical vacuum has C[0][0] = 1 and a thermal mechanical mode 2n_th + 1.
using CMat8 = Eigen::Matrix<std::complex<double>, 8, 8>;

// Linearized drift matrix about the classical state: dR/dt = A(t) R + noise.
// Time dependence enters through the classical amplitudes and the radiation-
// pressure-shifted detunings. Rows obey A[i^1][l^1] = conj(A[i][l]).
CMat8 drift_matrix(const CVec4& classical, const SystemConfig& cfg);

// Input noise in factored form: dR picks up B dW with independent ports of
// symmetrized strength sigma (1 for optical vacuum, 2 n_th + 1 for mechanical
// baths). The covariance equation uses D = B diag(sigma) B^dag. For the
// cascaded topology the left vacuum port feeds both cavities, producing the
// D[0][4]-type cross terms; vacuum_topup adds the (1-eta) vacuum port the
// printed one-way equations drop.
struct NoiseModel {
  Eigen::Matrix<std::complex<double>, 8, Eigen::Dynamic> B;  // 8 x ports
  Eigen::VectorXd sigma;                                     // port strengths
  CMat8 D;                                                   // B diag(sigma) B^dag
};
NoiseModel noise_model(const SystemConfig& cfg);

// Initial covariance: optical modes in vacuum, mechanical modes thermal at the
// bath occupation.
CMat8 initial_covariance(const SystemConfig& cfg);

// dC/dt = A C + C A^dag + D.
CMat8 covariance_rhs(const CMat8& C, const CMat8& A, const CMat8& D);

// One RK4 step of the covariance equation, given the drift at the step start,
// midpoint and end. C stays Hermitian, so each stage costs one 8x8 product:
// A C + (A C)^dag + D.
CMat8 covariance_rk4_step(const CMat8& C, const CMat8& A0, const CMat8& Am,
                          const CMat8& A1, const CMat8& D, double dt);

// Co-integration of the classical mean field (half steps, so the covariance
// stages see exact-grid drift matrices) and the covariance. The sink is called
// once at t = 0 and after every sample_stride covariance steps. Returns false
// if a divergence guard tripped (classical blow-up or covariance overflow).
struct CoIntegrationSample {
  int index;      // sample number, 0-based
  double t;
  const CVec4& classical;
  const CMat8& cov;
};
bool co_integrate(const SystemConfig& cfg, double t_end,
                  const std::function<void(const CoIntegrationSample&)>& sink);

// Covariance series on the sample grid (convenience wrapper over co_integrate,
// used by tests and oracles).
struct CovarianceSeries {
  double sample_dt = 0.0;
  bool diverged = false;
  std::vector<CVec4> classical;
  std::vector<CMat8> cov;
  double t_at(int k) const { return k * sample_dt; }
};
CovarianceSeries propagate(const SystemConfig& cfg, double t_end);

// Smallest eigenvalue of sigma8 + i Omega8, where sigma8 is the full 8x8
// quadrature covariance of the state and Omega8 the symplectic form; a
// physical Gaussian state satisfies the Heisenberg bound min-eig >= 0 (checked
// against a small negative tolerance for round-off).
double physicality_min_eig(const CMat8& C);
bool is_physical(const CMat8& C, double tol = 1e-8);

// Row-major dump of a covariance snapshot, real and imaginary parts
// interleaved (16 comma-separated values per line), for inspection and for
// comparing against Monte Carlo estimates.
std::string covariance_csv(const CMat8& C);

}  // namespace qomsync
