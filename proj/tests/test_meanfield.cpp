#include <doctest.h>

#include <cmath>
#include <complex>

#include "qomsync/meanfield.hpp"
#include "qomsync/model.hpp"

using namespace qomsync;
using std::complex;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool samples_identical(const ClassicalTrajectory& a, const ClassicalTrajectory& b,
                       int component) {
  if (a.n() != b.n()) return false;
  for (int k = 0; k < a.n(); ++k)
    if (a.samples[k][component] != b.samples[k][component]) return false;
  return true;
}

ClassicalTrajectory synthetic_trajectory(double hs, int n) {
  ClassicalTrajectory traj;
  traj.dt = hs;
  traj.stride = 1;
  traj.samples.resize(n);
  return traj;
}

}  // namespace

TEST_CASE("from vacuum only the laser drive acts") {
  const SystemConfig cfg = standard_config("fig2_bidirectional");
  const CVec4 rhs = classical_rhs(CVec4::Zero(), cfg);
  CHECK(rhs[0] == complex<double>(52.0, 0.0));
  CHECK(rhs[1] == complex<double>(0.0, 0.0));
  CHECK(rhs[2] == complex<double>(52.0, 0.0));
  CHECK(rhs[3] == complex<double>(0.0, 0.0));
}

TEST_CASE("cascaded feed into the right cavity is -2 sqrt(eta kL kR) alpha_L") {
  SystemConfig cfg = standard_config("fig2_unidirectional");
  cfg.drive.amplitude = 0.0;
  CVec4 s = CVec4::Zero();
  s[0] = 1.0;  // unit field in the left cavity only
  const CVec4 rhs = classical_rhs(s, cfg);
  CHECK(rhs[2].real() == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(rhs[2].imag() == doctest::Approx(0.0));
  // Radiation pressure on the left membrane: i g |alpha_L|^2.
  CHECK(rhs[1].real() == doctest::Approx(0.0));
  CHECK(rhs[1].imag() == doctest::Approx(0.005).epsilon(1e-12));
  // Nothing feeds back from right to left.
  CHECK(rhs[0] == complex<double>(-0.15, 1.0));
}

TEST_CASE("with the optomechanical coupling off the cavity follows the driven-mode solution") {
  SystemConfig cfg = standard_config("fig2_bidirectional");
  cfg.left.g = cfg.right.g = 0.0;
  cfg.topology.lambda = 0.0;
  cfg.numerics.sample_stride = 1;

  const double t_end = 10.0;
  const complex<double> pol(-cfg.left.kappa, cfg.left.delta0);
  const complex<double> fixed = cfg.drive.amplitude / (-pol);

  const ClassicalTrajectory traj = integrate_classical(cfg, t_end);
  REQUIRE(!traj.diverged);
  for (int k = 0; k < traj.n(); k += 500) {
    const double t = traj.t_at(k);
    const complex<double> exact = fixed * (1.0 - std::exp(pol * t));
    CHECK(std::abs(traj.samples[k][0] - exact) < 1e-10);
  }
}

TEST_CASE("the integrator converges at fourth order") {
  SystemConfig cfg = standard_config("fig2_bidirectional");
  cfg.left.g = cfg.right.g = 0.0;
  cfg.topology.lambda = 0.0;
  cfg.numerics.sample_stride = 1;

  const double t_end = 5.0;
  const complex<double> pol(-cfg.left.kappa, cfg.left.delta0);
  const complex<double> exact =
      cfg.drive.amplitude / (-pol) * (1.0 - std::exp(pol * t_end));

  auto endpoint_error = [&](double dt) {
    cfg.numerics.dt = dt;
    const ClassicalTrajectory traj = integrate_classical(cfg, t_end);
    return std::abs(traj.samples.back()[0] - exact);
  };

  const double e1 = endpoint_error(2e-2);
  const double e2 = endpoint_error(1e-2);
  const double e3 = endpoint_error(5e-3);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
  CHECK(e2 / e3 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("an undriven system never leaves the vacuum fixed point") {
  SystemConfig cfg = standard_config("fig2_bidirectional");
  cfg.drive.amplitude = 0.0;
  const ClassicalTrajectory traj = integrate_classical(cfg, 50.0);
  REQUIRE(!traj.diverged);
  for (const CVec4& s : traj.samples) CHECK(s.norm() == 0.0);

  const LimitCycleInfo cycle = detect_limit_cycle(traj, cfg.numerics.convergence_tol);
  CHECK(cycle.found);
  CHECK(cycle.fixed_point);
  CHECK(cycle.period == 0.0);
}

TEST_CASE("a pure oscillation is detected with its period to one percent") {
  const double hs = 0.01;
  const int n = 20001;  // t up to 200: ~32 periods
  ClassicalTrajectory traj = synthetic_trajectory(hs, n);
  for (int k = 0; k < n; ++k) {
    const double t = k * hs;
    traj.samples[k] << complex<double>(1.0, 0.0), std::polar(1.0, -t),
        complex<double>(0.0, 0.0), complex<double>(0.0, 0.0);
  }
  const LimitCycleInfo cycle = detect_limit_cycle(traj, 1e-3);
  CHECK(cycle.found);
  CHECK(!cycle.fixed_point);
  CHECK(cycle.period == doctest::Approx(2.0 * kPi).epsilon(0.01));
  CHECK(cycle.transient_end < 10.0);
}

TEST_CASE("a damped oscillation settles into a fixed point") {
  const double hs = 0.1;
  const int n = 6001;  // t up to 600, envelope e^{-0.05 t} -> 1e-13
  ClassicalTrajectory traj = synthetic_trajectory(hs, n);
  for (int k = 0; k < n; ++k) {
    const double t = k * hs;
    traj.samples[k] << complex<double>(0.0, 0.0),
        std::exp(-0.05 * t) * std::polar(1.0, -t), complex<double>(0.0, 0.0),
        complex<double>(0.0, 0.0);
  }
  const LimitCycleInfo cycle = detect_limit_cycle(traj, 1e-5);
  CHECK(cycle.found);
  CHECK(cycle.fixed_point);
}

TEST_CASE("too short a trajectory is rejected rather than misclassified") {
  ClassicalTrajectory traj = synthetic_trajectory(0.1, 10);
  for (auto& s : traj.samples) s = CVec4::Zero();
  CHECK_THROWS_AS(detect_limit_cycle(traj, 1e-5), std::invalid_argument);
}

TEST_CASE("the reference point locks into its limit cycle before the transient cutoff") {
  const SystemConfig cfg = standard_config("fig2_bidirectional");
  const ClassicalTrajectory traj =
      integrate_classical(cfg, cfg.numerics.t_transient + cfg.numerics.t_average);
  REQUIRE(!traj.diverged);
  const LimitCycleInfo cycle = detect_limit_cycle(traj, cfg.numerics.convergence_tol);
  CHECK(cycle.found);
  CHECK(!cycle.fixed_point);
  // The self-oscillation sits near (but not at) the bare mechanical frequency.
  CHECK(cycle.period == doctest::Approx(2.0 * kPi).epsilon(0.02));
  CHECK(cycle.transient_end < cfg.numerics.t_transient);
  CHECK(cycle.residual <= cfg.numerics.convergence_tol);
}

TEST_CASE("phases unwrap continuously past the branch cut") {
  const double hs = 0.01;
  const int n = 1001;  // t up to 10 > pi: wrapped arg would jump
  ClassicalTrajectory traj = synthetic_trajectory(hs, n);
  for (int k = 0; k < n; ++k) {
    const double t = k * hs;
    traj.samples[k] << complex<double>(0.0, 0.0), 0.5 * std::polar(1.0, -t),
        complex<double>(0.0, 0.0), complex<double>(0.0, 0.0);
  }
  const auto phases = compute_phases(traj, 1e-6);
  REQUIRE(phases.size() == traj.samples.size());
  CHECK(phases.back()[1] == doctest::Approx(-10.0).epsilon(1e-9));
  // Components with zero amplitude keep their initial phase.
  CHECK(phases.back()[0] == 0.0);
  CHECK(phases.back()[2] == 0.0);
}

TEST_CASE("the phase holds while the amplitude dips below the threshold") {
  PhaseTracker tracker(1e-3);
  CVec4 s = CVec4::Zero();

  s[1] = std::polar(1.0, -1.0);
  CHECK(tracker.update(s)[1] == doctest::Approx(-1.0));

  s[1] = 0.0;  // amplitude collapses: arg() is noise, phase must hold
  CHECK(tracker.update(s)[1] == doctest::Approx(-1.0));
  s[1] = std::polar(1e-9, 2.9);
  CHECK(tracker.update(s)[1] == doctest::Approx(-1.0));

  s[1] = std::polar(1.0, -1.5);  // recovery resumes from the nearest branch
  CHECK(tracker.update(s)[1] == doctest::Approx(-1.5));
}

TEST_CASE("uncoupled oscillators evolve bit-for-bit independently") {
  SystemConfig cfg = standard_config("fig2_bidirectional");
  cfg.topology.lambda = 0.0;
  const ClassicalTrajectory base = integrate_classical(cfg, 50.0);

  // Mangling the right oscillator must not change a single bit on the left.
  cfg.right.omega_m = 1.7;
  cfg.right.kappa = 0.4;
  cfg.right.g = 0.02;
  const ClassicalTrajectory other = integrate_classical(cfg, 50.0);

  CHECK(samples_identical(base, other, 0));
  CHECK(samples_identical(base, other, 1));
  CHECK(!samples_identical(base, other, 2));
}

TEST_CASE("the cascaded link is one-way: right parameters never touch the left") {
  SystemConfig cfg = standard_config("fig2_unidirectional");
  const ClassicalTrajectory base = integrate_classical(cfg, 50.0);

  cfg.right.kappa = 0.3;
  cfg.right.delta0 = 0.2;
  const ClassicalTrajectory other = integrate_classical(cfg, 50.0);

  CHECK(samples_identical(base, other, 0));
  CHECK(samples_identical(base, other, 1));
  CHECK(!samples_identical(base, other, 2));
}

TEST_CASE("runaway amplitudes trip the divergence guard instead of overflowing") {
  SystemConfig cfg = standard_config("fig2_bidirectional");
  cfg.drive.amplitude = 1e8;
  const ClassicalTrajectory traj = integrate_classical(cfg, 10.0);
  CHECK(traj.diverged);
  CHECK(traj.t_diverged <= 10.0);
  for (const CVec4& s : traj.samples) CHECK(s.allFinite());
}
