#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qomsync {

// All frequencies and rates are in units of the left mechanical frequency
// omega_mL (and time in 1/omega_mL), so left.omega_m is 1.0 in every standard
// configuration and only the detuning delta = right.omega_m - left.omega_m
// varies between the oscillators.
struct OscillatorParams {
  double omega_m = 1.0;  // mechanical frequency
  double gamma = 0.005;  // mechanical damping rate
  double kappa = 0.15;   // optical (cavity) damping rate
  double g = 0.005;      // single-photon optomechanical coupling
  double delta0 = 1.0;   // cavity detuning in the common laser frame
};

enum class TopologyKind { Bidirectional, Unidirectional };

// Coupling topology between the two cavities.
//
// Bidirectional: photon hopping -lambda(a_L^dag a_R + a_L a_R^dag), reversible.
// Unidirectional: cascaded one-way link a_R^in = sqrt(eta) a_L^out. Two extra
// switches deal with defects of the printed cascaded equations:
//   vacuum_topup — the one-way equations under-count input noise for eta < 1
//     (the missing (1-eta) vacuum port); true restores input-output
//     completeness so the state stays physical at every eta.
//   drive_right — the cascaded equations drive only the left cavity, which
//     leaves the right oscillator a sub-threshold slave with no limit cycle of
//     its own; true drives the right cavity with the same amplitude so both
//     cells self-oscillate (the regime where the synchronization-blockade maps
//     actually form). Both default false, reproducing the equations as printed.
struct Topology {
  TopologyKind kind = TopologyKind::Bidirectional;
  double lambda = 0.0;        // bidirectional hopping strength
  double eta = 1.0;           // unidirectional transmission efficiency, (0,1]
  bool vacuum_topup = false;  // unidirectional only
  bool drive_right = false;   // unidirectional only
};

struct DriveParams {
  double amplitude = 52.0;  // laser amplitude E_l (both cavities when bidirectional)
};

struct BathParams {
  double n_th = 0.0;  // mean thermal phonon occupation, same for both mechanical baths
};

struct NumericsParams {
  double dt = 1e-3;             // covariance integration step
  double t_transient = 450.0;   // discarded before averaging
  double t_average = 150.0;     // averaging window length
  double phase_epsilon = 1e-6;  // amplitude below which a classical phase is held
  double convergence_tol = 1e-5;  // limit-cycle stroboscopic mismatch tolerance
  int sample_stride = 10;       // measures sampled every this many steps
};

enum class MeasureSide { Left, Right };

struct MeasureOptions {
  // Which oscillator carries the Gaussian measurement in the discord formula.
  MeasureSide discord_measurement = MeasureSide::Right;
};

struct SystemConfig {
  OscillatorParams left;
  OscillatorParams right;
  Topology topology;
  DriveParams drive;
  BathParams bath;
  NumericsParams numerics;
  MeasureOptions measures;
};

struct Violation {
  std::string path;     // e.g. "left.kappa"
  std::string message;  // e.g. "must be > 0"
};

struct ValidationReport {
  std::vector<Violation> violations;
  double delta = 0.0;           // right.omega_m - left.omega_m
  double coupling_ratio = 0.0;  // lambda/kappa_L (bidirectional) or eta (unidirectional)
  bool ok() const { return violations.empty(); }
};

// Validation failures are data, not exceptions.
ValidationReport validate(const SystemConfig& cfg);

// Named parameter sets for the reference operating point:
//   fig2_bidirectional, fig2_unidirectional, fig5_thermal.
// Throws std::runtime_error listing the valid names on an unknown preset.
SystemConfig standard_config(const std::string& preset);
std::vector<std::string> preset_names();

// JSON (de)serialization. canonical_json always emits every field with sorted
// keys so serialize -> deserialize -> serialize is byte-identical.
nlohmann::json to_json(const SystemConfig& cfg);
SystemConfig config_from_json(const nlohmann::json& j);  // throws on bad/unknown fields
std::string canonical_json(const SystemConfig& cfg);
SystemConfig load_config_file(const std::string& path);

}  // namespace qomsync
