#include "qomsync/model.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "qomsync/text_io.hpp"
#include "json_reader.hpp"

namespace qomsync {

namespace {

void check_positive(std::vector<Violation>& v, const std::string& path, double x) {
  if (!(x > 0.0)) v.push_back({path, "must be > 0"});
}

void check_nonneg(std::vector<Violation>& v, const std::string& path, double x) {
  if (!(x >= 0.0)) v.push_back({path, "must be >= 0"});
}

void check_finite(std::vector<Violation>& v, const std::string& path, double x) {
  if (!std::isfinite(x)) v.push_back({path, "must be finite"});
}

void validate_oscillator(std::vector<Violation>& v, const std::string& prefix,
                         const OscillatorParams& o) {
  check_positive(v, prefix + ".omega_m", o.omega_m);
  check_positive(v, prefix + ".gamma", o.gamma);
  check_positive(v, prefix + ".kappa", o.kappa);
  check_nonneg(v, prefix + ".g", o.g);
  check_finite(v, prefix + ".delta0", o.delta0);
}

}  // namespace

ValidationReport validate(const SystemConfig& cfg) {
  ValidationReport r;
  auto& v = r.violations;
  validate_oscillator(v, "left", cfg.left);
  validate_oscillator(v, "right", cfg.right);
  switch (cfg.topology.kind) {
    case TopologyKind::Bidirectional:
      check_nonneg(v, "topology.lambda", cfg.topology.lambda);
      check_finite(v, "topology.lambda", cfg.topology.lambda);
      break;
    case TopologyKind::Unidirectional:
      if (!(cfg.topology.eta > 0.0 && cfg.topology.eta <= 1.0))
        v.push_back({"topology.eta", "must lie in (0,1]"});
      break;
  }
  check_nonneg(v, "drive.amplitude", cfg.drive.amplitude);
  check_finite(v, "drive.amplitude", cfg.drive.amplitude);
  check_nonneg(v, "bath.n_th", cfg.bath.n_th);
  check_positive(v, "numerics.dt", cfg.numerics.dt);
  check_nonneg(v, "numerics.t_transient", cfg.numerics.t_transient);
  check_positive(v, "numerics.t_average", cfg.numerics.t_average);
  check_positive(v, "numerics.phase_epsilon", cfg.numerics.phase_epsilon);
  check_positive(v, "numerics.convergence_tol", cfg.numerics.convergence_tol);
  if (cfg.numerics.sample_stride < 1)
    v.push_back({"numerics.sample_stride", "must be >= 1"});

  r.delta = cfg.right.omega_m - cfg.left.omega_m;
  if (!std::isfinite(r.delta)) v.push_back({"right.omega_m", "detuning delta must be finite"});
  r.coupling_ratio = cfg.topology.kind == TopologyKind::Bidirectional
                         ? cfg.topology.lambda / cfg.left.kappa
                         : cfg.topology.eta;
  return r;
}

std::vector<std::string> preset_names() {
  return {"fig2_bidirectional", "fig2_unidirectional", "fig5_thermal"};
}

SystemConfig standard_config(const std::string& preset) {
  // Reference operating point: omega_mR = 1.005, gamma = 0.005, kappa = 0.15,
  // g = 0.005, E_l = 52, cavity detunings at the respective mechanical
  // frequencies, mechanical baths in the ground state unless thermal.
  SystemConfig cfg;
  cfg.left = {1.0, 0.005, 0.15, 0.005, 1.0};
  cfg.right = {1.005, 0.005, 0.15, 0.005, 1.005};
  cfg.drive.amplitude = 52.0;
  cfg.bath.n_th = 0.0;
  cfg.numerics = NumericsParams{};  // dt=1e-3, transient 450, averaging 150

  if (preset == "fig2_bidirectional") {
    cfg.topology.kind = TopologyKind::Bidirectional;
    cfg.topology.lambda = 0.075;  // kappa/2
  } else if (preset == "fig2_unidirectional") {
    cfg.topology.kind = TopologyKind::Unidirectional;
    cfg.topology.eta = 1.0;
    cfg.topology.vacuum_topup = false;
    cfg.topology.drive_right = false;  // only the left cavity is driven
  } else if (preset == "fig5_thermal") {
    cfg.topology.kind = TopologyKind::Bidirectional;
    cfg.topology.lambda = 0.075;
    cfg.bath.n_th = 10.0;
  } else {
    std::string names;
    for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
    throw std::runtime_error("unknown preset '" + preset + "' (valid: " + names + ")");
  }
  return cfg;
}

namespace {

using nlohmann::json;

using detail::ObjectReader;

OscillatorParams oscillator_from_json(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  OscillatorParams o;
  o.omega_m = r.number("omega_m");
  o.gamma = r.number("gamma");
  o.kappa = r.number("kappa");
  o.g = r.number("g");
  o.delta0 = r.number("delta0");
  r.finish();
  return o;
}

json oscillator_to_json(const OscillatorParams& o) {
  return json{{"omega_m", o.omega_m},
              {"gamma", o.gamma},
              {"kappa", o.kappa},
              {"g", o.g},
              {"delta0", o.delta0}};
}

}  // namespace

nlohmann::json to_json(const SystemConfig& cfg) {
  json topo;
  if (cfg.topology.kind == TopologyKind::Bidirectional) {
    topo = json{{"kind", "bidirectional"}, {"lambda", cfg.topology.lambda}};
  } else {
    topo = json{{"kind", "unidirectional"},
                {"eta", cfg.topology.eta},
                {"vacuum_topup", cfg.topology.vacuum_topup},
                {"drive_right", cfg.topology.drive_right}};
  }
  return json{
      {"left", oscillator_to_json(cfg.left)},
      {"right", oscillator_to_json(cfg.right)},
      {"topology", topo},
      {"drive", json{{"amplitude", cfg.drive.amplitude}}},
      {"bath", json{{"n_th", cfg.bath.n_th}}},
      {"numerics",
       json{{"dt", cfg.numerics.dt},
            {"t_transient", cfg.numerics.t_transient},
            {"t_average", cfg.numerics.t_average},
            {"phase_epsilon", cfg.numerics.phase_epsilon},
            {"convergence_tol", cfg.numerics.convergence_tol},
            {"sample_stride", cfg.numerics.sample_stride}}},
      {"measures",
       json{{"discord_measurement",
             cfg.measures.discord_measurement == MeasureSide::Right ? "right" : "left"}}},
  };
}

SystemConfig config_from_json(const nlohmann::json& j) {
  ObjectReader r(j, "config");
  SystemConfig cfg;
  cfg.left = oscillator_from_json(r.get("left"), "config.left");
  cfg.right = oscillator_from_json(r.get("right"), "config.right");

  {
    ObjectReader t(r.get("topology"), "config.topology");
    const std::string kind = t.str("kind");
    if (kind == "bidirectional") {
      cfg.topology.kind = TopologyKind::Bidirectional;
      cfg.topology.lambda = t.number_or("lambda", 0.0);
    } else if (kind == "unidirectional") {
      cfg.topology.kind = TopologyKind::Unidirectional;
      cfg.topology.eta = t.number_or("eta", 1.0);
      cfg.topology.vacuum_topup = t.boolean("vacuum_topup", false);
      cfg.topology.drive_right = t.boolean("drive_right", false);
    } else {
      throw std::runtime_error(
          "config.topology.kind: expected \"bidirectional\" or \"unidirectional\"");
    }
    t.finish();
  }
  {
    ObjectReader d(r.get("drive"), "config.drive");
    cfg.drive.amplitude = d.number("amplitude");
    d.finish();
  }
  {
    ObjectReader b(r.get("bath"), "config.bath");
    cfg.bath.n_th = b.number("n_th");
    b.finish();
  }
  if (r.has("numerics")) {
    ObjectReader n(r.get("numerics"), "config.numerics");
    NumericsParams def;
    cfg.numerics.dt = n.number_or("dt", def.dt);
    cfg.numerics.t_transient = n.number_or("t_transient", def.t_transient);
    cfg.numerics.t_average = n.number_or("t_average", def.t_average);
    cfg.numerics.phase_epsilon = n.number_or("phase_epsilon", def.phase_epsilon);
    cfg.numerics.convergence_tol = n.number_or("convergence_tol", def.convergence_tol);
    cfg.numerics.sample_stride = n.integer("sample_stride", def.sample_stride);
    n.finish();
  }
  if (r.has("measures")) {
    ObjectReader m(r.get("measures"), "config.measures");
    const std::string side = m.has("discord_measurement") ? m.str("discord_measurement") : "right";
    if (side == "right") cfg.measures.discord_measurement = MeasureSide::Right;
    else if (side == "left") cfg.measures.discord_measurement = MeasureSide::Left;
    else throw std::runtime_error("config.measures.discord_measurement: expected \"left\" or \"right\"");
    m.finish();
  }
  r.finish();
  return cfg;
}

std::string canonical_json(const SystemConfig& cfg) {
  // nlohmann::json with the default (ordered-map) container sorts keys, and
  // dump() prints shortest round-trip numbers, so this string is canonical.
  return to_json(cfg).dump(2) + "\n";
}

SystemConfig load_config_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace qomsync
