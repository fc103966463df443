#include <doctest.h>

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "qomsync/model.hpp"

using namespace qomsync;
using nlohmann::json;

namespace {

bool has_violation(const ValidationReport& r, const std::string& path,
                   const std::string& fragment) {
  for (const Violation& v : r.violations)
    if (v.path == path && v.message.find(fragment) != std::string::npos)
      return true;
  return false;
}

}  // namespace

TEST_CASE("reference operating point validates with delta 0.005 and coupling ratio 0.5") {
  const SystemConfig cfg = standard_config("fig2_bidirectional");
  const ValidationReport r = validate(cfg);
  CHECK(r.ok());
  CHECK(r.delta == doctest::Approx(0.005).epsilon(1e-12));
  CHECK(r.coupling_ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cfg.left.omega_m == 1.0);
  CHECK(cfg.left.kappa == 0.15);
  CHECK(cfg.topology.lambda == doctest::Approx(0.075));
  CHECK(cfg.drive.amplitude == 52.0);
  CHECK(cfg.bath.n_th == 0.0);
}

TEST_CASE("zero cavity damping is rejected at its field path") {
  SystemConfig cfg = standard_config("fig2_bidirectional");
  cfg.left.kappa = 0.0;
  const ValidationReport r = validate(cfg);
  CHECK(!r.ok());
  CHECK(has_violation(r, "left.kappa", "must be > 0"));
}

TEST_CASE("transmission efficiency outside (0,1] is rejected") {
  SystemConfig cfg = standard_config("fig2_unidirectional");
  cfg.topology.eta = 1.3;
  CHECK(has_violation(validate(cfg), "topology.eta", "must lie in (0,1]"));
  cfg.topology.eta = 0.0;
  CHECK(has_violation(validate(cfg), "topology.eta", "must lie in (0,1]"));
  cfg.topology.eta = 1.0;
  CHECK(validate(cfg).ok());
}

TEST_CASE("validation collects every violation instead of stopping at the first") {
  SystemConfig cfg = standard_config("fig2_bidirectional");
  cfg.left.kappa = 0.0;
  cfg.right.gamma = -1.0;
  cfg.numerics.dt = 0.0;
  const ValidationReport r = validate(cfg);
  CHECK(r.violations.size() >= 3);
  CHECK(has_violation(r, "left.kappa", "must be > 0"));
  CHECK(has_violation(r, "right.gamma", "must be > 0"));
  CHECK(has_violation(r, "numerics.dt", "must be > 0"));
}

TEST_CASE("every named preset validates") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    CHECK(validate(standard_config(name)).ok());
  }
}

TEST_CASE("unidirectional preset keeps the printed-equation defaults") {
  const SystemConfig cfg = standard_config("fig2_unidirectional");
  CHECK(cfg.topology.kind == TopologyKind::Unidirectional);
  CHECK(cfg.topology.eta == 1.0);
  CHECK(!cfg.topology.vacuum_topup);
  CHECK(!cfg.topology.drive_right);
  CHECK(validate(cfg).coupling_ratio == 1.0);
}

TEST_CASE("thermal preset is bidirectional with ten thermal phonons") {
  const SystemConfig cfg = standard_config("fig5_thermal");
  CHECK(cfg.topology.kind == TopologyKind::Bidirectional);
  CHECK(cfg.bath.n_th == 10.0);
}

TEST_CASE("unknown preset names are rejected and the message lists the valid ones") {
  CHECK_THROWS_WITH_AS(standard_config("fig9_nope"),
                       doctest::Contains("fig2_bidirectional"), std::runtime_error);
}

TEST_CASE("serialize-deserialize-serialize is byte-identical") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const SystemConfig cfg = standard_config(name);
    const std::string first = canonical_json(cfg);
    const SystemConfig back = config_from_json(json::parse(first));
    CHECK(canonical_json(back) == first);
  }
}

TEST_CASE("round trip preserves every field of a fully customized config") {
  SystemConfig cfg = standard_config("fig2_unidirectional");
  cfg.right.omega_m = 1.0041;
  cfg.right.delta0 = 0.93;
  cfg.topology.eta = 0.37;
  cfg.topology.vacuum_topup = true;
  cfg.topology.drive_right = true;
  cfg.bath.n_th = 2.5;
  cfg.numerics.dt = 5e-4;
  cfg.numerics.sample_stride = 7;
  cfg.measures.discord_measurement = MeasureSide::Left;

  const SystemConfig back = config_from_json(to_json(cfg));
  CHECK(back.right.omega_m == cfg.right.omega_m);
  CHECK(back.right.delta0 == cfg.right.delta0);
  CHECK(back.topology.eta == cfg.topology.eta);
  CHECK(back.topology.vacuum_topup);
  CHECK(back.topology.drive_right);
  CHECK(back.bath.n_th == cfg.bath.n_th);
  CHECK(back.numerics.dt == cfg.numerics.dt);
  CHECK(back.numerics.sample_stride == cfg.numerics.sample_stride);
  CHECK(back.measures.discord_measurement == MeasureSide::Left);
}

TEST_CASE("unknown JSON fields are rejected with their full path") {
  json j = to_json(standard_config("fig2_bidirectional"));
  j["left"]["kapa"] = 0.15;
  CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("config.left.kapa"),
                       std::runtime_error);
}

TEST_CASE("missing JSON fields are rejected with their full path") {
  json j = to_json(standard_config("fig2_bidirectional"));
  j["bath"].erase("n_th");
  CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("config.bath.n_th"),
                       std::runtime_error);
}

TEST_CASE("wrong JSON field types are rejected with their full path") {
  json j = to_json(standard_config("fig2_bidirectional"));
  j["drive"]["amplitude"] = "52";
  CHECK_THROWS_WITH_AS(config_from_json(j),
                       doctest::Contains("config.drive.amplitude"), std::runtime_error);

  j = to_json(standard_config("fig2_bidirectional"));
  j["numerics"]["sample_stride"] = 2.5;
  CHECK_THROWS_WITH_AS(config_from_json(j),
                       doctest::Contains("config.numerics.sample_stride"),
                       std::runtime_error);
}

TEST_CASE("topology kind must name one of the two layouts") {
  json j = to_json(standard_config("fig2_bidirectional"));
  j["topology"] = json{{"kind", "ring"}};
  CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("config.topology.kind"),
                       std::runtime_error);
}

TEST_CASE("bidirectional JSON rejects unidirectional-only switches") {
  json j = to_json(standard_config("fig2_bidirectional"));
  j["topology"]["vacuum_topup"] = true;
  CHECK_THROWS_WITH_AS(config_from_json(j),
                       doctest::Contains("config.topology.vacuum_topup"),
                       std::runtime_error);
}

TEST_CASE("numerics and measures blocks are optional and default sensibly") {
  json j = to_json(standard_config("fig2_bidirectional"));
  j.erase("numerics");
  j.erase("measures");
  const SystemConfig cfg = config_from_json(j);
  CHECK(cfg.numerics.dt == 1e-3);
  CHECK(cfg.numerics.t_transient == 450.0);
  CHECK(cfg.numerics.sample_stride == 10);
  CHECK(cfg.measures.discord_measurement == MeasureSide::Right);
}

TEST_CASE("loading a missing config file reports the path") {
  CHECK_THROWS_WITH_AS(load_config_file("/nonexistent/qomsync.json"),
                       doctest::Contains("/nonexistent/qomsync.json"),
                       std::runtime_error);
}
