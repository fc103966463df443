#include "qomsync/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "json_reader.hpp"
#include "qomsync/text_io.hpp"

namespace qomsync {

const char* sweep_parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::Delta: return "delta";
    case SweepParameter::LambdaOverKappa: return "lambda_over_kappa";
    case SweepParameter::Eta: return "eta";
    case SweepParameter::NTh: return "n_th";
  }
  return "?";
}

SweepParameter sweep_parameter_from_name(const std::string& name) {
  if (name == "delta") return SweepParameter::Delta;
  if (name == "lambda_over_kappa") return SweepParameter::LambdaOverKappa;
  if (name == "eta") return SweepParameter::Eta;
  if (name == "n_th") return SweepParameter::NTh;
  throw std::runtime_error(
      "unknown sweep parameter '" + name +
      "' (valid: delta, lambda_over_kappa, eta, n_th)");
}

namespace {

void validate_axis(std::vector<Violation>& v, const std::string& prefix,
                   const AxisSpec& axis, const SystemConfig& base) {
  if (axis.count < 2) v.push_back({prefix + ".count", "must be >= 2"});
  if (!(axis.min < axis.max)) v.push_back({prefix + ".min", "must be < max"});
  if (!std::isfinite(axis.min) || !std::isfinite(axis.max))
    v.push_back({prefix, "bounds must be finite"});

  const bool bidirectional = base.topology.kind == TopologyKind::Bidirectional;
  if (axis.parameter == SweepParameter::LambdaOverKappa && !bidirectional)
    v.push_back({prefix + ".parameter",
                 "lambda_over_kappa not applicable to a unidirectional base"});
  if (axis.parameter == SweepParameter::Eta) {
    if (bidirectional)
      v.push_back({prefix + ".parameter", "eta not applicable to a bidirectional base"});
    if (axis.min <= 0.0 || axis.max > 1.0)
      v.push_back({prefix, "eta values must lie in (0,1]"});
  }
  if (axis.parameter == SweepParameter::NTh && axis.min < 0.0)
    v.push_back({prefix + ".min", "n_th must be >= 0"});
}

void apply_axis_value(SystemConfig& cfg, SweepParameter p, double value) {
  switch (p) {
    case SweepParameter::Delta:
      // The left mechanical frequency is the unit; delta shifts only the
      // right oscillator (the cavity detunings stay at the base values).
      cfg.right.omega_m = cfg.left.omega_m + value;
      break;
    case SweepParameter::LambdaOverKappa:
      cfg.topology.lambda = value * cfg.left.kappa;
      break;
    case SweepParameter::Eta:
      cfg.topology.eta = value;
      break;
    case SweepParameter::NTh:
      cfg.bath.n_th = value;
      break;
  }
}

double grid_value(const AxisSpec& axis, int k) {
  return axis.min + (axis.max - axis.min) * (double(k) / (axis.count - 1));
}

}  // namespace

std::vector<Violation> validate_sweep(const SweepSpec& spec) {
  std::vector<Violation> v;
  ValidationReport base_report = validate(spec.base);
  for (Violation& bv : base_report.violations)
    v.push_back({"base." + bv.path, bv.message});
  validate_axis(v, "axis1", spec.axis1, spec.base);
  validate_axis(v, "axis2", spec.axis2, spec.base);
  if (spec.axis1.parameter == spec.axis2.parameter)
    v.push_back({"axis2.parameter", "must differ from axis1"});
  if (spec.workers < 1) v.push_back({"workers", "must be >= 1"});
  return v;
}

std::vector<GridPoint> expand(const SweepSpec& spec) {
  const std::vector<Violation> v = validate_sweep(spec);
  if (!v.empty()) {
    std::string msg = "invalid sweep spec:";
    for (const Violation& viol : v) msg += "\n  " + viol.path + ": " + viol.message;
    throw std::invalid_argument(msg);
  }

  std::vector<GridPoint> points;
  points.reserve(size_t(spec.axis1.count) * spec.axis2.count);
  for (int i = 0; i < spec.axis1.count; ++i) {
    const double v1 = grid_value(spec.axis1, i);
    for (int k = 0; k < spec.axis2.count; ++k) {
      const double v2 = grid_value(spec.axis2, k);
      GridPoint p;
      p.index1 = i;
      p.index2 = k;
      p.value1 = v1;
      p.value2 = v2;
      p.config = spec.base;
      apply_axis_value(p.config, spec.axis1.parameter, v1);
      apply_axis_value(p.config, spec.axis2.parameter, v2);
      points.push_back(std::move(p));
    }
  }
  return points;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec,
                                   const SweepProgress& progress) {
  const std::vector<GridPoint> points = expand(spec);
  std::vector<SweepRecord> records(points.size());

  // Pre-allocated slots indexed by grid position plus an atomic work counter:
  // any scheduling order produces the same record layout.
  std::atomic<size_t> next{0};
  std::atomic<size_t> done{0};
  auto worker = [&]() {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      const GridPoint& p = points[i];
      SweepRecord& rec = records[i];
      rec.axis1_value = p.value1;
      rec.axis2_value = p.value2;
      try {
        const PointResult r = run_pipeline(p.config);
        rec.mean_Sp = r.averages.S_p;
        rec.mean_DG = r.averages.D_G;
        rec.mean_EN = r.averages.E_N;
        rec.converged = r.converged;
        rec.physical = r.physical;
        rec.runtime_seconds = r.runtime_seconds;
      } catch (const std::exception&) {
        // A point whose measures reject the state (e.g. an intentionally
        // lossy unidirectional run) is recorded as failed, not fatal.
        const double nan = std::numeric_limits<double>::quiet_NaN();
        rec.mean_Sp = rec.mean_DG = rec.mean_EN = nan;
        rec.converged = false;
        rec.physical = false;
      }
      if (progress) progress(done.fetch_add(1) + 1, points.size());
    }
  };

  const int n_workers =
      std::max(1, std::min<int>(spec.workers, int(points.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return records;
}

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRecord>& records) {
  const std::string n1 = sweep_parameter_name(spec.axis1.parameter);
  const std::string n2 = sweep_parameter_name(spec.axis2.parameter);
  std::string out =
      "axis1_name,axis1_value,axis2_name,axis2_value,mean_Sp,mean_DG,mean_EN,"
      "converged,physical\n";
  for (const SweepRecord& r : records) {
    out += n1;
    out += ',';
    out += format_double(r.axis1_value);
    out += ',';
    out += n2;
    out += ',';
    out += format_double(r.axis2_value);
    out += ',';
    out += format_double(r.mean_Sp);
    out += ',';
    out += format_double(r.mean_DG);
    out += ',';
    out += format_double(r.mean_EN);
    out += ',';
    out += r.converged ? '1' : '0';
    out += ',';
    out += r.physical ? '1' : '0';
    out += '\n';
  }
  return out;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j,
                               const SystemConfig* external_base) {
  detail::ObjectReader r(j, "sweep");
  SweepSpec spec;

  const bool has_base = r.has("base");
  const bool has_preset = r.has("base_preset");
  if (external_base != nullptr) {
    if (has_base || has_preset)
      throw std::runtime_error(
          "sweep: base config given twice (drop 'base'/'base_preset' from the "
          "spec file or the --config flag)");
    spec.base = *external_base;
  } else {
    if (has_base == has_preset)
      throw std::runtime_error(
          "sweep: exactly one of 'base' or 'base_preset' is required");
    spec.base = has_preset ? standard_config(r.str("base_preset"))
                           : config_from_json(r.get("base"));
  }

  auto read_axis = [&](const char* key) {
    detail::ObjectReader ar(r.get(key), std::string("sweep.") + key);
    AxisSpec axis;
    axis.parameter = sweep_parameter_from_name(ar.str("parameter"));
    axis.min = ar.number("min");
    axis.max = ar.number("max");
    if (!ar.has("count"))
      throw std::runtime_error(ar.path + ".count: missing field");
    axis.count = ar.integer("count", 0);
    ar.finish();
    return axis;
  };
  spec.axis1 = read_axis("axis1");
  spec.axis2 = read_axis("axis2");
  spec.workers = r.integer("workers", 1);
  r.finish();

  const std::vector<Violation> v = validate_sweep(spec);
  if (!v.empty()) {
    std::string msg = "invalid sweep spec:";
    for (const Violation& viol : v) msg += "\n  " + viol.path + ": " + viol.message;
    throw std::runtime_error(msg);
  }
  return spec;
}

SweepSpec load_sweep_spec_file(const std::string& path,
                               const SystemConfig* external_base) {
  const std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  try {
    return sweep_spec_from_json(j, external_base);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace qomsync
