#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qomsync/model.hpp"
#include "qomsync/pipeline.hpp"

namespace qomsync {

// Sweepable parameters. delta is the mechanical frequency mismatch (applied
// as right.omega_m = left.omega_m + delta, with the left frequency the unit);
// lambda_over_kappa scales the bidirectional hop as lambda = value * kappa_L;
// eta is the one-way transmission; n_th the shared mechanical bath occupation.
enum class SweepParameter { Delta, LambdaOverKappa, Eta, NTh };

const char* sweep_parameter_name(SweepParameter p);
SweepParameter sweep_parameter_from_name(const std::string& name);  // throws

struct AxisSpec {
  SweepParameter parameter = SweepParameter::Delta;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

struct SweepSpec {
  SystemConfig base;
  AxisSpec axis1;  // outer (row) axis
  AxisSpec axis2;  // inner (column) axis
  int workers = 1;
};

// Structural checks: counts >= 2, min < max, and axis/topology compatibility
// (lambda_over_kappa only on bidirectional bases, eta only on unidirectional).
std::vector<Violation> validate_sweep(const SweepSpec& spec);

struct GridPoint {
  int index1 = 0;       // row (axis1) index
  int index2 = 0;       // column (axis2) index
  double value1 = 0.0;  // axis parameter values, uniform linear grids
  double value2 = 0.0;
  SystemConfig config;
};

// Row-major grid (axis1 outer), one fully resolved config per point. Throws
// std::invalid_argument if validate_sweep reports anything.
std::vector<GridPoint> expand(const SweepSpec& spec);

struct SweepRecord {
  double axis1_value = 0.0;
  double axis2_value = 0.0;
  double mean_Sp = 0.0;
  double mean_DG = 0.0;
  double mean_EN = 0.0;
  bool converged = false;
  bool physical = false;
  double runtime_seconds = 0.0;  // diagnostic only; never serialized
};

// Runs the full pipeline at every grid point. Points execute on spec.workers
// threads pulling from a shared atomic counter into pre-allocated slots, so
// the output order (row-major) and content are independent of scheduling.
// Divergent points yield NaN means with both flags false; the sweep continues.
// The optional progress callback fires after each completed point (from
// worker threads; keep it cheap and thread-safe).
using SweepProgress = std::function<void(size_t done, size_t total)>;
std::vector<SweepRecord> run_sweep(const SweepSpec& spec,
                                   const SweepProgress& progress = {});

// CSV with the fixed header
//   axis1_name,axis1_value,axis2_name,axis2_value,mean_Sp,mean_DG,mean_EN,converged,physical
// Values use shortest round-trip formatting, NaN prints as "nan", flags as 1/0.
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRecord>& records);

// Sweep-spec JSON: {"base": {...} | "base_preset": "name", "axis1": {...},
// "axis2": {...}, "workers": n}. Axis objects: {"parameter": "delta" | ...,
// "min": x, "max": x, "count": n}. Unknown keys are errors. When external_base
// is given (the CLI's --config) the JSON must carry neither "base" nor
// "base_preset".
SweepSpec sweep_spec_from_json(const nlohmann::json& j,
                               const SystemConfig* external_base = nullptr);
SweepSpec load_sweep_spec_file(const std::string& path,
                               const SystemConfig* external_base = nullptr);

}  // namespace qomsync
