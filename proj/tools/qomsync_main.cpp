#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qomsync/heatmap.hpp"
#include "qomsync/model.hpp"
#include "qomsync/pipeline.hpp"
#include "qomsync/sweep.hpp"
#include "qomsync/text_io.hpp"

namespace {

using nlohmann::json;
using namespace qomsync;

// --set a.b.c=value : navigate/create the dotted path and assign the value,
// parsed as JSON when it is one (numbers, booleans) and kept as a string
// otherwise. Unknown paths surface later in the strict config parser.
void apply_override(json& root, const std::string& kv) {
  const size_t eq = kv.find('=');
  if (eq == std::string::npos || eq == 0)
    throw std::runtime_error("override '" + kv + "' is not of the form key=value");
  const std::string path = kv.substr(0, eq);
  const std::string value = kv.substr(eq + 1);

  json* node = &root;
  size_t start = 0;
  for (;;) {
    const size_t dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty())
      throw std::runtime_error("override '" + kv + "' has an empty path segment");
    if (dot == std::string::npos) {
      json parsed;
      try {
        parsed = json::parse(value);
      } catch (const json::parse_error&) {
        parsed = value;  // bare strings (e.g. topology.kind=unidirectional)
      }
      (*node)[key] = parsed;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

SystemConfig config_from_cli(const std::string& config_path,
                             const std::string& preset,
                             const std::vector<std::string>& overrides) {
  json base;
  if (!config_path.empty()) {
    const std::string text = read_text_file(config_path);
    try {
      base = json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(config_path + ": " + e.what());
    }
  } else {
    base = to_json(standard_config(preset));
  }
  for (const std::string& kv : overrides) apply_override(base, kv);

  const SystemConfig cfg = config_from_json(base);
  const ValidationReport report = validate(cfg);
  if (!report.ok()) {
    std::string msg = "invalid config:";
    for (const Violation& v : report.violations)
      msg += "\n  " + v.path + ": " + v.message;
    throw std::runtime_error(msg);
  }
  return cfg;
}

int cmd_presets() {
  for (const std::string& name : preset_names()) std::cout << name << "\n";
  return 0;
}

int cmd_simulate(const std::string& config_path, const std::string& preset,
                 const std::vector<std::string>& overrides,
                 const std::string& out_dir, bool verbose) {
  const SystemConfig cfg = config_from_cli(config_path, preset, overrides);
  const PointResult result = run_pipeline(cfg);

  std::filesystem::create_directories(out_dir);

  std::string measures = "t,Sp,DG,EN,var_p_minus\n";
  for (const MeasureSample& s : result.series.samples) {
    measures += format_double(s.t) + ',' + format_double(s.S_p) + ',' +
                format_double(s.D_G) + ',' + format_double(s.E_N) + ',' +
                format_double(s.var_p_minus) + '\n';
  }
  write_text_atomic(out_dir + "/measures.csv", measures);

  std::string traj =
      "t,re_alpha_L,im_alpha_L,re_beta_L,im_beta_L,re_alpha_R,im_alpha_R,"
      "re_beta_R,im_beta_R\n";
  for (int k = 0; k < result.trajectory.n(); ++k) {
    const CVec4& s = result.trajectory.samples[k];
    traj += format_double(result.trajectory.t_at(k));
    for (int i = 0; i < 4; ++i) {
      traj += ',' + format_double(s(i).real()) + ',' + format_double(s(i).imag());
    }
    traj += '\n';
  }
  write_text_atomic(out_dir + "/trajectory.csv", traj);

  if (result.diverged) {
    std::cerr << "simulate: " << result.divergence_stage
              << " integration diverged near t = " << format_double(result.t_diverged)
              << " (partial series written to " << out_dir << ")\n";
    return 2;
  }

  if (verbose) {
    const LimitCycleInfo& c = result.cycle;
    std::cerr << "steady state: "
              << (c.fixed_point ? "fixed point" : (c.found ? "limit cycle" : "not detected"))
              << ", period = " << format_double(c.period)
              << ", transient_end = " << format_double(c.transient_end)
              << ", residual = " << format_double(c.residual) << "\n";
    std::cerr << "min physicality eigenvalue: "
              << format_double(result.min_physicality_eig) << "\n";
    const bool right = cfg.measures.discord_measurement == MeasureSide::Right;
    std::cerr << "mean_DG measured on right: "
              << format_double(right ? result.averages.D_G
                                     : result.averages.D_G_other)
              << ", on left: "
              << format_double(right ? result.averages.D_G_other
                                     : result.averages.D_G)
              << "\n";
  }
  std::cout << "mean_Sp=" << format_double(result.averages.S_p)
            << " mean_DG=" << format_double(result.averages.D_G)
            << " mean_EN=" << format_double(result.averages.E_N)
            << " converged=" << (result.converged ? 1 : 0)
            << " physical=" << (result.physical ? 1 : 0) << "\n";
  return 0;
}

void print_measure_summary(const char* name, int column,
                           const SweepSpec& spec,
                           const std::vector<SweepRecord>& records) {
  auto value_of = [column](const SweepRecord& r) {
    return column == 0 ? r.mean_Sp : column == 1 ? r.mean_DG : r.mean_EN;
  };
  int i_min = -1, i_max = -1;
  for (size_t i = 0; i < records.size(); ++i) {
    const double v = value_of(records[i]);
    if (std::isnan(v)) continue;
    if (i_min < 0 || v < value_of(records[i_min])) i_min = int(i);
    if (i_max < 0 || v > value_of(records[i_max])) i_max = int(i);
  }
  if (i_min < 0) {
    std::cout << name << ": all points NaN\n";
    return;
  }
  const std::string n1 = sweep_parameter_name(spec.axis1.parameter);
  const std::string n2 = sweep_parameter_name(spec.axis2.parameter);
  auto loc = [&](int i) {
    return "(" + n1 + "=" + format_double(records[i].axis1_value) + ", " + n2 +
           "=" + format_double(records[i].axis2_value) + ")";
  };
  std::cout << name << ": min=" << format_double(value_of(records[i_min]))
            << " at " << loc(i_min)
            << ", max=" << format_double(value_of(records[i_max])) << " at "
            << loc(i_max) << "\n";
}

int cmd_sweep(const std::string& config_path, const std::string& spec_path,
              const std::string& out_file, int workers_flag, bool verbose) {
  SweepSpec spec;
  if (!config_path.empty()) {
    const SystemConfig base = config_from_cli(config_path, "", {});
    spec = load_sweep_spec_file(spec_path, &base);
  } else {
    spec = load_sweep_spec_file(spec_path);
  }

  // Worker count precedence: --workers flag, QOMSYNC_WORKERS, spec file.
  if (const char* env = std::getenv("QOMSYNC_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) spec.workers = w;
  }
  if (workers_flag >= 1) spec.workers = workers_flag;

  SweepProgress progress;
  if (verbose) {
    std::fprintf(stderr, "sweep: %d x %d grid on %d workers\n", spec.axis1.count,
                 spec.axis2.count, spec.workers);
    progress = [](size_t done, size_t total) {
      std::fprintf(stderr, "\r%zu/%zu", done, total);
      if (done == total) std::fprintf(stderr, "\n");
    };
  }

  const std::vector<SweepRecord> records = run_sweep(spec, progress);
  write_text_atomic(out_file, sweep_csv(spec, records));

  size_t n_converged = 0, n_physical = 0, n_nan = 0;
  for (const SweepRecord& r : records) {
    n_converged += r.converged;
    n_physical += r.physical;
    n_nan += std::isnan(r.mean_Sp);
  }
  std::cout << "points: " << records.size() << " total, " << n_converged
            << " converged, " << n_physical << " physical, " << n_nan
            << " nan\n";
  print_measure_summary("mean_Sp", 0, spec, records);
  print_measure_summary("mean_DG", 1, spec, records);
  print_measure_summary("mean_EN", 2, spec, records);
  std::cout << "wrote " << out_file << "\n";
  return 0;
}

int cmd_render(const std::string& in_file, const std::string& measure,
               const std::string& out_file, int cell_px) {
  const Heatmap map = heatmap_from_csv(read_text_file(in_file), measure);
  write_text_atomic(out_file, heatmap_ppm(map, cell_px));
  const std::string sidecar = out_file + ".txt";
  write_text_atomic(sidecar, heatmap_scale_text(map));
  std::cout << "wrote " << out_file << " (" << map.n2() * cell_px << "x"
            << map.n1() * cell_px << ") and " << sidecar << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Simulator for quantum phase synchronization and Gaussian correlations "
      "of two coupled optomechanical oscillators"};
  app.require_subcommand(1);

  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "diagnostic output on stderr");

  app.add_subcommand("presets", "list built-in parameter presets");

  auto* sim = app.add_subcommand(
      "simulate", "integrate one operating point and write time series");
  std::string sim_config, sim_preset, sim_out;
  std::vector<std::string> sim_sets;
  auto* sim_cfg_opt =
      sim->add_option("--config", sim_config, "config JSON file")
          ->check(CLI::ExistingFile);
  sim->add_option("--preset", sim_preset, "built-in preset name")
      ->excludes(sim_cfg_opt);
  sim->add_option("--set", sim_sets,
                  "dotted override key=value, applied before validation");
  sim->add_option("--out", sim_out, "output directory")->required();

  auto* swp = app.add_subcommand(
      "sweep", "run a 2-D parameter grid and write the record CSV");
  std::string swp_config, swp_spec, swp_out;
  int swp_workers = 0;
  swp->add_option("--config", swp_config,
                  "base config JSON (alternative to base/base_preset in the spec)")
      ->check(CLI::ExistingFile);
  swp->add_option("--spec", swp_spec, "sweep spec JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  swp->add_option("--out", swp_out, "output CSV path")->required();
  swp->add_option("--workers", swp_workers,
                  "worker threads (overrides spec and QOMSYNC_WORKERS)");

  auto* rnd = app.add_subcommand("render", "render a sweep CSV as a heatmap");
  std::string rnd_in, rnd_measure, rnd_out;
  int rnd_cell = 24;
  rnd->add_option("--in", rnd_in, "sweep CSV")->required()->check(CLI::ExistingFile);
  rnd->add_option("--measure", rnd_measure, "Sp, DG or EN")->required();
  rnd->add_option("--out", rnd_out, "output PPM path (sidecar: <out>.txt)")
      ->required();
  rnd->add_option("--cell-px", rnd_cell, "pixels per grid cell (default 24)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) return cmd_presets();
    if (app.got_subcommand("simulate")) {
      if (sim_config.empty() && sim_preset.empty())
        throw std::runtime_error("simulate: provide --config or --preset");
      return cmd_simulate(sim_config, sim_preset, sim_sets, sim_out, verbose);
    }
    if (app.got_subcommand("sweep"))
      return cmd_sweep(swp_config, swp_spec, swp_out, swp_workers, verbose);
    if (app.got_subcommand("render"))
      return cmd_render(rnd_in, rnd_measure, rnd_out, rnd_cell);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
