#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "vortopo/errors.hpp"
#include "vortopo/io.hpp"
#include "vortopo/svg.hpp"
#include "vortopo/topology.hpp"

namespace {

using nlohmann::json;
using namespace vortopo;

json thresholds_json(const VortexParams& vp, const PerturbationParams& pp) {
  const SeparatrixData sd = separatrix_data(vp, pp);
  const DimensionlessParams d = nondimensionalize(vp, pp);
  return json{{"alpha_c", alpha_critical(vp, pp.k)},
              {"alpha_tilde", d.alpha_tilde},
              {"alpha_tilde_c", d.alpha_tilde_c},
              {"m", d.m},
              {"J", d.J},
              {"y_plus", sd.y_plus},
              {"y_minus", sd.y_minus},
              {"psi_minus", sd.psi_minus},
              {"psi_plus", sd.psi_plus}};
}

int cmd_classify(const RunConfig& cfg, OutputManifest& out) {
  const auto& pp = cfg.require_perturbation();
  if (!cfg.classify)
    throw ConfigError("classify: config needs a 'classify' block");
  json report;
  report["thresholds"] = thresholds_json(cfg.vortex, pp);
  json classes = json::array();
  for (const double psi : cfg.classify->psi)
    classes.push_back(
        {{"psi", psi}, {"class", to_string(classify(psi, cfg.vortex, pp))}});
  report["classes"] = classes;
  report["simply_connected_fraction"] =
      simply_connected_fraction(cfg.vortex, pp);
  const ValidityBounds vb =
      model_validity_bounds(cfg.vortex, pp, cfg.classify->sigma);
  report["validity"] = json{{"sigma", cfg.classify->sigma},
                            {"sigma_min", vb.sigma_min},
                            {"r_min", vb.r_min},
                            {"r_max", vb.r_max},
                            {"alpha_safe", vb.alpha_safe},
                            {"alpha_max", vb.alpha_max},
                            {"regime", vb.regime}};
  const std::string text = report.dump(2) + "\n";
  out.write_file("classify_report.json", text);
  out.finalize();
  std::cout << text;
  return 0;
}

int cmd_trace(const RunConfig& cfg, OutputManifest& out) {
  const auto& pp = cfg.require_perturbation();
  if (!cfg.trace) throw ConfigError("trace: config needs a 'trace' block");
  std::vector<Point3> seeds = cfg.trace->seeds;
  for (const double psi : cfg.trace->psi_targets)
    seeds.push_back(seed_at_psi(psi, cfg.vortex, pp));

  const auto lines = trace_batch(seeds, cfg.vortex, pp, cfg.trace->settings);

  json summary = json::array();
  std::vector<SvgPolyline> svg_lines;
  double y_lo = 1e300, y_hi = -1e300, z_lo = 1e300, z_hi = -1e300;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const FieldLine& line = lines[i];
    out.write_file("line_" + std::to_string(i) + ".csv",
                   csv_from_rows({"s", "x", "y", "z", "psi", "varphi"},
                                 field_line_rows(line)));
    const ClosureReport rep = closure_report(line);
    summary.push_back({{"seed", {line.seed.x, line.seed.y, line.seed.z}},
                       {"psi", line.label.psi},
                       {"varphi", line.label.varphi},
                       {"status", line.status == LineStatus::Closed  ? "Closed"
                                  : line.status == LineStatus::Open ? "Open"
                                                                    : "Exhausted"},
                       {"psi_drift", line.psi_drift},
                       {"varphi_drift", line.varphi_drift},
                       {"closed", rep.closed},
                       {"loop_length", rep.loop_length},
                       {"min_distance_to_seed", rep.min_distance_to_seed}});
    SvgPolyline pl;
    pl.closed = line.status == LineStatus::Closed;
    pl.stroke = pl.closed ? "#6b2d8b" : "#c03a2b";
    for (const auto& smp : line.samples) {
      pl.points.push_back({smp.p.y, smp.p.z});
      y_lo = std::min(y_lo, smp.p.y);
      y_hi = std::max(y_hi, smp.p.y);
      z_lo = std::min(z_lo, smp.p.z);
      z_hi = std::max(z_hi, smp.p.z);
    }
    svg_lines.push_back(std::move(pl));
  }
  FigureSpec fig;
  fig.x_label = "y (m)";
  fig.y_label = "z (m)";
  fig.title = "field lines, y-z projection";
  const double pad_y = 0.05 * (y_hi - y_lo + 1e-12);
  const double pad_z = 0.05 * (z_hi - z_lo + 1e-12);
  fig.x_min = y_lo - pad_y;
  fig.x_max = y_hi + pad_y;
  fig.y_min = z_lo - pad_z;
  fig.y_max = z_hi + pad_z;
  out.write_file("lines_yz.svg", emit_svg(fig, {}, svg_lines));
  const std::string text = json{{"lines", summary}}.dump(2) + "\n";
  out.write_file("trace_summary.json", text);
  out.finalize();
  std::cout << text;
  return 0;
}

int cmd_surface(const RunConfig& cfg, OutputManifest& out) {
  const auto& pp = cfg.require_perturbation();
  if (!cfg.surface) throw ConfigError("surface: config needs a 'surface' block");
  json reports = json::array();
  for (std::size_t i = 0; i < cfg.surface->psi.size(); ++i) {
    const double psi = cfg.surface->psi[i];
    const TriMesh mesh =
        extract_surface(psi, cfg.vortex, pp, cfg.surface->resolution);
    SurfaceReport rep;
    rep.psi_target = psi;
    rep.watertight = is_watertight(mesh);
    rep.chi = euler_characteristic(mesh);
    rep.genus = (2 - rep.chi) / 2;
    rep.vertex_count = mesh.vertex_count();
    rep.triangle_count = mesh.triangle_count();
    rep.class_from_chi = rep.chi == 0 ? TopologyClass::Toroidal
                                      : TopologyClass::SimplyConnected;
    out.write_file("surface_" + std::to_string(i) + ".stl",
                   stl_binary_from_mesh(mesh));
    out.write_file("surface_" + std::to_string(i) + ".json",
                   mesh_to_json(mesh).dump(2) + "\n");
    reports.push_back(surface_report_to_json(rep));
  }
  const std::string text = json{{"surfaces", reports}}.dump(2) + "\n";
  out.write_file("surface_report.json", text);
  out.finalize();
  std::cout << text;
  return 0;
}

int cmd_orbit(const RunConfig& cfg, OutputManifest& out) {
  const auto& pp = cfg.require_perturbation();
  if (!cfg.orbit) throw ConfigError("orbit: config needs an 'orbit' block");
  const ParticleState initial = make_initial_state(
      cfg.vortex, cfg.orbit->position, cfg.orbit->config.s_target,
      cfg.orbit->charge, cfg.orbit->mass, cfg.seed);
  const Trajectory traj = run_orbit(initial, cfg.vortex, pp, cfg.orbit->config);
  out.write_file("orbit.csv",
                 csv_from_rows({"t", "x", "y", "z", "vx", "vy", "vz", "KE",
                                "mu", "s_l"},
                               trajectory_rows(traj)));

  std::vector<std::array<double, 2>> xy;
  xy.reserve(traj.samples.size());
  double lo = 1e300, hi = -1e300;
  for (const auto& s : traj.samples) {
    xy.push_back({s.position.x, s.position.y});
    lo = std::min({lo, s.position.x, s.position.y});
    hi = std::max({hi, s.position.x, s.position.y});
  }
  FigureSpec fig;
  fig.x_label = "x (m)";
  fig.y_label = "y (m)";
  fig.title = "orbit, x-y projection (time-colored)";
  const double pad = 0.05 * (hi - lo + 1e-12);
  fig.x_min = lo - pad;
  fig.x_max = hi + pad;
  fig.y_min = lo - pad;
  fig.y_max = hi + pad;
  out.write_file("orbit_xy.svg",
                 emit_svg(fig, {}, time_bucketed_polylines(xy, 10)));

  const CrescentMetrics cm = crescent_metrics(traj);
  const std::string text =
      json{{"tau_ce", traj.tau_ce},
           {"energy_drift", traj.energy_drift},
           {"step_warnings", traj.step_warnings},
           {"speed_regime_warning", traj.speed_regime_warning},
           {"phi_coverage", cm.phi_coverage},
           {"mu_violation_events", cm.mu_violation_events},
           {"mu_violations_low_s", cm.mu_violations_low_s},
           {"samples_low_s", cm.samples_low_s},
           {"r_min_seen", cm.r_min_seen},
           {"r_max_seen", cm.r_max_seen}}
          .dump(2) +
      "\n";
  out.write_file("orbit_metrics.json", text);
  out.finalize();
  std::cout << text;
  return 0;
}

int cmd_reduce(const RunConfig& cfg, OutputManifest& out) {
  const auto& spectrum = cfg.require_spectrum();
  json report;
  const RescaleResult rescale = absorb_n0(spectrum, cfg.vortex);
  report["rescale"] = json{{"mu", rescale.mu},
                           {"nu", rescale.nu},
                           {"z_shift", rescale.z_shift},
                           {"B0_prime", rescale.new_params.B0},
                           {"r_s_prime", rescale.new_params.r_s},
                           {"z_s_prime", rescale.new_params.z_s}};
  try {
    const ParitySplit split = parity_split(spectrum);
    report["closure_preserving"] = split.closure_preserving;
    const LongwaveReduction red = longwave_reduce(split);
    report["reduction"] = json{{"alpha_avg", red.alpha_avg},
                               {"k_avg", red.k_avg},
                               {"alpha", red.effective.alpha},
                               {"k", red.effective.k},
                               {"alpha_k", red.alpha_avg * red.k_avg}};
  } catch (const NoN1ModeError&) {
    report["closure_preserving"] = nullptr;
    report["reduction"] = nullptr;
  }
  json high = json::array();
  for (const int n : beyond_longwave(spectrum)) high.push_back(n);
  report["beyond_longwave_modes"] = high;
  const std::string text = report.dump(2) + "\n";
  out.write_file("reduce_report.json", text);
  out.finalize();
  std::cout << text;
  return 0;
}

int cmd_fraction_sweep(const RunConfig& cfg, OutputManifest& out) {
  const auto& pp = cfg.require_perturbation();
  if (!cfg.fraction_sweep)
    throw ConfigError("fraction-sweep: config needs a 'fraction_sweep' block");
  const auto& fs = *cfg.fraction_sweep;
  const double alpha_c = alpha_critical(cfg.vortex, pp.k);

  std::vector<std::vector<double>> rows;
  std::vector<std::array<double, 2>> curve;
  for (int i = 0; i < fs.points; ++i) {
    const double ratio =
        fs.ratio_min + (fs.ratio_max - fs.ratio_min) * i / (fs.points - 1);
    const PerturbationParams p{ratio * alpha_c, pp.k};
    const SeparatrixData sd = separatrix_data(cfg.vortex, p);
    const double fraction = simply_connected_fraction(cfg.vortex, p);
    rows.push_back({ratio, p.alpha, p.alpha * p.k * cfg.vortex.r_s,
                    sd.psi_minus, sd.psi_plus, fraction});
    curve.push_back({ratio, sd.psi_minus / sd.psi_plus});
  }
  out.write_file("fraction_sweep.csv",
                 csv_from_rows({"alpha_over_alpha_c", "alpha", "alpha_tilde",
                                "psi_minus", "psi_plus", "fraction"},
                               rows));

  // Region plot: torus below the psi_minus/psi_plus curve, simply connected
  // above it, dashed transition boundary.
  FigureSpec fig;
  fig.x_label = "alpha / alpha_c";
  fig.y_label = "psi / psi_plus";
  fig.title = "compact flux surface classes";
  fig.x_min = fs.ratio_min;
  fig.x_max = fs.ratio_max;
  fig.y_min = 0.0;
  fig.y_max = 1.0;
  SvgPolygon torus_region{{}, "#b8cbe4"};
  torus_region.points.push_back({fs.ratio_min, 0.0});
  for (const auto& c : curve) torus_region.points.push_back(c);
  torus_region.points.push_back({fs.ratio_max, 0.0});
  SvgPolygon sphere_region{{}, "#e4b8b8"};
  sphere_region.points.push_back({fs.ratio_min, 1.0});
  for (const auto& c : curve) sphere_region.points.push_back(c);
  sphere_region.points.push_back({fs.ratio_max, 1.0});
  SvgPolyline boundary;
  boundary.points = curve;
  boundary.stroke = "#000000";
  boundary.dash = "6,4";
  out.write_file("fraction_regions.svg",
                 emit_svg(fig, {torus_region, sphere_region}, {boundary}));
  out.finalize();
  std::cout << json{{"points", fs.points},
                    {"alpha_c", alpha_c},
                    {"first_fraction", rows.front()[5]},
                    {"last_fraction", rows.back()[5]}}
                   .dump(2)
            << "\n";
  return 0;
}

void emit_error(const char* kind, const std::string& message) {
  std::cerr << json{{"error", message}, {"kind", kind}}.dump() << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"perturbed zero-helicity vortex topology toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int threads = 0;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--seed", seed, "master random seed (overrides config)");
  app.add_option("--threads", threads, "OpenMP thread count");

  auto* classify_cmd = app.add_subcommand("classify", "thresholds and classes");
  auto* trace_cmd = app.add_subcommand("trace", "field-line tracing");
  auto* surface_cmd = app.add_subcommand("surface", "flux-surface meshes");
  auto* orbit_cmd = app.add_subcommand("orbit", "charged-particle orbit");
  auto* reduce_cmd = app.add_subcommand("reduce", "spectrum reduction");
  auto* sweep_cmd = app.add_subcommand("fraction-sweep", "fraction vs alpha");
  auto* verify_cmd = app.add_subcommand("verify", "check output manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("config", e.what());
    return 2;
  }

  if (threads == 0)
    if (const char* env = std::getenv("VORTEX_TOPO_THREADS"))
      threads = std::atoi(env);
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  if (verify_cmd->parsed()) {
    if (out_dir.empty())
      throw ConfigError("verify: --out directory is required");
    const auto mismatched = verify_manifest(out_dir);
    if (mismatched.empty()) {
      std::cout << "{\"verified\": true}\n";
      return 0;
    }
    json bad = json::array();
    for (const auto& name : mismatched) bad.push_back(name);
    std::cout << json{{"verified", false}, {"mismatched", bad}}.dump(2) << "\n";
    return 4;
  }

  if (config_path.empty())
    throw ConfigError("a --config file is required for this command");
  RunConfig cfg = load_config(config_path);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

  OutputManifest manifest{cfg.output_dir};
  if (classify_cmd->parsed()) return cmd_classify(cfg, manifest);
  if (trace_cmd->parsed()) return cmd_trace(cfg, manifest);
  if (surface_cmd->parsed()) return cmd_surface(cfg, manifest);
  if (orbit_cmd->parsed()) return cmd_orbit(cfg, manifest);
  if (reduce_cmd->parsed()) return cmd_reduce(cfg, manifest);
  if (sweep_cmd->parsed()) return cmd_fraction_sweep(cfg, manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const vortopo::ConfigError& e) {
    emit_error("config", e.what());
    return 2;
  } catch (const vortopo::RegimeOutOfRangeError& e) {
    emit_error("regime", e.what());
    return 3;
  } catch (const std::exception& e) {
    emit_error("numeric", e.what());
    return 4;
  }
}
