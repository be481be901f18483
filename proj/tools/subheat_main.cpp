// Command-line front end: symbolic analysis, control-ball measurements,
// kernel property checks, semilinear simulation and certificates, sweeps.
#include "subheat/errors.hpp"
#include "subheat/harness.hpp"
#include "subheat/io.hpp"
#include "subheat/kernels.hpp"
#include "subheat/numerics.hpp"
#include "subheat/parser.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace subheat;

namespace {

struct SystemArgs {
  std::string target;  // preset name or system file path

  std::shared_ptr<VectorFieldSystem> load(std::optional<Preset>* preset_out = nullptr) const {
    for (const auto& name : preset_names()) {
      if (target == name) {
        Preset p = resolve_preset(name);
        if (preset_out) *preset_out = p;
        return p.system;
      }
    }
    return std::make_shared<VectorFieldSystem>(parse_system_file(target));
  }
};

GridSpec parse_grid_args(const std::vector<double>& lower, const std::vector<double>& upper,
                         const std::vector<int>& points) {
  return GridSpec(lower, upper, points);
}

int cmd_analyze(const SystemArgs& sys_args, int max_step, bool as_json) {
  std::optional<Preset> preset;
  auto sys = sys_args.load(&preset);
  const int cap = max_step > 0 ? max_step : sys->weights().max_weight();

  const bool homogeneous = sys->is_homogeneous();
  auto hd = homogeneous_dimension(sys->weights());
  auto rk = hormander_rank(*sys, std::vector<Rational>(sys->dim(), 0), cap);
  auto ld = lie_algebra_dimension(*sys, cap);
  const bool valid = homogeneous && rk.rank == sys->dim();

  if (as_json) {
    nlohmann::json j;
    j["system"] = sys_args.target;
    j["dim"] = sys->dim();
    j["fields"] = sys->num_fields();
    j["weights"] = sys->weights().sigma;
    j["homogeneous_degree_1"] = homogeneous;
    j["rank_at_origin"] = rk.rank;
    if (rk.step_achieved) j["rank_step"] = *rk.step_achieved;
    j["bracket_cap"] = cap;
    j["q"] = hd.q;
    j["alpha_fujita"] = to_double(hd.alpha_fujita);
    j["alpha_fujita_exact"] = to_string(hd.alpha_fujita);
    j["lie_dim"] = ld.n_dim;
    j["needs_lifting"] = ld.needs_lifting;
    j["valid"] = valid;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "system: " << sys_args.target << "\n";
    std::cout << "  dim n = " << sys->dim() << ", fields m = " << sys->num_fields() << "\n";
    std::cout << "  weights = (";
    for (int d = 0; d < sys->dim(); ++d)
      std::cout << (d ? "," : "") << sys->weights().sigma[d];
    std::cout << ")\n";
    std::cout << "  homogeneous of degree 1: " << (homogeneous ? "yes" : "NO") << "\n";
    std::cout << "  rank at 0: " << rk.rank << " / " << sys->dim();
    if (rk.step_achieved) std::cout << " (reached at bracket length " << *rk.step_achieved << ")";
    std::cout << " [cap " << cap << "]\n";
    std::cout << "  q = " << hd.q << ", alpha_F = " << to_string(hd.alpha_fujita) << " = "
              << to_double(hd.alpha_fujita) << "\n";
    std::cout << "  dim Lie = " << ld.n_dim << ", needs lifting: "
              << (ld.needs_lifting ? "yes" : "no") << "\n";
  }
  if (!valid) throw ValidationError("system fails the homogeneity or rank hypotheses");
  return 0;
}

int cmd_ccball(const SystemArgs& sys_args, const GridSpec& grid, double step,
               std::vector<double> center, std::vector<double> radii, const std::string& out) {
  auto sys = sys_args.load();
  if (center.empty()) center.assign(sys->dim(), 0.0);
  if (step <= 0) step = grid.h(0);
  auto graph = build_reach_graph(*sys, grid, step);
  auto growth = volume_growth_exponent(graph, center, radii);
  std::ofstream csv(resolve_output_dir(out));
  if (!csv) throw ValidationError("cannot write " + out);
  csv << "r,volume,distance_resolution\n";
  for (std::size_t i = 0; i < growth.radii.size(); ++i)
    csv << format_g(growth.radii[i]) << ',' << format_g(growth.volumes[i]) << ','
        << format_g(graph.distance_resolution()) << "\n";
  csv << "# fitted_exponent," << format_g(growth.exponent) << "\n";
  std::cout << "fitted volume growth exponent: " << format_g(growth.exponent) << "\n";
  return 0;
}

int cmd_kernel(const SystemArgs& sys_args, const GridSpec& grid, std::vector<double> source,
               std::vector<double> times, const std::string& out_dir) {
  auto sys = sys_args.load();
  if (source.empty()) source.assign(sys->dim(), 0.0);
  auto L = assemble_operator(*sys, grid);
  SolverConfig cfg;
  const std::string dir = resolve_output_dir(out_dir);
  std::filesystem::create_directories(dir);

  nlohmann::json summary;
  summary["source"] = source;
  nlohmann::json per_time = nlohmann::json::array();
  std::sort(times.begin(), times.end());
  auto snaps = evolve(L, mollified_delta(grid, source), cfg, times);
  for (std::size_t i = 0; i < snaps.size(); ++i) {
    auto& [t, f] = snaps[i];
    char name[64];
    std::snprintf(name, sizeof name, "/kernel_%03zu", i);
    write_field_binary(f, dir + name + ".bin");
    write_field_csv(f, dir + name + ".csv");
    per_time.push_back({{"t", t}, {"mass", f.mass()}, {"sup", f.sup_norm()}});
  }
  summary["snapshots"] = per_time;

  // residual probes at representative offsets inside the box
  std::vector<double> x = source, y = source;
  for (int d = 0; d < grid.dim(); ++d) {
    const double span = grid.upper[d] - grid.lower[d];
    x[d] += 0.06 * span;
    y[d] -= 0.08 * span;
  }
  const double tmid = times[times.size() / 2];
  summary["symmetry_residual"] = kernel_symmetry_residual(L, x, y, tmid, cfg);
  const double s0 = 0.4 * times.back(), t0 = 0.3 * times.back();
  summary["reproduction_residual"] = kernel_reproduction_residual(L, source, s0, t0, cfg);
  std::ofstream js(dir + "/summary.json");
  js << summary.dump(2) << "\n";
  std::cout << summary.dump(2) << "\n";
  return 0;
}

struct Overrides {
  double alpha = 0.0;       // 0 means "keep config value"
  double amplitude = 0.0;
  double horizon = 0.0;

  void apply(ExperimentConfig& cfg) const {
    if (alpha > 0.0) cfg.alpha = alpha;
    if (amplitude > 0.0) cfg.initial_data.amplitude = amplitude;
    if (horizon > 0.0) cfg.horizon = horizon;
  }
};

int cmd_simulate(const std::string& config_path, std::string out_dir, const Overrides& ov) {
  auto cfg = ExperimentConfig::from_file(config_path);
  ov.apply(cfg);
  if (out_dir.empty()) out_dir = cfg.output_dir;
  auto rec = run_scenario(cfg);
  emit_report({rec}, nullptr, resolve_output_dir(out_dir));
  std::cout << rec.to_json().dump(2) << "\n";
  return 0;
}

int cmd_certify(const std::string& config_path, std::string out_dir) {
  auto cfg = ExperimentConfig::from_file(config_path);
  if (out_dir.empty()) out_dir = cfg.output_dir;

  ExperimentConfig point = cfg;
  if (point.preset.empty() && !point.grid)
    throw ValidationError("config: explicit 'grid' required with 'system_file'");
  auto sysref = point.preset.empty()
                    ? std::make_shared<VectorFieldSystem>(parse_system_file(point.system_file))
                    : resolve_preset(point.preset).system;
  validate_system(*sysref);
  GridSpec grid = point.grid ? *point.grid
                             : resolve_preset(point.preset).sim_grid;
  auto L = assemble_operator(*sysref, grid);
  Field u0 = make_initial_data(point.initial_data, grid);
  auto hd = homogeneous_dimension(sysref->weights());
  SolverConfig scfg;

  SupTrace trace = sup_trace(L, u0, cfg.certify_horizon, cfg.certify_samples, scfg);
  auto cert = smallness_certificate(trace, cfg.alpha, cfg.a_const, hd.q, cfg.certify_t_split);
  auto env = barrier_envelope(trace, cfg.alpha, cfg.a_const);
  auto nec = necessary_condition_certificate(
      L, u0, cfg.alpha, cfg.b_const,
      geomspace(cfg.necessary_from, cfg.necessary_to, cfg.necessary_count), scfg);
  auto div = divergence_classification(cfg.make_time_weight(), cfg.make_nonlinearity(),
                                       cfg.divergence_omega, hd.q, cfg.divergence_horizon);

  nlohmann::json j;
  j["config_hash"] = cfg.config_hash();
  j["q"] = hd.q;
  j["alpha"] = cfg.alpha;
  j["alpha_fujita"] = to_double(hd.alpha_fujita);
  j["smallness"] = {{"value", cert.value},
                    {"tail", cert.tail_finite ? nlohmann::json(cert.tail) : nlohmann::json("infinite")},
                    {"bound", cert.bound},
                    {"satisfied", cert.satisfied},
                    {"window_end", cert.window_end}};
  j["envelope"] = {{"final", env.chi.empty() ? 0.0 : env.chi.back()},
                   {"identity_residual", env.identity_residual},
                   {"finite", env.finite}};
  j["necessary_condition"] = {{"max", nec.max_value},
                              {"c_alpha", nec.c_alpha},
                              {"violated", nec.violated}};
  j["divergence"] = {{"class", to_string(div.verdict())},
                     {"quadrature_class", to_string(div.quadrature)},
                     {"growth_slope", div.growth_slope}};
  const std::string dir = resolve_output_dir(out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/certify.json");
  out << j.dump(2) << "\n";
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, std::string out_dir, int jobs) {
  auto cfg = ExperimentConfig::from_file(config_path);
  if (out_dir.empty()) out_dir = cfg.output_dir;
  auto result = sweep(cfg, jobs);
  emit_report(result.records, &result, resolve_output_dir(out_dir));
  std::cout << "sweep: " << result.records.size() << " records -> "
            << resolve_output_dir(out_dir) << "\n";
  std::cout << "alpha dichotomy bracket: ["
            << (result.bracket_lo ? format_g(*result.bracket_lo) : std::string("-")) << ", "
            << (result.bracket_hi ? format_g(*result.bracket_hi) : std::string("-")) << "]\n";
  for (const auto& r : result.records)
    std::cout << "  alpha=" << format_g(r.alpha) << " amp=" << format_g(r.amplitude) << " -> "
              << r.verdict << (r.t_blowup ? " (t*=" + format_g(*r.t_blowup) + ")" : "") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semilinear heat experiments for homogeneous Hormander systems"};
  app.require_subcommand(1);

  SystemArgs sys_args;
  int max_step = 0;
  bool as_json = false;
  auto* analyze = app.add_subcommand("analyze", "symbolic report: rank, q, alpha_F, Lie dimension");
  analyze->add_option("system", sys_args.target, "preset name or system file")->required();
  analyze->add_option("--max-step", max_step, "bracket length cap (default: max weight)");
  analyze->add_flag("--json", as_json, "JSON output");

  std::vector<double> lower, upper, center, radii, times, source;
  std::vector<int> points;
  double step = 0.0;
  std::string out = "ccball.csv";
  auto* ccball = app.add_subcommand("ccball", "control-distance ball volumes and growth exponent");
  ccball->add_option("system", sys_args.target)->required();
  ccball->add_option("--lower", lower)->required();
  ccball->add_option("--upper", upper)->required();
  ccball->add_option("--points", points)->required();
  ccball->add_option("--step", step, "flow time per edge (default: h of axis 1)");
  ccball->add_option("--center", center);
  ccball->add_option("--radii", radii)->required();
  ccball->add_option("-o,--output", out);

  std::string out_dir = "kernel_out";
  auto* kernel = app.add_subcommand("kernel", "heat kernel snapshots and property residuals");
  kernel->add_option("system", sys_args.target)->required();
  kernel->add_option("--lower", lower)->required();
  kernel->add_option("--upper", upper)->required();
  kernel->add_option("--points", points)->required();
  kernel->add_option("--source", source);
  kernel->add_option("--times", times)->required();
  kernel->add_option("-o,--output", out_dir);

  std::string config_path;
  std::string run_out;
  Overrides ov;
  auto* simulate = app.add_subcommand("simulate", "blow-up/boundedness run from a config file");
  simulate->add_option("-c,--config", config_path)->required();
  simulate->add_option("-o,--output", run_out);
  simulate->add_option("--alpha", ov.alpha, "override nonlinearity exponent");
  simulate->add_option("--amplitude", ov.amplitude, "override bump amplitude");
  simulate->add_option("--horizon", ov.horizon, "override time horizon");

  auto* certify = app.add_subcommand("certify", "certificate block from a config file");
  certify->add_option("-c,--config", config_path)->required();
  certify->add_option("-o,--output", run_out);

  int jobs = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "cross-product parameter sweep");
  sweep_cmd->add_option("-c,--config", config_path)->required();
  sweep_cmd->add_option("-o,--output", run_out);
  sweep_cmd->add_option("-j,--jobs", jobs);

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(sys_args, max_step, as_json);
    if (ccball->parsed())
      return cmd_ccball(sys_args, parse_grid_args(lower, upper, points), step, center, radii, out);
    if (kernel->parsed())
      return cmd_kernel(sys_args, parse_grid_args(lower, upper, points), source, times, out_dir);
    if (simulate->parsed()) return cmd_simulate(config_path, run_out, ov);
    if (certify->parsed()) return cmd_certify(config_path, run_out);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, run_out, jobs);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
