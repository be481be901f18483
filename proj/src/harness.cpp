#include "subheat/harness.hpp"

#include "subheat/errors.hpp"
#include "subheat/io.hpp"
#include "subheat/kernels.hpp"
#include "subheat/numerics.hpp"
#include "subheat/parser.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <thread>

namespace subheat {

namespace {

GridSpec grid_from_json(const nlohmann::json& j) {
  return GridSpec(j.at("lower").get<std::vector<double>>(),
                  j.at("upper").get<std::vector<double>>(),
                  j.at("points").get<std::vector<int>>());
}

nlohmann::json grid_to_json(const GridSpec& g) {
  return nlohmann::json{{"lower", g.lower}, {"upper", g.upper}, {"points", g.points}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.version = j.value("version", 1);
  if (c.version != 1) throw ValidationError("config: unsupported version");
  c.preset = j.value("preset", "");
  c.system_file = j.value("system_file", "");
  if (c.preset.empty() == c.system_file.empty())
    throw ValidationError("config: exactly one of 'preset' or 'system_file' is required");
  if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
  if (j.contains("nonlinearity")) {
    const auto& nj = j.at("nonlinearity");
    c.nonlinearity_kind = nj.value("kind", "power");
    c.alpha = nj.value("alpha", 2.0);
    c.a_const = nj.value("A", 1.0);
    c.b_const = nj.value("B", c.a_const);
    c.nonlinearity_file = nj.value("file", "");
  }
  if (j.contains("time_weight")) {
    const auto& tj = j.at("time_weight");
    c.time_weight_kind = tj.value("kind", "constant");
    if (c.time_weight_kind == "constant")
      c.time_weight_value = tj.value("c", 1.0);
    else if (c.time_weight_kind == "power")
      c.time_weight_value = tj.value("sigma", 0.0);
    else if (c.time_weight_kind == "tabulated")
      c.time_weight_file = tj.value("file", "");
    else
      throw ValidationError("config: unknown time_weight kind");
  }
  if (j.contains("initial_data")) {
    const auto& ij = j.at("initial_data");
    const std::string kind = ij.value("kind", "gaussian");
    if (kind == "gaussian") {
      c.initial_data.kind = InitialDataSpec::Kind::Gaussian;
      if (ij.contains("center")) c.initial_data.center = ij.at("center").get<std::vector<double>>();
      c.initial_data.width = ij.value("width", 0.7);
      c.initial_data.amplitude = ij.value("amplitude", 0.5);
    } else if (kind == "constant") {
      c.initial_data.kind = InitialDataSpec::Kind::Constant;
      c.initial_data.value = ij.value("value", 1.0);
    } else if (kind == "file") {
      c.initial_data.kind = InitialDataSpec::Kind::File;
      c.initial_data.path = ij.value("path", "");
    } else {
      throw ValidationError("config: unknown initial_data kind");
    }
  }
  c.horizon = j.value("horizon", 100.0);
  c.threshold_factor = j.value("threshold_factor", 1e6);
  c.snapshots = j.value("snapshots", 32);
  if (j.contains("certify")) {
    const auto& cj = j.at("certify");
    c.certify_horizon = cj.value("horizon", 10.0);
    c.certify_samples = cj.value("samples", 256);
    c.certify_t_split = cj.value("t_split", 2.5);
  }
  if (j.contains("necessary_times")) {
    const auto& nj = j.at("necessary_times");
    c.necessary_from = nj.value("from", 0.5);
    c.necessary_to = nj.value("to", 50.0);
    c.necessary_count = nj.value("count", 25);
  }
  if (j.contains("divergence")) {
    c.divergence_omega = j.at("divergence").value("omega", 1.0);
    c.divergence_horizon = j.at("divergence").value("horizon", 10.0);
  }
  if (j.contains("sweep")) {
    c.sweep_alpha = j.at("sweep").value("alpha", std::vector<double>{});
    c.sweep_amplitude = j.at("sweep").value("amplitude", std::vector<double>{});
  }
  c.output_dir = j.value("output_dir", "out");
  c.seed = j.value("seed", 1ull);
  return c;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("config parse failure: ") + e.what());
  }
  return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["version"] = version;
  if (!preset.empty()) j["preset"] = preset;
  if (!system_file.empty()) j["system_file"] = system_file;
  if (grid) j["grid"] = grid_to_json(*grid);
  j["nonlinearity"] = {{"kind", nonlinearity_kind}, {"alpha", alpha}, {"A", a_const},
                       {"B", b_const}};
  if (!nonlinearity_file.empty()) j["nonlinearity"]["file"] = nonlinearity_file;
  if (time_weight_kind == "constant")
    j["time_weight"] = {{"kind", "constant"}, {"c", time_weight_value}};
  else if (time_weight_kind == "power")
    j["time_weight"] = {{"kind", "power"}, {"sigma", time_weight_value}};
  else
    j["time_weight"] = {{"kind", "tabulated"}, {"file", time_weight_file}};
  switch (initial_data.kind) {
    case InitialDataSpec::Kind::Gaussian:
      j["initial_data"] = {{"kind", "gaussian"},
                           {"center", initial_data.center},
                           {"width", initial_data.width},
                           {"amplitude", initial_data.amplitude}};
      break;
    case InitialDataSpec::Kind::Constant:
      j["initial_data"] = {{"kind", "constant"}, {"value", initial_data.value}};
      break;
    case InitialDataSpec::Kind::File:
      j["initial_data"] = {{"kind", "file"}, {"path", initial_data.path}};
      break;
  }
  j["horizon"] = horizon;
  j["threshold_factor"] = threshold_factor;
  j["snapshots"] = snapshots;
  j["certify"] = {{"horizon", certify_horizon}, {"samples", certify_samples},
                  {"t_split", certify_t_split}};
  j["necessary_times"] = {{"from", necessary_from}, {"to", necessary_to},
                          {"count", necessary_count}};
  j["divergence"] = {{"omega", divergence_omega}, {"horizon", divergence_horizon}};
  if (!sweep_alpha.empty() || !sweep_amplitude.empty())
    j["sweep"] = {{"alpha", sweep_alpha}, {"amplitude", sweep_amplitude}};
  j["output_dir"] = output_dir;
  j["seed"] = seed;
  return j;
}

std::string ExperimentConfig::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(to_json().dump())));
  return buf;
}

Nonlinearity ExperimentConfig::make_nonlinearity() const {
  if (nonlinearity_kind == "power") return Nonlinearity::power(alpha, a_const, b_const);
  if (nonlinearity_kind == "tabulated") {
    std::ifstream in(nonlinearity_file);
    if (!in) throw ValidationError("cannot open nonlinearity table: " + nonlinearity_file);
    std::vector<double> us, fs;
    double u, f;
    char sep;
    while (in >> u >> sep >> f) {
      us.push_back(u);
      fs.push_back(f);
    }
    return Nonlinearity::tabulated(std::move(us), std::move(fs));
  }
  throw ValidationError("config: unknown nonlinearity kind");
}

TimeWeight ExperimentConfig::make_time_weight() const {
  if (time_weight_kind == "constant") return TimeWeight::constant(time_weight_value);
  if (time_weight_kind == "power") return TimeWeight::power(time_weight_value);
  std::ifstream in(time_weight_file);
  if (!in) throw ValidationError("cannot open time weight table: " + time_weight_file);
  std::vector<double> ts, ps;
  double t, p;
  char sep;
  while (in >> t >> sep >> p) {
    ts.push_back(t);
    ps.push_back(p);
  }
  return TimeWeight::tabulated(std::move(ts), std::move(ps));
}

Field make_initial_data(const InitialDataSpec& spec, const GridSpec& grid) {
  Field f(grid);
  switch (spec.kind) {
    case InitialDataSpec::Kind::Gaussian: {
      std::vector<double> c = spec.center;
      if (c.empty()) c.assign(grid.dim(), 0.0);
      if (static_cast<int>(c.size()) != grid.dim())
        throw ValidationError("initial data: center arity mismatch");
      const double s2 = 2.0 * spec.width * spec.width;
      for (std::size_t i = 0; i < f.size(); ++i) {
        auto x = grid.node_coords(i);
        double r2 = 0.0;
        for (int d = 0; d < grid.dim(); ++d) r2 += (x[d] - c[d]) * (x[d] - c[d]);
        f.values[i] = spec.amplitude * std::exp(-r2 / s2);
      }
      return f;
    }
    case InitialDataSpec::Kind::Constant:
      std::fill(f.values.begin(), f.values.end(), spec.value);
      return f;
    case InitialDataSpec::Kind::File: {
      Field g = read_field_binary(spec.path);
      if (!(g.grid == grid))
        throw ValidationError("initial data file grid does not match the run grid");
      return g;
    }
  }
  throw ValidationError("initial data: unknown kind");
}

void validate_system(const VectorFieldSystem& sys) {
  for (int i = 0; i < sys.num_fields(); ++i) {
    if (!check_homogeneity(sys.field(i), sys.weights(), 1)) {
      std::ostringstream msg;
      msg << "system refused: field " << (i + 1) << " (" << sys.field(i).str()
          << ") is not homogeneous of degree 1 for weights (";
      for (int d = 0; d < sys.dim(); ++d) msg << (d ? "," : "") << sys.weights().sigma[d];
      msg << ")";
      throw ValidationError(msg.str());
    }
  }
  const int cap = sys.weights().max_weight();
  auto rk = hormander_rank(sys, std::vector<Rational>(sys.dim(), 0), cap);
  if (rk.rank != sys.dim()) {
    std::ostringstream msg;
    msg << "system refused: rank condition fails at 0 (rank " << rk.rank << " of " << sys.dim()
        << " within bracket length " << cap << ")";
    throw ValidationError(msg.str());
  }
}

namespace {

struct ResolvedSystem {
  std::shared_ptr<VectorFieldSystem> system;
  std::optional<Preset> preset;
  GridSpec sim_grid;
  std::string label;
};

ResolvedSystem resolve(const ExperimentConfig& cfg) {
  ResolvedSystem r;
  if (!cfg.preset.empty()) {
    Preset p = resolve_preset(cfg.preset);
    r.system = p.system;
    r.sim_grid = cfg.grid ? *cfg.grid : p.sim_grid;
    r.label = p.name;
    r.preset = std::move(p);
  } else {
    r.system = std::make_shared<VectorFieldSystem>(parse_system_file(cfg.system_file));
    if (!cfg.grid)
      throw ValidationError("config: explicit 'grid' required with 'system_file'");
    r.sim_grid = *cfg.grid;
    r.label = cfg.system_file;
  }
  return r;
}

SystemDiagnostics compute_diagnostics(const ResolvedSystem& rs) {
  SystemDiagnostics d;
  const auto& sys = *rs.system;
  auto hd = homogeneous_dimension(sys.weights());
  d.q = hd.q;
  d.alpha_fujita_exact = to_string(hd.alpha_fujita);
  d.alpha_fujita = to_double(hd.alpha_fujita);
  const int cap = sys.weights().max_weight();
  auto rk = hormander_rank(sys, std::vector<Rational>(sys.dim(), 0), cap);
  d.rank = rk.rank;
  d.rank_step = rk.step_achieved;
  auto ld = lie_algebra_dimension(sys, cap);
  d.lie_dim = ld.n_dim;
  d.needs_lifting = ld.needs_lifting;

  if (rs.preset) {
    SolverConfig scfg;
    auto L = assemble_operator(sys, rs.preset->decay_grid);
    Field delta = mollified_delta(rs.preset->decay_grid, std::vector<double>(sys.dim(), 0.0));
    d.decay_slope = decay_exponent(L, delta, rs.preset->decay_times, scfg).slope;

    auto graph = build_reach_graph(sys, rs.preset->cc_grid, rs.preset->cc_grid.h(0));
    d.volume_exponent =
        volume_growth_exponent(graph, std::vector<double>(sys.dim(), 0.0), rs.preset->cc_radii)
            .exponent;
  }
  return d;
}

}  // namespace

ExperimentRecord run_scenario(const ExperimentConfig& cfg,
                              std::shared_ptr<SystemDiagnostics> shared) {
  ExperimentRecord rec;
  rec.config_hash = cfg.config_hash();
  rec.alpha = cfg.alpha;
  rec.amplitude = cfg.initial_data.amplitude;

  ResolvedSystem rs = resolve(cfg);
  rec.preset = rs.label;
  validate_system(*rs.system);

  if (shared && shared->q != 0) {
    rec.diag = *shared;
  } else {
    rec.diag = compute_diagnostics(rs);
    if (shared) *shared = rec.diag;
  }

  auto L = assemble_operator(*rs.system, rs.sim_grid);
  Field u0 = make_initial_data(cfg.initial_data, rs.sim_grid);
  Nonlinearity f = cfg.make_nonlinearity();
  TimeWeight phi = cfg.make_time_weight();
  SolverConfig scfg;

  // certificates on the pre-contamination window
  SupTrace trace = sup_trace(L, u0, cfg.certify_horizon, cfg.certify_samples, scfg);
  auto cert = smallness_certificate(trace, cfg.alpha, cfg.a_const, rec.diag.q,
                                    cfg.certify_t_split);
  rec.smallness_value = cert.value;
  rec.smallness_tail = cert.tail;
  rec.smallness_satisfied = cert.satisfied;
  auto env = barrier_envelope(trace, cfg.alpha, cfg.a_const);
  rec.envelope_residual = env.identity_residual;
  rec.envelope_final = env.chi.empty() ? 0.0 : env.chi.back();

  auto nec = necessary_condition_certificate(
      L, u0, cfg.alpha, cfg.b_const,
      geomspace(cfg.necessary_from, cfg.necessary_to, cfg.necessary_count), scfg);
  rec.necessary_max = nec.max_value;
  rec.necessary_violated = nec.violated;

  auto div = divergence_classification(phi, f, cfg.divergence_omega, rec.diag.q,
                                       cfg.divergence_horizon);
  rec.divergence_class = to_string(div.verdict());

  auto rep = blow_up_simulate(L, u0, f, phi, cfg.threshold_factor * u0.sup_norm(), cfg.horizon,
                              scfg);
  switch (rep.verdict) {
    case BlowUpReport::Verdict::BlowUp:
      rec.verdict = "blow_up";
      rec.t_blowup = rep.t_blowup;
      break;
    case BlowUpReport::Verdict::Bounded:
      rec.verdict = "bounded";
      break;
    case BlowUpReport::Verdict::Inconclusive:
      rec.verdict = "inconclusive";
      break;
  }
  rec.sup_final = rep.sup_final;
  rec.sup_trace = rep.sup_samples;

  // consistency: a blow-up verdict should normally come with a violated
  // necessary condition; discretization can trip earlier, so log only
  if (rec.verdict == "blow_up" && !rec.necessary_violated)
    rec.error = "note: blow-up verdict without a violated necessary condition (flag for review)";
  return rec;
}

SweepResult sweep(const ExperimentConfig& cfg, int jobs) {
  if (cfg.sweep_alpha.empty())
    throw ValidationError("sweep: empty alpha axis");
  std::vector<double> alphas = cfg.sweep_alpha;
  std::vector<double> amps =
      cfg.sweep_amplitude.empty() ? std::vector<double>{cfg.initial_data.amplitude}
                                  : cfg.sweep_amplitude;
  auto dedupe = [](std::vector<double>& v, const char* axis) {
    std::vector<double> out;
    std::set<double> seen;
    for (double x : v) {
      if (seen.insert(x).second)
        out.push_back(x);
      else
        std::fprintf(stderr, "sweep: duplicate %s value %g dropped\n", axis, x);
    }
    v = std::move(out);
  };
  dedupe(alphas, "alpha");
  dedupe(amps, "amplitude");

  auto shared = std::make_shared<SystemDiagnostics>();
  {
    // fail fast on invalid systems and warm the diagnostics cache
    ResolvedSystem rs = resolve(cfg);
    validate_system(*rs.system);
    *shared = compute_diagnostics(rs);
  }

  struct Point {
    double alpha, amp;
  };
  std::vector<Point> points;
  for (double a : alphas)
    for (double m : amps) points.push_back({a, m});

  if (jobs <= 0) {
    jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs <= 0) jobs = 1;
    jobs = std::min(jobs, 4);
  }

  std::vector<ExperimentRecord> records(points.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= points.size()) break;
      ExperimentConfig point_cfg = cfg;
      point_cfg.alpha = points[i].alpha;
      point_cfg.initial_data.amplitude = points[i].amp;
      point_cfg.sweep_alpha.clear();
      point_cfg.sweep_amplitude.clear();
      try {
        records[i] = run_scenario(point_cfg, shared);
      } catch (const std::exception& e) {
        records[i].config_hash = point_cfg.config_hash();
        records[i].preset = cfg.preset.empty() ? cfg.system_file : cfg.preset;
        records[i].alpha = points[i].alpha;
        records[i].amplitude = points[i].amp;
        records[i].diag = *shared;
        records[i].verdict = "failed";
        records[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  SweepResult out;
  out.records = std::move(records);
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const ExperimentRecord& a, const ExperimentRecord& b) {
                     if (a.preset != b.preset) return a.preset < b.preset;
                     if (a.alpha != b.alpha) return a.alpha < b.alpha;
                     return a.amplitude < b.amplitude;
                   });

  // dichotomy bracket: all-amplitudes-blow below, some-amplitude-bounded above
  for (double a : alphas) {
    bool all_blow = true, some_bounded = false;
    for (const auto& r : out.records) {
      if (r.alpha != a) continue;
      if (r.verdict != "blow_up") all_blow = false;
      if (r.verdict == "bounded") some_bounded = true;
    }
    if (all_blow) {
      if (!out.bracket_lo || a > *out.bracket_lo) out.bracket_lo = a;
    }
    if (some_bounded) {
      if (!out.bracket_hi || a < *out.bracket_hi) out.bracket_hi = a;
    }
  }
  return out;
}

std::string resolve_output_dir(const std::string& dir) {
  if (!dir.empty() && dir.front() == '/') return dir;
  if (const char* root = std::getenv("SUBHEAT_OUTPUT_ROOT"))
    return std::string(root) + "/" + dir;
  return dir;
}

}  // namespace subheat
