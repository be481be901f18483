#ifndef SUBHEAT_HARNESS_HPP
#define SUBHEAT_HARNESS_HPP

#include "subheat/reach_graph.hpp"
#include "subheat/semilinear.hpp"

#include <json.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace subheat {

/// Catalog entry: the system plus purpose-sized grids (simulation box sized
/// ~3x the default data support; kernel/decay/ball grids sized for their
/// resolution demands).
struct Preset {
  std::string name;
  std::shared_ptr<VectorFieldSystem> system;
  GridSpec sim_grid;
  GridSpec kernel_grid;
  GridSpec decay_grid;
  std::vector<double> decay_times;
  GridSpec cc_grid;
  std::vector<double> cc_radii;
  std::optional<GridSpec> cc_scaling_grid;  // for the dilation-ratio check
};

const std::vector<std::string>& preset_names();
Preset resolve_preset(const std::string& name);

struct InitialDataSpec {
  enum class Kind { Gaussian, Constant, File };
  Kind kind = Kind::Gaussian;
  std::vector<double> center;
  double width = 0.7;
  double amplitude = 0.5;
  double value = 1.0;     // constant kind
  std::string path;       // file kind
};

struct ExperimentConfig {
  int version = 1;
  std::string preset;       // exactly one of preset / system_file
  std::string system_file;
  std::optional<GridSpec> grid;
  double alpha = 2.0;
  double a_const = 1.0;
  double b_const = 1.0;
  std::string nonlinearity_kind = "power";  // or "tabulated"
  std::string nonlinearity_file;
  std::string time_weight_kind = "constant";
  double time_weight_value = 1.0;  // c or sigma
  std::string time_weight_file;
  InitialDataSpec initial_data;
  double horizon = 100.0;
  double threshold_factor = 1e6;
  int snapshots = 32;
  double certify_horizon = 10.0;
  int certify_samples = 256;
  double certify_t_split = 2.5;
  double necessary_from = 0.5, necessary_to = 50.0;
  int necessary_count = 25;
  double divergence_omega = 1.0;
  double divergence_horizon = 10.0;
  std::vector<double> sweep_alpha;
  std::vector<double> sweep_amplitude;
  std::string output_dir = "out";
  std::uint64_t seed = 1;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;  // canonical (sorted keys, defaults filled)
  std::string config_hash() const;

  Nonlinearity make_nonlinearity() const;
  TimeWeight make_time_weight() const;
};

/// Per-system measurements that do not depend on the swept parameters.
struct SystemDiagnostics {
  int q = 0;
  std::string alpha_fujita_exact;
  double alpha_fujita = 0.0;
  int rank = 0;
  std::optional<int> rank_step;
  int lie_dim = 0;
  bool needs_lifting = false;
  double decay_slope = 0.0;
  double volume_exponent = 0.0;
};

struct ExperimentRecord {
  std::string config_hash;
  std::string preset;
  double alpha = 0.0;
  double amplitude = 0.0;
  SystemDiagnostics diag;
  std::string verdict;  // blow_up | bounded | inconclusive | refused | failed
  std::optional<double> t_blowup;
  double sup_final = 0.0;
  double smallness_value = 0.0;
  double smallness_tail = 0.0;
  bool smallness_satisfied = false;
  double envelope_residual = 0.0;
  double envelope_final = 1.0;
  double sandwich_factor = 1.0;
  double necessary_max = 0.0;
  bool necessary_violated = false;
  std::string divergence_class;
  std::string error;  // for failed rows
  std::vector<std::pair<double, double>> sup_trace;

  nlohmann::json to_json() const;
};

/// Validates Assumption-style hypotheses: homogeneity of every generator at
/// degree 1 and full rank at the origin within the sigma_n bracket cap.
/// Throws ValidationError with a diagnostic when either fails.
void validate_system(const VectorFieldSystem& sys);

/// Full pipeline for one parameter point. `shared` caches the per-system
/// diagnostics across sweep points.
ExperimentRecord run_scenario(const ExperimentConfig& cfg,
                              std::shared_ptr<SystemDiagnostics> shared = nullptr);

struct SweepResult {
  std::vector<ExperimentRecord> records;
  // Fujita-dichotomy bracket over the alpha axis: largest alpha where every
  // amplitude blew up, smallest alpha where some amplitude stayed bounded.
  std::optional<double> bracket_lo;
  std::optional<double> bracket_hi;
};

SweepResult sweep(const ExperimentConfig& cfg, int jobs = 0);

/// summary.csv + records/*.json + traces.csv under out_dir.
void emit_report(const std::vector<ExperimentRecord>& records, const SweepResult* sweep_info,
                 const std::string& out_dir);

/// Applies SUBHEAT_OUTPUT_ROOT to relative paths.
std::string resolve_output_dir(const std::string& dir);

Field make_initial_data(const InitialDataSpec& spec, const GridSpec& grid);

}  // namespace subheat

#endif
