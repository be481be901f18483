#include "subheat/harness.hpp"

#include "subheat/errors.hpp"
#include "subheat/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace subheat {

nlohmann::json ExperimentRecord::to_json() const {
  nlohmann::json j;
  j["config_hash"] = config_hash;
  j["preset"] = preset;
  j["alpha"] = alpha;
  j["amplitude"] = amplitude;
  j["q"] = diag.q;
  j["alpha_fujita"] = diag.alpha_fujita;
  j["alpha_fujita_exact"] = diag.alpha_fujita_exact;
  j["rank"] = diag.rank;
  if (diag.rank_step) j["rank_step"] = *diag.rank_step;
  j["lie_dim"] = diag.lie_dim;
  j["needs_lifting"] = diag.needs_lifting;
  j["decay_slope"] = diag.decay_slope;
  j["volume_exponent"] = diag.volume_exponent;
  j["verdict"] = verdict;
  if (t_blowup)
    j["t_blowup"] = *t_blowup;
  else
    j["t_blowup"] = nullptr;
  j["sup_final"] = sup_final;
  j["certificates"] = {
      {"smallness_value", smallness_value},
      {"smallness_tail", std::isfinite(smallness_tail) ? nlohmann::json(smallness_tail)
                                                       : nlohmann::json("infinite")},
      {"smallness_satisfied", smallness_satisfied},
      {"envelope_residual", envelope_residual},
      {"envelope_final", envelope_final},
      {"necessary_max", necessary_max},
      {"necessary_violated", necessary_violated},
      {"divergence_class", divergence_class},
  };
  j["sandwich_factor"] = sandwich_factor;
  if (!error.empty()) j["note"] = error;
  return j;
}

void emit_report(const std::vector<ExperimentRecord>& records, const SweepResult* sweep_info,
                 const std::string& out_dir) {
  if (records.empty()) throw ValidationError("emit_report: no records");
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  fs::create_directories(out_dir + "/records");

  std::ofstream csv(out_dir + "/summary.csv");
  if (!csv) throw ValidationError("emit_report: cannot write to " + out_dir);
  csv << "preset,alpha,alpha_F,q,verdict,t_blowup,smallness_value,envelope_residual,"
         "necessary_max,decay_slope,volume_exponent\n";
  for (const auto& r : records) {
    csv << r.preset << ',' << format_g(r.alpha) << ',' << format_g(r.diag.alpha_fujita) << ','
        << r.diag.q << ',' << r.verdict << ','
        << (r.t_blowup ? format_g(*r.t_blowup) : std::string()) << ','
        << format_g(r.smallness_value) << ',' << format_g(r.envelope_residual) << ','
        << format_g(r.necessary_max) << ',' << format_g(r.diag.decay_slope) << ','
        << format_g(r.diag.volume_exponent) << '\n';
  }
  if (sweep_info) {
    nlohmann::json s;
    s["bracket_lo"] =
        sweep_info->bracket_lo ? nlohmann::json(*sweep_info->bracket_lo) : nlohmann::json();
    s["bracket_hi"] =
        sweep_info->bracket_hi ? nlohmann::json(*sweep_info->bracket_hi) : nlohmann::json();
    std::ofstream bj(out_dir + "/dichotomy.json");
    bj << s.dump(2) << "\n";
  }

  char name[64];
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::snprintf(name, sizeof name, "/records/record_%03zu.json", i);
    std::ofstream rf(out_dir + name);
    rf << records[i].to_json().dump(2) << "\n";
  }

  std::ofstream traces(out_dir + "/traces.csv");
  traces << "record,preset,alpha,amplitude,t,sup\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (const auto& [t, s] : records[i].sup_trace)
      traces << i << ',' << records[i].preset << ',' << format_g(records[i].alpha) << ','
             << format_g(records[i].amplitude) << ',' << format_g(t) << ',' << format_g(s)
             << '\n';
  }
}

}  // namespace subheat
