#pragma once

// Scenario files, built-in presets, and the run/sweep drivers behind the CLI.
//
// A scenario is a JSON document:
//
//   {
//     "name": "fig2b",
//     "register": [{"label": "a", "dim": 2}, {"label": "b", "dim": 2}, ...],
//     "couplings": {"G1": -1.0, "G2": 0.2, "Gnv": 0.1},
//         or {"derive": {"g_o": .., "omega": .., "delta_o": .., "g_mu": .., "N": ..}, "Gnv": ..}
//     "channels": {"kappa_a": 0.1, "kappa_b": 0.001, "gamma_c": 0.04, "gamma_d": 0.01, "n_th": 0},
//     "initial_state": {"fock": {"a": 1}}
//         or {"superposition": [{"occupations": {"a": 0}, "amplitude": 0.7071067811865476},
//                               {"occupations": {"a": 1}, "amplitude": [re, im]}]},
//     "protocol": {"name": "swap" | "adiabatic" | "entanglement" | "entanglement_reversed" | "free", ...},
//     "integrator": {"dt": 0.001, "sample_every": 0.05},
//     "output": {"g_physical_MHz": 1.0}
//   }
//
// Protocol keys: adiabatic takes "pulse" {"amplitude", "center", "width"}, "duration" and
// "append_swap"; the entanglement protocols take "alpha"; free takes "duration" and
// "detunings" {"a": .., ...}. All numbers are in units of g (times in 1/g).

#include "transducer/metrics.hpp"
#include "transducer/protocols.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace transducer {

struct InitialStateSpec {
  struct Term {
    std::map<std::string, int> occupations;  // unlisted modes are empty
    Complex amplitude{1.0, 0.0};
  };
  std::vector<Term> terms{Term{{{kOptical, 1}}, 1.0}};

  bool is_fock() const { return terms.size() == 1; }
};

enum class ProtocolKind { Free, Swap, Adiabatic, Entanglement, EntanglementReversed };

std::string to_string(ProtocolKind kind);

struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::Swap;
  double alpha = 1 / std::numbers::sqrt2;
  GaussianPulse pulse{1.0, 3.0, 15.0};
  double duration = 6.0;
  bool append_swap = true;
  ModeDetunings detunings = ModeDetunings::Zero();
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::vector<std::pair<std::string, int>> modes{{kOptical, 2}, {kMicrowave, 2}, {kRedc, 2}, {kNv, 2}};
  EffectiveCouplings couplings;
  LindbladChannelSet channels;
  InitialStateSpec initial;
  ProtocolSpec protocol;
  double dt = 1e-3;
  double sample_every = 0.05;
  std::optional<double> g_physical_MHz;

  void validate() const;
  ModeRegister reg() const { return make_register(modes); }
  CouplingSchedule schedule() const;
  DensityMatrix initial_state() const;
};

/// Parse a scenario document. Syntax errors report line and column; semantic
/// errors name the offending key path.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// FNV-1a of the canonical JSON form.
std::string scenario_hash(const ScenarioConfig& config);

std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

struct Summary {
  std::string name;
  std::string hash;
  std::string protocol;
  double total_duration = 0;
  std::optional<double> duration_us;
  std::optional<double> peak_fidelity;
  std::optional<double> final_fidelity;
  std::optional<double> efficiency;
  std::optional<double> final_concurrence;
  std::optional<double> peak_concurrence;
  std::optional<double> max_redc_population;
  std::array<std::optional<double>, 4> final_populations;
  double max_trace_error = 0;
  double max_hermiticity_error = 0;
  double min_eigenvalue = 0;
  double excitation_drift = 0;
};

struct ScenarioResult {
  ScenarioConfig config;
  SimulationTrace trace;
  std::array<std::optional<MetricSeries>, 4> populations;  // a, b, c, d
  std::optional<MetricSeries> fidelity;
  std::optional<MetricSeries> concurrence_ad;
  Summary summary;
  double runtime_s = 0;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

/// Columns t,pop_a,pop_b,pop_c,pop_d,fidelity,concurrence_ad,trace_err; cells that do not
/// apply are left empty.
std::string trace_csv(const ScenarioResult& result);
nlohmann::json summary_json(const Summary& summary);

struct RunOverrides {
  std::optional<double> dt;
  std::optional<double> sample_every;

  void apply(ScenarioConfig& config) const;
};

std::vector<std::filesystem::path> write_outputs(const ScenarioResult& result, const std::filesystem::path& dir);

struct SweepRow {
  double value = 0;
  std::optional<double> peak_fidelity;
  std::optional<double> efficiency;
  std::optional<double> final_concurrence;
  double runtime_s = 0;
};

/// One run per value with `key_path` (dotted, e.g. "channels.gamma_c") overwritten, executed
/// concurrently. Results come back in input order.
std::vector<ScenarioResult> sweep_results(const nlohmann::json& base, const std::string& key_path,
                                         const std::vector<double>& values, const RunOverrides& overrides = {});

/// Summary rows of sweep_results.
std::vector<SweepRow> sweep(const nlohmann::json& base, const std::string& key_path, const std::vector<double>& values,
                            const RunOverrides& overrides = {});
std::string sweep_csv(const std::string& key_path, const std::vector<SweepRow>& rows);

std::vector<std::filesystem::path> run_preset(const std::string& name, const std::filesystem::path& out_dir,
                                              const RunOverrides& overrides = {});
std::vector<std::filesystem::path> run_config(const std::filesystem::path& config_path,
                                              const std::filesystem::path& out_dir,
                                              const RunOverrides& overrides = {});
std::filesystem::path run_sweep(const std::filesystem::path& config_path, const std::string& key_path,
                                const std::vector<double>& values, const std::filesystem::path& out_dir,
                                const RunOverrides& overrides = {});

}  // namespace transducer
