#pragma once

// Run orchestration behind the `ptlattice` command: configuration parsing and
// validation, a single prepared-and-evolved run with CSV/JSON export, and
// independent batch sweeps.
//
// Config documents are JSON objects with the keys
//   scenario (1..4), regime ("symmetric"|"broken"), gamma, g, J, sites, ks,
//   n0, branch ("plus"|"minus"|"decaying"|"growing"), global_phase, t_final,
//   dt, record_every, epsilon, fit_window ([t0, t1]), pairs ([k...]),
//   phase_sites ([k...]), out, name.
// Missing keys take the defaults of default_run_config(); unknown keys are
// rejected. ks defaults to floor(sites/2).

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptl/integrator.hpp"
#include "ptl/state_prep.hpp"
#include "ptl/tms_analytic.hpp"

namespace ptl {

struct RunConfig {
  PrepSpec prep;
  IntegratorConfig integrator;
  double epsilon = 1e-3;
  double fit_start = 0.0;
  double fit_end = 5.0;
  /// Left sites k of the exported pairs (k, k+1). Default: {kS}.
  std::vector<Site> current_pairs;
  /// Sites whose phase and phase derivative are exported. Default: {kS, kS+1}.
  std::vector<Site> phase_sites;
  std::filesystem::path out_dir = "ptlattice-out";
  std::string name;

  /// Throws ConfigError naming the offending key.
  void validate() const;
};

/// Scenario 1, symmetric, gamma = 0.8, g = 0, J = 1, M = 50, kS = 25,
/// n0 = 0.5, t_final = 20, dt = 1e-3.
RunConfig default_run_config();

/// Partial configuration. Each field is set only when the source named it.
struct RunConfigPatch {
  std::optional<int> scenario;
  std::optional<PrepRegime> regime;
  std::optional<double> gamma;
  std::optional<double> nonlinearity;
  std::optional<double> hopping;
  std::optional<std::size_t> sites;
  std::optional<std::size_t> ks;
  std::optional<double> n0;
  std::optional<Branch> branch;
  std::optional<double> global_phase;
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<std::size_t> record_every;
  std::optional<double> epsilon;
  std::optional<std::pair<double, double>> fit_window;
  std::optional<std::vector<std::size_t>> pairs;
  std::optional<std::vector<std::size_t>> phase_sites;
  std::optional<std::string> out;
  std::optional<std::string> name;

  /// Source line of each key, for error messages (JSON sources only).
  std::map<std::string, std::size_t> key_lines;

  /// Fields set in `over` replace ours.
  void merge(const RunConfigPatch& over);
};

/// Parses a JSON config document. Syntax errors, unknown keys and wrongly
/// typed values throw ConfigError with the 1-based source line.
RunConfigPatch parse_config_patch(std::string_view json_text);

/// Applies the patch on top of default_run_config() and validates.
RunConfig resolve_config(const RunConfigPatch& patch);

/// parse_config_patch + resolve_config.
RunConfig parse_run_config(std::string_view json_text);

PrepRegime parse_regime(std::string_view text);
/// "plus"/"growing" -> Plus, "minus"/"decaying" -> Minus.
Branch parse_branch(std::string_view text);
std::string to_string(PrepRegime regime);
std::string to_string(Branch branch);

struct SiteValue {
  Site site;
  double value = 0.0;
};

struct RunSummary {
  int scenario = 1;
  bool experimentally_accessible = true;
  PrepRegime regime = PrepRegime::Symmetric;
  Branch branch = Branch::Minus;
  double gamma = 0.0;
  double hopping = 1.0;
  double nonlinearity = 0.0;
  double n0 = 0.0;
  std::size_t sites = 0;
  Site ks{};
  /// Dimer correlation/current (symmetric regime only).
  std::optional<CharacteristicValues> reference;
  Complex mu{};        // isolated dimer
  Complex mu_tilde{};  // embedded subsystem
  double tms_rate = 0.0;       // 2 Im mu
  double expected_rate = 0.0;  // 2 Im mu~
  double epsilon = 0.0;
  std::optional<double> breakdown_time;
  double peak_deviation = 0.0;
  double fit_start = 0.0;
  double fit_end = 0.0;
  std::vector<SiteValue> fitted_rates;
  std::optional<std::string> fit_error;
  std::vector<SiteValue> phase_derivative_initial;
  std::vector<SiteValue> phase_derivative_mean;  // over samples before breakdown
  double initial_total_norm = 0.0;
  std::optional<double> blowup_time;
  double t_end = 0.0;
};

enum class RunStatus { Ok = 0, ConfigError = 1, BlowUp = 2 };

struct RunResult {
  RunStatus status = RunStatus::Ok;
  RunSummary summary;
  Trajectory trajectory;
  std::filesystem::path trajectory_csv;
  std::filesystem::path summary_json;
  std::optional<std::filesystem::path> initial_profile_csv;

  int exit_code() const noexcept { return static_cast<int>(status); }
};

/// Prepares, evolves, analyses, and writes trajectory.csv, summary.json and
/// (broken regime) initial_profile.csv into cfg.out_dir. Invalid configs
/// throw ConfigError; a numerical blow-up yields status BlowUp with partial
/// outputs.
RunResult run(const RunConfig& cfg);

/// Computes everything run() does without touching the filesystem.
RunResult simulate(const RunConfig& cfg);

/// Serialization used by run(); exposed for tests and tools.
std::string summary_to_json(const RunSummary& summary, RunStatus status);
std::string trajectory_to_csv(const Trajectory& traj, const RunConfig& cfg);
std::string initial_profile_to_csv(const LatticeState& state, const LatticeParams& params);

/// One entry of a batch. Entries whose config failed to parse carry the
/// error instead and are reported without running.
struct SweepJob {
  std::string name;
  std::optional<RunConfig> config;
  std::string error;
};

struct SweepItem {
  std::string name;
  std::filesystem::path out_dir;
  std::string status;  // "ok", "blowup" or "error"
  int exit_code = 0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepItem> items;
  std::filesystem::path index;

  /// 0 if every run succeeded, otherwise the largest per-run exit code.
  int exit_code() const noexcept;
};

/// Parses {"defaults": {...}, "runs": [{...}, ...]} (or a bare array of run
/// objects). Per-run keys override defaults. Unnamed runs become run_000,
/// run_001, ... A malformed document throws ConfigError; a malformed run
/// only poisons its own job.
std::vector<SweepJob> parse_sweep(std::string_view json_text);

/// Runs each job into out_dir/<name>/ on up to `jobs` threads (0 = hardware
/// concurrency) and writes out_dir/index.json in job order.
SweepResult sweep(std::span<const SweepJob> jobs, const std::filesystem::path& out_dir,
                  unsigned threads = 0);

}  // namespace ptl
