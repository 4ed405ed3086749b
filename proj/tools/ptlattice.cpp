// ptlattice: prepare, evolve and analyse PT-symmetric subsystem states in an
// open Bose lattice.
//
//   ptlattice run [--config FILE] [flags...]     single run (defaults: row 1, gamma 0.8, M 50)
//   ptlattice sweep FILE [--out DIR] [--jobs N]  batch of independent runs
//
// Exit codes: 0 success, 1 configuration error, 2 numerical blow-up.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ptl/driver.hpp"
#include "ptl/errors.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ptl::ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunFlags {
  std::string config;
  std::optional<int> scenario;
  std::optional<std::string> regime;
  std::optional<double> gamma;
  std::optional<double> g;
  std::optional<double> J;
  std::optional<std::size_t> sites;
  std::optional<std::size_t> ks;
  std::optional<double> n0;
  std::optional<std::string> branch;
  std::optional<double> global_phase;
  std::optional<double> t_final;
  std::optional<double> dt;
  std::optional<std::size_t> record_every;
  std::optional<double> epsilon;
  std::vector<double> fit_window;
  std::vector<std::size_t> pairs;
  std::vector<std::size_t> phase_sites;
  std::optional<std::string> out;
};

ptl::RunConfigPatch flags_patch(const RunFlags& f, const CLI::App& app) {
  ptl::RunConfigPatch p;
  p.scenario = f.scenario;
  try {
    if (f.regime) p.regime = ptl::parse_regime(*f.regime);
    if (f.branch) p.branch = ptl::parse_branch(*f.branch);
  } catch (const ptl::ContractViolation& e) {
    throw ptl::ConfigError(e.what());
  }
  p.gamma = f.gamma;
  p.nonlinearity = f.g;
  p.hopping = f.J;
  p.sites = f.sites;
  p.ks = f.ks;
  p.n0 = f.n0;
  p.global_phase = f.global_phase;
  p.t_final = f.t_final;
  p.dt = f.dt;
  p.record_every = f.record_every;
  p.epsilon = f.epsilon;
  if (app.count("--fit-window") > 0) p.fit_window = std::pair{f.fit_window[0], f.fit_window[1]};
  if (app.count("--pairs") > 0) p.pairs = f.pairs;
  if (app.count("--phase-sites") > 0) p.phase_sites = f.phase_sites;
  p.out = f.out;
  return p;
}

void add_run_flags(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--config", f.config, "JSON config file; flags override its values");
  cmd.add_option("--scenario", f.scenario, "Current configuration row 1..4");
  cmd.add_option("--regime", f.regime, "symmetric | broken");
  cmd.add_option("--gamma", f.gamma, "Gain-loss factor of the dimer");
  cmd.add_option("--g", f.g, "Nonlinearity");
  cmd.add_option("--J", f.J, "Hopping (default 1)");
  cmd.add_option("--sites", f.sites, "Number of lattice sites M");
  cmd.add_option("--ks", f.ks, "Left subsystem site (default M/2)");
  cmd.add_option("--n0", f.n0, "Subsystem reference occupation");
  cmd.add_option("--branch", f.branch, "plus | minus | decaying | growing (broken regime)");
  cmd.add_option("--global-phase", f.global_phase, "Common phase offset");
  cmd.add_option("--t-final", f.t_final, "Evolution time");
  cmd.add_option("--dt", f.dt, "RK4 step");
  cmd.add_option("--record-every", f.record_every, "Sampling stride in steps");
  cmd.add_option("--epsilon", f.epsilon, "Relative breakdown threshold");
  cmd.add_option("--fit-window", f.fit_window, "Rate fit window T0 T1")->expected(2);
  cmd.add_option("--pairs", f.pairs, "Left sites k of exported (k, k+1) pairs");
  cmd.add_option("--phase-sites", f.phase_sites, "Sites with exported phases");
  cmd.add_option("--out", f.out, "Output directory");
}

int do_run(const RunFlags& flags, const CLI::App& cmd) {
  ptl::RunConfigPatch patch;
  if (!flags.config.empty()) patch = ptl::parse_config_patch(read_file(flags.config));
  patch.merge(flags_patch(flags, cmd));
  const ptl::RunConfig cfg = ptl::resolve_config(patch);
  const ptl::RunResult result = ptl::run(cfg);

  const auto& s = result.summary;
  std::cout << "scenario " << s.scenario << ", " << ptl::to_string(s.regime)
            << ", gamma = " << s.gamma << ", M = " << s.sites << ", kS = " << s.ks.k << "\n";
  if (s.reference) {
    std::cout << "  reference c = " << s.reference->correlation
              << ", j = " << s.reference->current << "\n";
  }
  std::cout << "  mu = " << s.mu << ", mu~ = " << s.mu_tilde << "\n";
  std::cout << "  breakdown time: ";
  if (s.breakdown_time) {
    std::cout << *s.breakdown_time;
  } else {
    std::cout << "none";
  }
  std::cout << " (epsilon = " << s.epsilon << ")\n";
  for (const auto& r : s.fitted_rates) {
    std::cout << "  fitted rate n_" << r.site.k << ": " << r.value << "\n";
  }
  for (const auto& r : s.phase_derivative_mean) {
    std::cout << "  mean dphi/dt site " << r.site.k << ": " << r.value << "\n";
  }
  if (result.status == ptl::RunStatus::BlowUp) {
    std::cerr << "warning: integration produced non-finite values after t = "
              << *s.blowup_time << "; outputs are partial\n";
  }
  std::cout << "  wrote " << cfg.out_dir.string() << "/\n";
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PT-symmetric subsystem states in an open Bose lattice"};
  app.require_subcommand(1);

  RunFlags flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Prepare and evolve one configuration");
  add_run_flags(*run_cmd, flags);

  std::string sweep_file;
  std::string sweep_out = "ptlattice-sweep";
  unsigned jobs = 0;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run a batch of configurations");
  sweep_cmd->add_option("file", sweep_file, "Sweep JSON document")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory for all runs");
  sweep_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run_cmd) return do_run(flags, *run_cmd);
    const auto parsed = ptl::parse_sweep(read_file(sweep_file));
    const ptl::SweepResult result = ptl::sweep(parsed, sweep_out, jobs);
    for (const auto& item : result.items) {
      std::cout << item.name << ": " << item.status;
      if (!item.error.empty()) std::cout << " (" << item.error << ")";
      std::cout << "\n";
    }
    std::cout << "index: " << result.index.string() << "\n";
    return result.exit_code();
  } catch (const ptl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
