#include "ptl/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "json.hpp"
#include "ptl/errors.hpp"
#include "ptl/observables.hpp"

namespace ptl {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config parsing

namespace {

std::size_t line_at(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Line of the first `"key"` that is followed by a colon.
std::optional<std::size_t> line_of_key(std::string_view text, const std::string& key) {
  if (text.empty()) return std::nullopt;
  const std::string quoted = "\"" + key + "\"";
  for (std::size_t pos = text.find(quoted); pos != std::string_view::npos;
       pos = text.find(quoted, pos + 1)) {
    std::size_t after = pos + quoted.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
    if (after < text.size() && text[after] == ':') return line_at(text, pos);
  }
  return std::nullopt;
}

class PatchReader {
 public:
  PatchReader(std::string_view text, RunConfigPatch& patch) : text_(text), patch_(patch) {}

  void read(const json& obj) {
    if (!obj.is_object()) throw ConfigError("config must be a JSON object", line_at(text_, 0));
    for (const auto& [key, value] : obj.items()) {
      key_ = key;
      line_ = line_of_key(text_, key);
      if (line_) patch_.key_lines[key] = *line_;
      assign(value);
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("\"" + key_ + "\" " + msg, line_);
  }

  double number(const json& v) const {
    if (!v.is_number()) fail("must be a number");
    return v.get<double>();
  }

  std::size_t count(const json& v) const {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_integer()) fail("must be non-negative");
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && std::floor(d) == d && d < 1e15) return static_cast<std::size_t>(d);
    }
    fail("must be a non-negative integer");
  }

  std::string text(const json& v) const {
    if (!v.is_string()) fail("must be a string");
    return v.get<std::string>();
  }

  std::vector<std::size_t> sites(const json& v) const {
    if (!v.is_array()) fail("must be an array of site numbers");
    std::vector<std::size_t> out;
    for (const auto& e : v) out.push_back(count(e));
    return out;
  }

  void assign(const json& v) {
    const std::string& k = key_;
    try {
      if (k == "scenario") {
        patch_.scenario = static_cast<int>(count(v));
      } else if (k == "regime") {
        patch_.regime = parse_regime(text(v));
      } else if (k == "gamma") {
        patch_.gamma = number(v);
      } else if (k == "g") {
        patch_.nonlinearity = number(v);
      } else if (k == "J") {
        patch_.hopping = number(v);
      } else if (k == "sites") {
        patch_.sites = count(v);
      } else if (k == "ks") {
        patch_.ks = count(v);
      } else if (k == "n0") {
        patch_.n0 = number(v);
      } else if (k == "branch") {
        patch_.branch = parse_branch(text(v));
      } else if (k == "global_phase") {
        patch_.global_phase = number(v);
      } else if (k == "t_final") {
        patch_.t_final = number(v);
      } else if (k == "dt") {
        patch_.dt = number(v);
      } else if (k == "record_every") {
        patch_.record_every = count(v);
      } else if (k == "epsilon") {
        patch_.epsilon = number(v);
      } else if (k == "fit_window") {
        if (!v.is_array() || v.size() != 2) fail("must be [t0, t1]");
        patch_.fit_window = std::pair{number(v[0]), number(v[1])};
      } else if (k == "pairs") {
        patch_.pairs = sites(v);
      } else if (k == "phase_sites") {
        patch_.phase_sites = sites(v);
      } else if (k == "out") {
        patch_.out = text(v);
      } else if (k == "name") {
        patch_.name = text(v);
      } else {
        fail("is not a recognised key");
      }
    } catch (const ContractViolation& e) {
      fail(e.what());
    }
  }

  std::string_view text_;
  RunConfigPatch& patch_;
  std::string key_;
  std::optional<std::size_t> line_;
};

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what(),
                      line_at(text, e.byte > 0 ? e.byte - 1 : 0));
  }
}

RunConfigPatch patch_from_json(const json& obj, std::string_view text) {
  RunConfigPatch patch;
  PatchReader(text, patch).read(obj);
  return patch;
}

struct KeyedProblem {
  std::string key;
  std::string message;
};

std::optional<KeyedProblem> find_problem(const RunConfig& cfg) {
  const PrepSpec& p = cfg.prep;
  const auto bad = [](const char* key, std::string msg) {
    return std::optional<KeyedProblem>{KeyedProblem{key, std::move(msg)}};
  };
  const int row = scenario_row(p.scenario);
  if (row < 1 || row > 4) return bad("scenario", "must be 1, 2, 3 or 4");
  if (!std::isfinite(p.gamma)) return bad("gamma", "must be finite");
  if (!std::isfinite(p.nonlinearity)) return bad("g", "must be finite");
  if (!std::isfinite(p.hopping) || !(p.hopping > 0.0)) return bad("J", "must be positive");
  if (!std::isfinite(p.n0) || p.n0 < 0.0) return bad("n0", "must be non-negative");
  if (!std::isfinite(p.global_phase)) return bad("global_phase", "must be finite");
  if (p.sites < 4) return bad("sites", "must be at least 4");
  if (p.ks.k < 2 || p.ks.k + 2 > p.sites) {
    return bad("ks", "must satisfy 2 <= ks <= sites - 2 (sites = " +
                         std::to_string(p.sites) + ")");
  }
  if (p.regime == PrepRegime::Symmetric && std::abs(p.gamma) > p.hopping) {
    return bad("gamma", "must satisfy |gamma| <= J in the symmetric regime");
  }
  if (p.regime == PrepRegime::Broken) {
    if (std::abs(p.gamma) <= p.hopping) {
      return bad("gamma", "must satisfy |gamma| > J in the broken regime");
    }
    if (p.nonlinearity != 0.0) return bad("g", "must be 0 in the broken regime");
  }
  const IntegratorConfig& ic = cfg.integrator;
  if (!std::isfinite(ic.dt) || !(ic.dt > 0.0)) return bad("dt", "must be positive");
  if (!std::isfinite(ic.t_final) || ic.t_final < 0.0) {
    return bad("t_final", "must be non-negative");
  }
  if (ic.record_every < 1) return bad("record_every", "must be at least 1");
  if (!std::isfinite(cfg.epsilon) || !(cfg.epsilon > 0.0)) {
    return bad("epsilon", "must be positive");
  }
  if (!std::isfinite(cfg.fit_start) || !std::isfinite(cfg.fit_end) ||
      !(cfg.fit_start < cfg.fit_end)) {
    return bad("fit_window", "must be [t0, t1] with t0 < t1");
  }
  for (Site s : cfg.current_pairs) {
    if (s.k < 1 || s.k >= p.sites) {
      return bad("pairs", "site " + std::to_string(s.k) + " has no right neighbour");
    }
  }
  for (Site s : cfg.phase_sites) {
    if (s.k < 1 || s.k > p.sites) {
      return bad("phase_sites", "site " + std::to_string(s.k) + " is outside the chain");
    }
  }
  return std::nullopt;
}

}  // namespace

PrepRegime parse_regime(std::string_view text) {
  if (text == "symmetric") return PrepRegime::Symmetric;
  if (text == "broken") return PrepRegime::Broken;
  throw ContractViolation("regime must be \"symmetric\" or \"broken\"");
}

Branch parse_branch(std::string_view text) {
  if (text == "plus" || text == "growing") return Branch::Plus;
  if (text == "minus" || text == "decaying") return Branch::Minus;
  throw ContractViolation("branch must be plus, minus, decaying or growing");
}

std::string to_string(PrepRegime regime) {
  return regime == PrepRegime::Symmetric ? "symmetric" : "broken";
}

std::string to_string(Branch branch) { return branch == Branch::Plus ? "plus" : "minus"; }

void RunConfigPatch::merge(const RunConfigPatch& over) {
  const auto take = [&](auto& mine, const auto& theirs, const char* key) {
    if (theirs) {
      mine = theirs;
      if (auto it = over.key_lines.find(key); it != over.key_lines.end()) {
        key_lines[key] = it->second;
      } else {
        key_lines.erase(key);
      }
    }
  };
  take(scenario, over.scenario, "scenario");
  take(regime, over.regime, "regime");
  take(gamma, over.gamma, "gamma");
  take(nonlinearity, over.nonlinearity, "g");
  take(hopping, over.hopping, "J");
  take(sites, over.sites, "sites");
  take(ks, over.ks, "ks");
  take(n0, over.n0, "n0");
  take(branch, over.branch, "branch");
  take(global_phase, over.global_phase, "global_phase");
  take(t_final, over.t_final, "t_final");
  take(dt, over.dt, "dt");
  take(record_every, over.record_every, "record_every");
  take(epsilon, over.epsilon, "epsilon");
  take(fit_window, over.fit_window, "fit_window");
  take(pairs, over.pairs, "pairs");
  take(phase_sites, over.phase_sites, "phase_sites");
  take(out, over.out, "out");
  take(name, over.name, "name");
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.prep = PrepSpec{};
  cfg.integrator = IntegratorConfig{};
  return cfg;
}

void RunConfig::validate() const {
  if (auto problem = find_problem(*this)) {
    throw ConfigError("\"" + problem->key + "\" " + problem->message);
  }
}

RunConfigPatch parse_config_patch(std::string_view json_text) {
  return patch_from_json(parse_json(json_text), json_text);
}

RunConfig resolve_config(const RunConfigPatch& patch) {
  RunConfig cfg = default_run_config();
  PrepSpec& p = cfg.prep;
  if (patch.scenario) {
    const int row = *patch.scenario;
    if (row < 1 || row > 4) {
      const auto it = patch.key_lines.find("scenario");
      throw ConfigError("\"scenario\" must be 1, 2, 3 or 4",
                        it == patch.key_lines.end() ? std::nullopt
                                                    : std::optional{it->second});
    }
    p.scenario = scenario_from_row(row);
  }
  if (patch.regime) p.regime = *patch.regime;
  if (patch.gamma) p.gamma = *patch.gamma;
  if (patch.nonlinearity) p.nonlinearity = *patch.nonlinearity;
  if (patch.hopping) p.hopping = *patch.hopping;
  if (patch.sites) p.sites = *patch.sites;
  p.ks = patch.ks ? Site{*patch.ks} : default_subsystem_site(p.sites);
  if (patch.n0) p.n0 = *patch.n0;
  if (patch.branch) p.branch = *patch.branch;
  if (patch.global_phase) p.global_phase = *patch.global_phase;
  if (patch.t_final) cfg.integrator.t_final = *patch.t_final;
  if (patch.dt) cfg.integrator.dt = *patch.dt;
  if (patch.record_every) cfg.integrator.record_every = *patch.record_every;
  if (patch.epsilon) cfg.epsilon = *patch.epsilon;
  if (patch.fit_window) std::tie(cfg.fit_start, cfg.fit_end) = *patch.fit_window;
  if (patch.pairs) {
    for (std::size_t k : *patch.pairs) cfg.current_pairs.push_back(Site{k});
  }
  if (patch.phase_sites) {
    for (std::size_t k : *patch.phase_sites) cfg.phase_sites.push_back(Site{k});
  }
  if (patch.out) cfg.out_dir = *patch.out;
  if (patch.name) cfg.name = *patch.name;

  if (!patch.pairs) cfg.current_pairs = {p.ks};
  if (!patch.phase_sites) cfg.phase_sites = {p.ks, p.ks.next()};

  if (auto problem = find_problem(cfg)) {
    const auto it = patch.key_lines.find(problem->key);
    throw ConfigError("\"" + problem->key + "\" " + problem->message,
                      it == patch.key_lines.end() ? std::nullopt
                                                  : std::optional{it->second});
  }
  return cfg;
}

RunConfig parse_run_config(std::string_view json_text) {
  return resolve_config(parse_config_patch(json_text));
}

// ---------------------------------------------------------------------------
// Single run

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json complex_json(Complex z) {
  ordered_json j;
  j["re"] = z.real();
  j["im"] = z.imag();
  return j;
}

ordered_json site_map(const std::vector<SiteValue>& values) {
  ordered_json out = ordered_json::object();
  for (const auto& sv : values) out[std::to_string(sv.site.k)] = sv.value;
  return out;
}

std::string status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::BlowUp: return "blowup";
    case RunStatus::ConfigError: return "error";
  }
  return "error";
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

RunResult simulate(const RunConfig& cfg) {
  cfg.validate();
  const PrepSpec& spec = cfg.prep;
  const Preparation prep = prepare(spec);

  RunResult result;
  result.trajectory = evolve(prep.state, prep.params, cfg.integrator);
  const Trajectory& traj = result.trajectory;
  result.status = traj.complete() ? RunStatus::Ok : RunStatus::BlowUp;

  RunSummary& s = result.summary;
  s.scenario = scenario_row(spec.scenario);
  s.experimentally_accessible = experimentally_accessible(spec.scenario);
  s.regime = spec.regime;
  s.gamma = spec.gamma;
  s.hopping = spec.hopping;
  s.nonlinearity = spec.nonlinearity;
  s.n0 = spec.n0;
  s.sites = spec.sites;
  s.ks = spec.ks;
  s.epsilon = cfg.epsilon;
  s.initial_total_norm = prep.state.total_norm();
  s.blowup_time = traj.blowup_time;
  s.t_end = traj.times.back();

  if (spec.regime == PrepRegime::Symmetric) {
    // The symmetric preparation realises the phase -arcsin(gamma/J)/2 of the
    // Minus branch.
    s.branch = Branch::Minus;
    s.reference = characteristic_values(spec.n0, spec.gamma, spec.hopping);
    s.mu = pt_symmetric_state(spec.n0, spec.gamma, spec.hopping, spec.nonlinearity,
                              Branch::Minus).mu;
  } else {
    s.branch = spec.branch;
    s.mu = pt_broken_state(spec.n0, spec.gamma, spec.hopping, spec.branch).mu;
  }
  s.mu_tilde = chemical_potential_embedded(spec.n0, spec.gamma, spec.hopping,
                                           spec.nonlinearity, s.branch);
  s.tms_rate = 2.0 * s.mu.imag();
  s.expected_rate = 2.0 * s.mu_tilde.imag();

  const BreakdownReference ref = spec.regime == PrepRegime::Symmetric
                                     ? BreakdownReference::constant()
                                     : BreakdownReference::exponential(s.expected_rate);
  s.breakdown_time = breakdown_time(traj, spec.ks, ref, cfg.epsilon);
  s.peak_deviation = peak_deviation(traj, spec.ks, ref, s.breakdown_time);

  s.fit_start = cfg.fit_start;
  s.fit_end = std::min(cfg.fit_end, s.t_end);
  try {
    for (Site k : {spec.ks, spec.ks.next()}) {
      s.fitted_rates.push_back({k, decay_rate_fit(traj, k, s.fit_start, s.fit_end)});
    }
  } catch (const FitError& e) {
    s.fitted_rates.clear();
    s.fit_error = e.what();
  }

  for (Site k : {spec.ks, spec.ks.next()}) {
    if (prep.state.occupation(k) == 0.0) continue;
    s.phase_derivative_initial.push_back({k, phase_derivative(prep.state, prep.params, k)});
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      if (s.breakdown_time && traj.times[i] >= *s.breakdown_time) break;
      if (traj.states[i].occupation(k) == 0.0) continue;
      sum += phase_derivative(traj.states[i], traj.params, k);
      ++count;
    }
    if (count > 0) s.phase_derivative_mean.push_back({k, sum / static_cast<double>(count)});
  }
  return result;
}

std::string summary_to_json(const RunSummary& s, RunStatus status) {
  ordered_json j;
  j["status"] = status_name(status);
  j["scenario"] = s.scenario;
  j["experimentally_accessible"] = s.experimentally_accessible;
  j["regime"] = to_string(s.regime);
  j["branch"] = to_string(s.branch);
  j["gamma"] = s.gamma;
  j["J"] = s.hopping;
  j["g"] = s.nonlinearity;
  j["n0"] = s.n0;
  j["sites"] = s.sites;
  j["ks"] = s.ks.k;
  if (s.reference) {
    j["reference"] = {{"c", s.reference->correlation}, {"j", s.reference->current}};
  } else {
    j["reference"] = nullptr;
  }
  j["mu"] = complex_json(s.mu);
  j["mu_tilde"] = complex_json(s.mu_tilde);
  j["tms_rate"] = s.tms_rate;
  j["expected_rate"] = s.expected_rate;
  j["breakdown"] = {{"epsilon", s.epsilon},
                    {"time", s.breakdown_time ? json(*s.breakdown_time) : json(nullptr)},
                    {"peak_deviation", s.peak_deviation}};
  ordered_json fit;
  fit["window"] = {s.fit_start, s.fit_end};
  fit["rates"] = site_map(s.fitted_rates);
  fit["error"] = s.fit_error ? json(*s.fit_error) : json(nullptr);
  j["fit"] = fit;
  j["phase_derivative"] = {{"initial", site_map(s.phase_derivative_initial)},
                           {"mean_before_breakdown", site_map(s.phase_derivative_mean)}};
  j["initial_total_norm"] = s.initial_total_norm;
  j["t_end"] = s.t_end;
  j["blowup_time"] = s.blowup_time ? json(*s.blowup_time) : json(nullptr);
  j["files"] = {{"trajectory", "trajectory.csv"},
                {"initial_profile", s.regime == PrepRegime::Broken ? json("initial_profile.csv")
                                                                   : json(nullptr)}};
  return j.dump(2) + "\n";
}

std::string trajectory_to_csv(const Trajectory& traj, const RunConfig& cfg) {
  const std::size_t m = traj.params.sites;
  const double J = traj.params.hopping;
  std::string out = "t";
  for (std::size_t k = 1; k <= m; ++k) out += ",n_" + std::to_string(k);
  for (Site k : cfg.current_pairs) {
    const std::string tag = std::to_string(k.k) + "_" + std::to_string(k.k + 1);
    out += ",j_" + tag + ",c_" + tag;
  }
  std::vector<std::vector<double>> unwrapped;
  std::vector<std::vector<double>> raw;
  for (Site k : cfg.phase_sites) {
    const std::string tag = std::to_string(k.k);
    out += ",phi_" + tag + ",phi_raw_" + tag + ",phidot_" + tag;
    unwrapped.push_back(phase_series(traj, k).values);
    std::vector<double> r;
    for (const auto& st : traj.states) r.push_back(st[k] == Complex{} ? 0.0 : std::arg(st[k]));
    raw.push_back(std::move(r));
  }
  out += '\n';

  for (std::size_t i = 0; i < traj.size(); ++i) {
    const LatticeState& st = traj.states[i];
    out += fmt17(traj.times[i]);
    for (const auto& a : st.amplitudes) out += "," + fmt17(std::norm(a));
    for (Site k : cfg.current_pairs) {
      out += "," + fmt17(current(st, k, k.next(), J));
      out += "," + fmt17(correlation(st, k, k.next()));
    }
    for (std::size_t p = 0; p < cfg.phase_sites.size(); ++p) {
      const Site k = cfg.phase_sites[p];
      const double phidot = st.occupation(k) > 0.0 ? phase_derivative(st, traj.params, k)
                                                   : std::nan("");
      out += "," + fmt17(unwrapped[p][i]) + "," + fmt17(raw[p][i]) + "," + fmt17(phidot);
    }
    out += '\n';
  }
  return out;
}

std::string initial_profile_to_csv(const LatticeState& state, const LatticeParams& params) {
  check_compatible(state, params);
  std::string out = "k,n,phi,gamma\n";
  const std::vector<double> phases = state.phases();
  for (std::size_t i = 0; i < state.size(); ++i) {
    out += std::to_string(i + 1) + "," + fmt17(std::norm(state.amplitudes[i])) + "," +
           fmt17(phases[i]) + "," + fmt17(params.gain_loss[i]) + "\n";
  }
  return out;
}

RunResult run(const RunConfig& cfg) {
  RunResult result = simulate(cfg);
  fs::create_directories(cfg.out_dir);
  result.trajectory_csv = cfg.out_dir / "trajectory.csv";
  result.summary_json = cfg.out_dir / "summary.json";
  write_file(result.trajectory_csv, trajectory_to_csv(result.trajectory, cfg));
  if (cfg.prep.regime == PrepRegime::Broken) {
    result.initial_profile_csv = cfg.out_dir / "initial_profile.csv";
    write_file(*result.initial_profile_csv,
               initial_profile_to_csv(result.trajectory.states.front(),
                                      result.trajectory.params));
  }
  write_file(result.summary_json, summary_to_json(result.summary, result.status));
  return result;
}

// ---------------------------------------------------------------------------
// Sweeps

int SweepResult::exit_code() const noexcept {
  int code = 0;
  for (const auto& item : items) code = std::max(code, item.exit_code);
  return code;
}

namespace {

bool safe_name(const std::string& name) {
  if (name.empty() || name == "." || name == "..") return false;
  return name.find_first_of("/\\") == std::string::npos;
}

std::string default_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03zu", i);
  return buf;
}

}  // namespace

std::vector<SweepJob> parse_sweep(std::string_view json_text) {
  const json doc = parse_json(json_text);
  json defaults = json::object();
  json runs;
  if (doc.is_array()) {
    runs = doc;
  } else if (doc.is_object()) {
    for (const auto& [key, value] : doc.items()) {
      if (key != "defaults" && key != "runs") {
        throw ConfigError("sweep document has unknown key \"" + key + "\"",
                          line_of_key(json_text, key));
      }
    }
    if (!doc.contains("runs") || !doc["runs"].is_array()) {
      throw ConfigError("sweep document needs a \"runs\" array", line_at(json_text, 0));
    }
    runs = doc["runs"];
    if (doc.contains("defaults")) {
      defaults = doc["defaults"];
      if (!defaults.is_object()) {
        throw ConfigError("\"defaults\" must be an object", line_of_key(json_text, "defaults"));
      }
    }
  } else {
    throw ConfigError("sweep document must be an object or array", line_at(json_text, 0));
  }

  std::vector<SweepJob> jobs;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    SweepJob job;
    job.name = default_name(i);
    try {
      if (!runs[i].is_object()) throw ConfigError("run entry must be an object");
      json merged = defaults;
      merged.update(runs[i]);
      RunConfigPatch patch = patch_from_json(merged, {});
      if (patch.name) job.name = *patch.name;
      if (!safe_name(job.name)) throw ConfigError("run name \"" + job.name + "\" is not a plain directory name");
      job.config = resolve_config(patch);
    } catch (const std::exception& e) {
      job.config.reset();
      job.error = std::string("run ") + std::to_string(i) + ": " + e.what();
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

SweepResult sweep(std::span<const SweepJob> jobs, const fs::path& out_dir, unsigned threads) {
  SweepResult result;
  result.items.resize(jobs.size());
  fs::create_directories(out_dir);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const SweepJob& job = jobs[i];
      SweepItem& item = result.items[i];
      item.name = job.name;
      item.out_dir = out_dir / job.name;
      if (!job.config) {
        item.status = "error";
        item.exit_code = static_cast<int>(RunStatus::ConfigError);
        item.error = job.error;
        continue;
      }
      try {
        RunConfig cfg = *job.config;
        cfg.out_dir = item.out_dir;
        const RunResult r = run(cfg);
        item.status = status_name(r.status);
        item.exit_code = r.exit_code();
        if (r.summary.blowup_time) {
          item.error = "non-finite state after t = " + fmt17(*r.summary.blowup_time);
        }
      } catch (const std::exception& e) {
        item.status = "error";
        item.exit_code = static_cast<int>(RunStatus::ConfigError);
        item.error = e.what();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, jobs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  ordered_json index;
  index["runs"] = ordered_json::array();
  for (const auto& item : result.items) {
    ordered_json e;
    e["name"] = item.name;
    e["out_dir"] = item.name;
    e["status"] = item.status;
    e["exit_code"] = item.exit_code;
    e["summary"] = item.status == "error" ? ordered_json(nullptr)
                                          : ordered_json(item.name + "/summary.json");
    e["error"] = item.error.empty() ? ordered_json(nullptr) : ordered_json(item.error);
    index["runs"].push_back(e);
  }
  result.index = out_dir / "index.json";
  write_file(result.index, index.dump(2) + "\n");
  return result;
}

}  // namespace ptl
