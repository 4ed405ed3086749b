#include "ptl/state_prep.hpp"

#include <cmath>
#include <string>

#include "ptl/errors.hpp"

namespace ptl {

Scenario scenario_from_row(int row) {
  if (row < 1 || row > 4) {
    throw ContractViolation("scenario row must be 1..4, got " + std::to_string(row));
  }
  return static_cast<Scenario>(row);
}

int scenario_row(Scenario s) noexcept { return static_cast<int>(s); }

ScenarioSigns scenario_signs(Scenario s) noexcept {
  switch (s) {
    case Scenario::Row1: return {+1, -1};
    case Scenario::Row2: return {+1, +1};
    case Scenario::Row3: return {-1, +1};
    case Scenario::Row4: return {-1, -1};
  }
  return {};
}

bool experimentally_accessible(Scenario s) noexcept {
  return s == Scenario::Row1 || s == Scenario::Row2;
}

Site default_subsystem_site(std::size_t sites) noexcept { return Site{sites / 2}; }

void PrepSpec::validate() const {
  const int row = scenario_row(scenario);
  if (row < 1 || row > 4) throw ContractViolation("invalid scenario");
  if (!std::isfinite(gamma) || !std::isfinite(hopping) || !std::isfinite(n0) ||
      !std::isfinite(nonlinearity) || !std::isfinite(global_phase)) {
    throw ContractViolation("preparation parameters must be finite");
  }
  if (!(hopping > 0.0)) throw ContractViolation("J must be positive");
  if (n0 < 0.0) throw ContractViolation("n0 must be non-negative");
  if (sites < 4 || ks.k < 2 || ks.k + 2 > sites) {
    throw ContractViolation("subsystem site kS=" + std::to_string(ks.k) +
                            " needs 2 <= kS <= M-2 (M=" + std::to_string(sites) + ")");
  }
  if (regime == PrepRegime::Symmetric && std::abs(gamma) > hopping) {
    throw RegimeError("symmetric preparation requires |gamma| <= J");
  }
  if (regime == PrepRegime::Broken) {
    if (std::abs(gamma) <= hopping) {
      throw RegimeError("broken preparation requires |gamma| > J");
    }
    if (nonlinearity != 0.0) {
      throw ContractViolation("broken preparation is only defined for g = 0");
    }
  }
}

std::vector<double> gamma_profile(const PrepSpec& spec) {
  spec.validate();
  const auto [left, right] = scenario_signs(spec.scenario);
  // gamma_kS = (j_L - j) / n0 and gamma_kS+1 = (j - j_R) / n0 with j = 2 n0 gamma.
  std::vector<double> profile(spec.sites, 0.0);
  profile[spec.ks.offset()] = 2.0 * spec.gamma * (left - 1);
  profile[spec.ks.next().offset()] = 2.0 * spec.gamma * (1 - right);
  return profile;
}

namespace {

LatticeParams lattice_for(const PrepSpec& spec) {
  LatticeParams params = LatticeParams::uniform(spec.sites, spec.hopping, spec.nonlinearity);
  params.gain_loss = gamma_profile(spec);
  return params;
}

}  // namespace

Preparation prepare_pt_symmetric(const PrepSpec& spec) {
  spec.validate();
  if (spec.regime != PrepRegime::Symmetric) {
    throw RegimeError("prepare_pt_symmetric called with a broken-regime spec");
  }
  const auto [left, right] = scenario_signs(spec.scenario);
  const double alpha = spec.gamma / spec.hopping;
  const double step_left = std::asin(left * alpha);
  const double step_right = std::asin(right * alpha);
  const double phi = -0.5 * std::asin(alpha);

  const std::size_t m = spec.sites;
  const std::size_t ks = spec.ks.offset();
  std::vector<double> phases(m);
  phases[ks] = spec.global_phase + phi;
  phases[ks + 1] = spec.global_phase - phi;
  for (std::size_t i = ks; i-- > 0;) phases[i] = phases[i + 1] - step_left;
  for (std::size_t i = ks + 2; i < m; ++i) phases[i] = phases[i - 1] + step_right;

  const std::vector<double> occupations(m, spec.n0);
  return {from_polar(occupations, phases), lattice_for(spec)};
}

Preparation prepare_pt_broken(const PrepSpec& spec) {
  spec.validate();
  if (spec.regime != PrepRegime::Broken) {
    throw RegimeError("prepare_pt_broken called with a symmetric-regime spec");
  }
  const auto [left, right] = scenario_signs(spec.scenario);
  const TmsSolution dimer = pt_broken_state(spec.n0, spec.gamma, spec.hopping, spec.branch);

  // Across the subsystem psi_{kS+1} / psi_kS = e^{i z}; a link with the
  // opposite current sign carries e^{-i z}. Its modulus becomes the
  // occupation ladder and its argument (+/- pi/2) the real phase step.
  const Complex link = dimer.amplitudes[1] / dimer.amplitudes[0];
  const double ratio = std::norm(link);
  const double step = std::arg(link);
  auto occupation_factor = [&](int sign) { return sign > 0 ? ratio : 1.0 / ratio; };
  auto phase_step = [&](int sign) { return sign > 0 ? step : -step; };

  const std::size_t m = spec.sites;
  const std::size_t ks = spec.ks.offset();
  std::vector<double> occupations(m);
  std::vector<double> phases(m);
  occupations[ks] = std::norm(dimer.amplitudes[0]);
  occupations[ks + 1] = std::norm(dimer.amplitudes[1]);
  phases[ks] = spec.global_phase + std::arg(dimer.amplitudes[0]);
  phases[ks + 1] = spec.global_phase + std::arg(dimer.amplitudes[1]);
  for (std::size_t i = ks; i-- > 0;) {
    occupations[i] = occupations[i + 1] / occupation_factor(left);
    phases[i] = phases[i + 1] - phase_step(left);
  }
  for (std::size_t i = ks + 2; i < m; ++i) {
    occupations[i] = occupations[i - 1] * occupation_factor(right);
    phases[i] = phases[i - 1] + phase_step(right);
  }
  return {from_polar(occupations, phases), lattice_for(spec)};
}

Preparation prepare(const PrepSpec& spec) {
  return spec.regime == PrepRegime::Symmetric ? prepare_pt_symmetric(spec)
                                              : prepare_pt_broken(spec);
}

}  // namespace ptl
