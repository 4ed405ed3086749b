#include "ptl/lattice_model.hpp"

#include <cmath>
#include <string>

#include "ptl/errors.hpp"

namespace ptl {

namespace {

bool all_finite(std::span<const double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

LatticeParams LatticeParams::uniform(std::size_t sites, double hopping,
                                     double nonlinearity) {
  LatticeParams p;
  p.sites = sites;
  p.hopping = hopping;
  p.nonlinearity = nonlinearity;
  p.onsite.assign(sites, 0.0);
  p.gain_loss.assign(sites, 0.0);
  p.validate();
  return p;
}

void LatticeParams::validate() const {
  if (sites < 1) throw ContractViolation("lattice needs at least one site");
  if (onsite.size() != sites || gain_loss.size() != sites) {
    throw ContractViolation("onsite/gain_loss arrays must have length " +
                            std::to_string(sites));
  }
  if (!std::isfinite(hopping) || !std::isfinite(nonlinearity)) {
    throw ContractViolation("hopping and nonlinearity must be finite");
  }
  if (hopping < 0.0) throw ContractViolation("hopping J must be non-negative");
  if (!all_finite(onsite) || !all_finite(gain_loss)) {
    throw ContractViolation("onsite energies and gain/loss rates must be finite");
  }
}

double LatticeState::occupation(Site s) const {
  if (s.k < 1 || s.k > amplitudes.size()) {
    throw ContractViolation("site " + std::to_string(s.k) + " outside [1, " +
                            std::to_string(amplitudes.size()) + "]");
  }
  return std::norm(amplitudes[s.offset()]);
}

double LatticeState::total_norm() const noexcept {
  double total = 0.0;
  for (const auto& a : amplitudes) total += std::norm(a);
  return total;
}

std::vector<double> LatticeState::occupations() const {
  std::vector<double> n(amplitudes.size());
  for (std::size_t i = 0; i < n.size(); ++i) n[i] = std::norm(amplitudes[i]);
  return n;
}

std::vector<double> LatticeState::phases() const {
  std::vector<double> phi(amplitudes.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = amplitudes[i] == Complex{} ? 0.0 : std::arg(amplitudes[i]);
  }
  return phi;
}

double site_occupation(const LatticeState& state, Site s) {
  return state.occupation(s);
}

double total_norm(const LatticeState& state) noexcept {
  return state.total_norm();
}

LatticeState from_polar(std::span<const double> occupations,
                        std::span<const double> phases, double time) {
  if (occupations.size() != phases.size()) {
    throw ContractViolation("occupations and phases differ in length");
  }
  LatticeState state;
  state.time = time;
  state.amplitudes.resize(occupations.size());
  for (std::size_t i = 0; i < occupations.size(); ++i) {
    const double n = occupations[i];
    if (!std::isfinite(n) || n < 0.0) {
      throw ContractViolation("occupation at site " + std::to_string(i + 1) +
                              " must be finite and non-negative");
    }
    if (!std::isfinite(phases[i])) {
      throw ContractViolation("phase at site " + std::to_string(i + 1) +
                              " is not finite");
    }
    state.amplitudes[i] = std::polar(std::sqrt(n), phases[i]);
  }
  return state;
}

void rhs_into(std::span<const Complex> psi, const LatticeParams& params,
              std::span<Complex> out) noexcept {
  const std::size_t m = psi.size();
  const double J = params.hopping;
  const double g = params.nonlinearity;
  constexpr Complex minus_i{0.0, -1.0};
  for (std::size_t i = 0; i < m; ++i) {
    Complex neighbours{};
    if (i > 0) neighbours += psi[i - 1];
    if (i + 1 < m) neighbours += psi[i + 1];
    const Complex h_psi = -J * neighbours +
                          (g * std::norm(psi[i]) + params.onsite[i]) * psi[i];
    out[i] = minus_i * h_psi - 0.5 * params.gain_loss[i] * psi[i];
  }
}

void check_compatible(const LatticeState& state, const LatticeParams& params) {
  if (state.size() != params.sites || params.onsite.size() != params.sites ||
      params.gain_loss.size() != params.sites) {
    throw ContractViolation("state has " + std::to_string(state.size()) +
                            " sites but parameters describe " +
                            std::to_string(params.sites));
  }
}

std::vector<Complex> rhs(const LatticeState& state, const LatticeParams& params) {
  check_compatible(state, params);
  std::vector<Complex> out(state.size());
  rhs_into(state.amplitudes, params, out);
  return out;
}

LatticeParams tms_as_lattice(double gamma, double nonlinearity, double hopping) {
  if (!(hopping > 0.0)) throw ContractViolation("TMS requires J > 0");
  LatticeParams p = LatticeParams::uniform(2, hopping, nonlinearity);
  p.gain_loss = {-2.0 * gamma, 2.0 * gamma};
  p.validate();
  return p;
}

}  // namespace ptl
