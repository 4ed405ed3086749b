#include "ptl/integrator.hpp"

#include <cmath>
#include <string>

#include "ptl/errors.hpp"

namespace ptl {

void IntegratorConfig::validate() const {
  if (!std::isfinite(dt) || !(dt > 0.0)) throw ContractViolation("dt must be positive");
  if (!std::isfinite(t_final) || t_final < 0.0) {
    throw ContractViolation("t_final must be non-negative");
  }
  if (record_every < 1) throw ContractViolation("record_every must be >= 1");
}

namespace {

// Scratch buffers reused across steps of one run.
struct Rk4Workspace {
  explicit Rk4Workspace(std::size_t m) : k1(m), k2(m), k3(m), k4(m), tmp(m) {}
  std::vector<Complex> k1, k2, k3, k4, tmp;
};

bool finite(std::span<const Complex> psi) {
  for (const auto& a : psi) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
  }
  return true;
}

void rk4_in_place(std::vector<Complex>& psi, const LatticeParams& params,
                  double dt, Rk4Workspace& w) {
  const std::size_t m = psi.size();
  rhs_into(psi, params, w.k1);
  for (std::size_t i = 0; i < m; ++i) w.tmp[i] = psi[i] + 0.5 * dt * w.k1[i];
  rhs_into(w.tmp, params, w.k2);
  for (std::size_t i = 0; i < m; ++i) w.tmp[i] = psi[i] + 0.5 * dt * w.k2[i];
  rhs_into(w.tmp, params, w.k3);
  for (std::size_t i = 0; i < m; ++i) w.tmp[i] = psi[i] + dt * w.k3[i];
  rhs_into(w.tmp, params, w.k4);
  const double sixth = dt / 6.0;
  for (std::size_t i = 0; i < m; ++i) {
    psi[i] += sixth * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
  }
}

}  // namespace

LatticeState step(const LatticeState& state, const LatticeParams& params, double dt) {
  if (!std::isfinite(dt) || !(dt > 0.0)) throw ContractViolation("dt must be positive");
  check_compatible(state, params);
  Rk4Workspace w(state.size());
  LatticeState next = state;
  rk4_in_place(next.amplitudes, params, dt, w);
  if (!finite(next.amplitudes)) {
    throw IntegrationBlowUp("non-finite amplitude after step at t = " +
                                std::to_string(state.time),
                            state.time);
  }
  next.time = state.time + dt;
  return next;
}

Trajectory evolve(const LatticeState& initial, const LatticeParams& params,
                  const IntegratorConfig& cfg) {
  cfg.validate();
  params.validate();
  check_compatible(initial, params);

  Trajectory traj;
  traj.params = params;
  traj.times.push_back(initial.time);
  traj.states.push_back(initial);
  if (cfg.t_final == 0.0) return traj;

  // Step count chosen so the final step lands on t_final; times are formed
  // as t0 + i*dt rather than accumulated.
  const auto full_steps = static_cast<std::size_t>(std::floor(cfg.t_final / cfg.dt * (1.0 + 1e-12)));
  const double remainder = cfg.t_final - static_cast<double>(full_steps) * cfg.dt;
  const bool has_tail = remainder > 1e-12 * cfg.dt;
  const std::size_t total_steps = full_steps + (has_tail ? 1 : 0);

  Rk4Workspace w(initial.size());
  std::vector<Complex> psi = initial.amplitudes;
  for (std::size_t i = 1; i <= total_steps; ++i) {
    const bool last = i == total_steps;
    const double h = (has_tail && last) ? remainder : cfg.dt;
    const double t_prev = initial.time + static_cast<double>(i - 1) * cfg.dt;
    rk4_in_place(psi, params, h, w);
    if (!finite(psi)) {
      traj.blowup_time = t_prev;
      return traj;
    }
    if (last || i % cfg.record_every == 0) {
      const double t = last ? initial.time + cfg.t_final
                            : initial.time + static_cast<double>(i) * cfg.dt;
      traj.times.push_back(t);
      traj.states.push_back(LatticeState{psi, t});
    }
  }
  return traj;
}

double phase_derivative(const LatticeState& state, const LatticeParams& params, Site k) {
  check_compatible(state, params);
  const double n = state.occupation(k);
  if (n == 0.0) {
    throw ContractViolation("phase of site " + std::to_string(k.k) +
                            " is undefined at zero occupation");
  }
  const std::vector<Complex> dpsi = rhs(state, params);
  const Complex psi = state[k];
  const Complex d = dpsi[k.offset()];
  return (d.imag() * psi.real() - psi.imag() * d.real()) / n;
}

}  // namespace ptl
