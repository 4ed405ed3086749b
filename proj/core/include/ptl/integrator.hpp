#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ptl/lattice_model.hpp"

namespace ptl {

enum class Scheme { Rk4 };

struct IntegratorConfig {
  double dt = 1e-3;
  std::size_t record_every = 10;
  double t_final = 20.0;
  Scheme scheme = Scheme::Rk4;

  /// dt > 0, t_final >= 0, record_every >= 1, all finite.
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<LatticeState> states;
  LatticeParams params;
  /// Set when a step produced a non-finite amplitude; `states` then ends at
  /// the last finite snapshot.
  std::optional<double> blowup_time;

  bool complete() const noexcept { return !blowup_time.has_value(); }
  std::size_t size() const noexcept { return times.size(); }
};

/// One classical Runge-Kutta step of size dt. Throws IntegrationBlowUp if the
/// result is not finite, ContractViolation on dt <= 0 or size mismatch.
LatticeState step(const LatticeState& state, const LatticeParams& params, double dt);

/// Fixed-step RK4 from initial.time to initial.time + cfg.t_final, sampling
/// every cfg.record_every steps. The first and final states are always
/// recorded; the last step is shortened if t_final is not a multiple of dt.
/// A blow-up stops the run and returns the partial trajectory flagged via
/// blowup_time instead of throwing.
Trajectory evolve(const LatticeState& initial, const LatticeParams& params,
                  const IntegratorConfig& cfg);

/// Instantaneous d phi_k / dt = (Im(dpsi) Re(psi) - Im(psi) Re(dpsi)) / n_k
/// with dpsi from the equations of motion. Throws ContractViolation when
/// n_k == 0, where the phase is undefined.
double phase_derivative(const LatticeState& state, const LatticeParams& params, Site k);

}  // namespace ptl
