#pragma once

// Gauge-invariant bilinears of neighbouring amplitudes and the quantities
// derived from recorded trajectories. All pair observables are evaluated in
// rectangular form, which stays well-defined when an occupation vanishes:
//
//   c_{k,l} = 2 sqrt(n_k n_l) cos(phi_l - phi_k) = 2 Re(conj(psi_k) psi_l)
//   j_{k,l} = 2 J sqrt(n_k n_l) sin(phi_l - phi_k) = 2 J Im(conj(psi_k) psi_l)

#include <optional>
#include <span>
#include <vector>

#include "ptl/integrator.hpp"
#include "ptl/lattice_model.hpp"

namespace ptl {

double current(const LatticeState& state, Site k, Site l, double hopping);
double correlation(const LatticeState& state, Site k, Site l);

/// d n_k / dt = 2 Re(conj(psi_k) dpsi_k/dt) from the equations of motion.
std::vector<double> occupation_rates(const LatticeState& state,
                                     const LatticeParams& params);

/// Right-hand side of the continuity equation
/// d n_k/dt = j_{k-1,k} - j_{k,k+1} - gamma_k n_k, with j_{0,1} = j_{M,M+1} = 0.
std::vector<double> continuity_rates(const LatticeState& state,
                                     const LatticeParams& params);

enum class ObservableKind {
  Occupation,
  Current,
  Correlation,
  Phase,
  PhaseDerivative,
  TotalNorm,
};

struct ObservableSeries {
  std::vector<double> times;
  std::vector<double> values;
  ObservableKind kind = ObservableKind::Occupation;
  std::vector<Site> sites;  // empty for TotalNorm, two for pair observables
};

ObservableSeries occupation_series(const Trajectory& traj, Site k);
ObservableSeries current_series(const Trajectory& traj, Site k, Site l);
ObservableSeries correlation_series(const Trajectory& traj, Site k, Site l);
ObservableSeries total_norm_series(const Trajectory& traj);
/// Continuously unwrapped phase of site k across the recorded samples.
ObservableSeries phase_series(const Trajectory& traj, Site k);
ObservableSeries phase_derivative_series(const Trajectory& traj, Site k);

/// Shifts each sample by a multiple of 2 pi so consecutive jumps lie in
/// (-pi, pi].
std::vector<double> unwrap(std::span<const double> phases);

/// What the subsystem occupations are compared against: their initial value
/// (symmetric regime) or n_k(0) exp(rate t) (broken regime).
struct BreakdownReference {
  enum class Kind { ConstantN0, AnalyticExponential };
  Kind kind = Kind::ConstantN0;
  double rate = 0.0;

  static BreakdownReference constant() { return {}; }
  static BreakdownReference exponential(double rate) {
    return {Kind::AnalyticExponential, rate};
  }

  double factor(double t) const;
};

constexpr double kDefaultBreakdownEpsilon = 1e-3;

/// Largest relative deviation |n_k(t)/n_ref(t) - 1| over k in {kS, kS+1}
/// at sample i. Returns nullopt when the reference has underflowed.
std::optional<double> subsystem_deviation(const Trajectory& traj, Site ks,
                                          const BreakdownReference& ref,
                                          std::size_t i);

/// First recorded time at which the subsystem deviation exceeds epsilon, or
/// nullopt if it never does. In the exponential case the scan stops at the
/// first sample where n_ref(t) underflows below the smallest normal double.
std::optional<double> breakdown_time(const Trajectory& traj, Site ks,
                                     const BreakdownReference& ref,
                                     double epsilon = kDefaultBreakdownEpsilon);

/// Largest subsystem deviation over samples with t < until (all samples if
/// until is nullopt).
double peak_deviation(const Trajectory& traj, Site ks, const BreakdownReference& ref,
                      std::optional<double> until);

/// Least-squares slope of ln n_k(t) over the samples with t in [t0, t1].
/// Throws FitError if the window is empty, reversed, not inside the
/// trajectory, or holds a non-positive occupation.
double decay_rate_fit(const Trajectory& traj, Site k, double t0, double t1);

/// Same fit on raw (time, occupation) columns.
double log_linear_slope(std::span<const double> times,
                        std::span<const double> occupations, double t0, double t1);

}  // namespace ptl
