#include "ptl/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ptl/errors.hpp"

namespace ptl {

namespace {

void check_site(const LatticeState& state, Site s) {
  if (s.k < 1 || s.k > state.size()) {
    throw ContractViolation("site " + std::to_string(s.k) + " outside [1, " +
                            std::to_string(state.size()) + "]");
  }
}

Complex overlap(const LatticeState& state, Site k, Site l) {
  check_site(state, k);
  check_site(state, l);
  return std::conj(state[k]) * state[l];
}

}  // namespace

double current(const LatticeState& state, Site k, Site l, double hopping) {
  return 2.0 * hopping * overlap(state, k, l).imag();
}

double correlation(const LatticeState& state, Site k, Site l) {
  return 2.0 * overlap(state, k, l).real();
}

std::vector<double> occupation_rates(const LatticeState& state,
                                     const LatticeParams& params) {
  const std::vector<Complex> dpsi = rhs(state, params);
  std::vector<double> rates(state.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    rates[i] = 2.0 * (std::conj(state.amplitudes[i]) * dpsi[i]).real();
  }
  return rates;
}

std::vector<double> continuity_rates(const LatticeState& state,
                                     const LatticeParams& params) {
  check_compatible(state, params);
  const std::size_t m = state.size();
  std::vector<double> rates(m);
  for (std::size_t k = 1; k <= m; ++k) {
    const Site s{k};
    const double in = k > 1 ? current(state, Site{k - 1}, s, params.hopping) : 0.0;
    const double out = k < m ? current(state, s, s.next(), params.hopping) : 0.0;
    rates[k - 1] = in - out - params.gain_loss[k - 1] * state.occupation(s);
  }
  return rates;
}

namespace {

template <typename F>
ObservableSeries sample(const Trajectory& traj, ObservableKind kind,
                        std::vector<Site> sites, F&& f) {
  ObservableSeries series;
  series.kind = kind;
  series.sites = std::move(sites);
  series.times = traj.times;
  series.values.reserve(traj.states.size());
  for (const auto& state : traj.states) series.values.push_back(f(state));
  return series;
}

}  // namespace

ObservableSeries occupation_series(const Trajectory& traj, Site k) {
  return sample(traj, ObservableKind::Occupation, {k},
                [k](const LatticeState& s) { return s.occupation(k); });
}

ObservableSeries current_series(const Trajectory& traj, Site k, Site l) {
  const double J = traj.params.hopping;
  return sample(traj, ObservableKind::Current, {k, l},
                [=](const LatticeState& s) { return current(s, k, l, J); });
}

ObservableSeries correlation_series(const Trajectory& traj, Site k, Site l) {
  return sample(traj, ObservableKind::Correlation, {k, l},
                [=](const LatticeState& s) { return correlation(s, k, l); });
}

ObservableSeries total_norm_series(const Trajectory& traj) {
  return sample(traj, ObservableKind::TotalNorm, {},
                [](const LatticeState& s) { return s.total_norm(); });
}

ObservableSeries phase_series(const Trajectory& traj, Site k) {
  ObservableSeries raw = sample(traj, ObservableKind::Phase, {k}, [k](const LatticeState& s) {
    check_site(s, k);
    return s[k] == Complex{} ? 0.0 : std::arg(s[k]);
  });
  raw.values = unwrap(raw.values);
  return raw;
}

ObservableSeries phase_derivative_series(const Trajectory& traj, Site k) {
  const LatticeParams& params = traj.params;
  return sample(traj, ObservableKind::PhaseDerivative, {k},
                [&](const LatticeState& s) {
                  return s.occupation(k) > 0.0
                             ? phase_derivative(s, params, k)
                             : std::numeric_limits<double>::quiet_NaN();
                });
}

std::vector<double> unwrap(std::span<const double> phases) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> out(phases.begin(), phases.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = phases[i] - phases[i - 1];
    offset -= two_pi * std::round(jump / two_pi);
    out[i] = phases[i] + offset;
  }
  return out;
}

double BreakdownReference::factor(double t) const {
  return kind == Kind::ConstantN0 ? 1.0 : std::exp(rate * t);
}

std::optional<double> subsystem_deviation(const Trajectory& traj, Site ks,
                                          const BreakdownReference& ref,
                                          std::size_t i) {
  const LatticeState& initial = traj.states.front();
  const LatticeState& state = traj.states.at(i);
  const double f = ref.factor(traj.times[i] - traj.times.front());
  double worst = 0.0;
  for (Site s : {ks, ks.next()}) {
    const double n_ref = initial.occupation(s) * f;
    if (!(n_ref >= std::numeric_limits<double>::min())) return std::nullopt;
    worst = std::max(worst, std::abs(state.occupation(s) / n_ref - 1.0));
  }
  return worst;
}

std::optional<double> breakdown_time(const Trajectory& traj, Site ks,
                                     const BreakdownReference& ref, double epsilon) {
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto dev = subsystem_deviation(traj, ks, ref, i);
    if (!dev) return std::nullopt;  // underflow horizon
    if (*dev > epsilon) return traj.times[i];
  }
  return std::nullopt;
}

double peak_deviation(const Trajectory& traj, Site ks, const BreakdownReference& ref,
                      std::optional<double> until) {
  double peak = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (until && traj.times[i] >= *until) break;
    const auto dev = subsystem_deviation(traj, ks, ref, i);
    if (!dev) break;
    peak = std::max(peak, *dev);
  }
  return peak;
}

double log_linear_slope(std::span<const double> times,
                        std::span<const double> occupations, double t0, double t1) {
  if (times.size() != occupations.size()) throw FitError("column length mismatch");
  if (times.empty()) throw FitError("empty trajectory");
  if (!(t1 > t0)) throw FitError("fit window must satisfy t0 < t1");
  // Absorbs rounding in recorded sample times at the window edges.
  const double slack = 1e-9 * std::max(1.0, std::abs(times.back()));
  if (t0 < times.front() - slack || t1 > times.back() + slack) {
    throw FitError("fit window lies outside the trajectory");
  }
  double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t0 - slack || t > t1 + slack) continue;
    const double n = occupations[i];
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw FitError("non-positive occupation at t = " + std::to_string(t));
    }
    const double y = std::log(n);
    sum_t += t;
    sum_y += y;
    sum_tt += t * t;
    sum_ty += t * y;
    ++count;
  }
  if (count < 2) throw FitError("fewer than two samples in the fit window");
  const double c = static_cast<double>(count);
  const double denom = c * sum_tt - sum_t * sum_t;
  if (!(denom > 0.0)) throw FitError("degenerate fit window");
  return (c * sum_ty - sum_t * sum_y) / denom;
}

double decay_rate_fit(const Trajectory& traj, Site k, double t0, double t1) {
  const ObservableSeries n = occupation_series(traj, k);
  return log_linear_slope(n.times, n.values, t0, t1);
}

}  // namespace ptl
