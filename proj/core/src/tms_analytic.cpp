#include "ptl/tms_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ptl/errors.hpp"

namespace ptl {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_positive_hopping(double hopping) {
  if (!(hopping > 0.0) || !std::isfinite(hopping)) {
    throw ContractViolation("TMS requires finite J > 0");
  }
}

void require_occupation(double n0) {
  if (!(n0 >= 0.0) || !std::isfinite(n0)) {
    throw ContractViolation("n0 must be finite and non-negative");
  }
}

// Builds (sqrt(n0) e^{-i z/2}, sqrt(n0) e^{+i z/2}), i.e. phi = -z/2 with
// z a (possibly complex) solution of sin z = gamma/J, and the matching
// eigenvalue read off the first row of H phi = mu phi.
TmsSolution from_arcsin(double n0, const TmsParams& p, Complex z) {
  TmsSolution sol;
  sol.params = p;
  const double root = std::sqrt(n0);
  sol.amplitudes = {root * std::exp(-0.5 * kI * z), root * std::exp(0.5 * kI * z)};
  const double n1 = std::norm(sol.amplitudes[0]);
  sol.mu = p.nonlinearity * n1 + kI * p.gamma - p.hopping * std::exp(kI * z);
  return sol;
}

}  // namespace

Complex complex_arcsin_branch(double alpha, Branch branch) {
  const double a = std::abs(alpha);
  if (a <= 1.0) return {std::asin(alpha), 0.0};
  const double root = std::sqrt(a * a - 1.0);
  const double log_arg = branch == Branch::Plus ? a + root : a - root;
  const Complex z{std::numbers::pi / 2.0, -std::log(log_arg)};
  return alpha > 0.0 ? z : -z;
}

TmsSolution pt_symmetric_state(double n0, double gamma, double hopping,
                               double nonlinearity, Branch branch) {
  require_positive_hopping(hopping);
  require_occupation(n0);
  if (!std::isfinite(gamma) || !std::isfinite(nonlinearity)) {
    throw ContractViolation("gamma and g must be finite");
  }
  if (std::abs(gamma) > hopping) {
    throw RegimeError("|gamma| > J is PT-broken; use pt_broken_state");
  }
  const double alpha = gamma / hopping;
  const double theta = std::asin(alpha);
  // The second sheet pi - theta flips the sign of cos and hence of the
  // sqrt(J^2 - gamma^2) part of mu.
  const double z = branch == Branch::Minus ? theta : std::numbers::pi - theta;
  TmsSolution sol = from_arcsin(n0, {n0, gamma, hopping, nonlinearity}, z);
  sol.branch = branch;
  sol.regime = std::abs(gamma) == hopping ? Regime::ExceptionalPoint
                                          : Regime::Symmetric;
  // Closed form; the row-1 evaluation above only differs by rounding.
  const double split = std::sqrt(std::max(0.0, hopping * hopping - gamma * gamma));
  sol.mu = nonlinearity * n0 + (branch == Branch::Plus ? split : -split);
  return sol;
}

TmsSolution pt_broken_state(double n0, double gamma, double hopping,
                            Branch branch) {
  require_positive_hopping(hopping);
  require_occupation(n0);
  if (!std::isfinite(gamma)) throw ContractViolation("gamma must be finite");
  if (std::abs(gamma) <= hopping) {
    throw RegimeError("|gamma| <= J is not PT-broken; use pt_symmetric_state");
  }
  const double alpha = gamma / hopping;
  const TmsParams p{n0, gamma, hopping, 0.0};
  // Each arcsin sheet yields one of the two conjugate eigenvalues; pick the
  // one whose growth direction matches the requested branch.
  TmsSolution sol = from_arcsin(n0, p, complex_arcsin_branch(alpha, Branch::Plus));
  const bool decaying = sol.mu.imag() < 0.0;
  if (decaying != (branch == Branch::Minus)) {
    sol = from_arcsin(n0, p, complex_arcsin_branch(alpha, Branch::Minus));
  }
  const double rate = std::sqrt(gamma * gamma - hopping * hopping);
  sol.mu = Complex{0.0, branch == Branch::Minus ? -rate : rate};
  sol.branch = branch;
  sol.regime = Regime::Broken;
  return sol;
}

LatticeState evolve_analytic(const TmsSolution& sol, double t) {
  const Complex phase = std::exp(-kI * sol.mu * t);
  LatticeState state;
  state.time = t;
  state.amplitudes = {sol.amplitudes[0] * phase, sol.amplitudes[1] * phase};
  return state;
}

CharacteristicValues characteristic_values(double n0, double gamma,
                                           double hopping) {
  require_positive_hopping(hopping);
  if (std::abs(gamma) > hopping) {
    throw RegimeError("characteristic values are real only for |gamma| <= J");
  }
  const double alpha = gamma / hopping;
  return {2.0 * n0 * std::sqrt(std::max(0.0, 1.0 - alpha * alpha)),
          2.0 * n0 * gamma};
}

Complex chemical_potential_embedded(double n0, double gamma, double hopping,
                                    double nonlinearity, Branch branch) {
  require_positive_hopping(hopping);
  const double d = hopping * hopping - gamma * gamma;
  const Complex root = d >= 0.0 ? Complex{std::sqrt(d), 0.0}
                                : Complex{0.0, std::sqrt(-d)};
  const Complex base{nonlinearity * n0, 0.0};
  return branch == Branch::Plus ? base + 2.0 * root : base - 2.0 * root;
}

std::array<std::array<Complex, 2>, 2> tms_hamiltonian(const TmsSolution& sol) {
  const auto& p = sol.params;
  const double g = p.nonlinearity;
  return {{{g * std::norm(sol.amplitudes[0]) + kI * p.gamma, -p.hopping},
           {-p.hopping, g * std::norm(sol.amplitudes[1]) - kI * p.gamma}}};
}

}  // namespace ptl
