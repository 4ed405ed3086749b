#pragma once

// Closed-form stationary states of the PT-symmetric two-mode system (TMS)
//
//   i d/dt (psi_1, psi_2) = [[g|psi_1|^2 + i gamma, -J],
//                            [-J, g|psi_2|^2 - i gamma]] (psi_1, psi_2)
//
// in the symmetric (|gamma| < J), exceptional (|gamma| = J) and broken
// (|gamma| > J, g = 0 only) regimes. Amplitudes always follow the convention
// (sqrt(n0) e^{i phi}, sqrt(n0) e^{-i phi}); every observable is invariant
// under a global phase so the choice is a gauge.

#include <array>

#include "ptl/lattice_model.hpp"

namespace ptl {

enum class Regime { Symmetric, Broken, ExceptionalPoint };

/// Sign choice in mu = g n0 +/- sqrt(J^2 - gamma^2). In the broken regime
/// Minus is the decaying state (Im mu < 0) and Plus the growing one.
enum class Branch { Plus, Minus };

struct TmsParams {
  double n0 = 0.5;
  double gamma = 0.0;
  double hopping = 1.0;
  double nonlinearity = 0.0;
};

struct TmsSolution {
  std::array<Complex, 2> amplitudes{};
  Complex mu{};
  Regime regime = Regime::Symmetric;
  Branch branch = Branch::Minus;
  TmsParams params;
};

struct CharacteristicValues {
  double correlation = 0.0;  // c_{1,2}
  double current = 0.0;      // j_{1,2}
};

/// Stationary state for |gamma| <= J with mu = g n0 +/- sqrt(J^2 - gamma^2).
/// The Minus branch uses phi = -arcsin(gamma/J)/2; Plus uses the other sheet
/// phi = -(pi - arcsin(gamma/J))/2, which is what makes it an eigenvector.
/// |gamma| == J is tagged ExceptionalPoint (both branches coincide).
/// Throws RegimeError for |gamma| > J, ContractViolation for n0 < 0 or J <= 0.
TmsSolution pt_symmetric_state(double n0, double gamma, double hopping,
                               double nonlinearity, Branch branch = Branch::Minus);

/// A complex z with sin z = alpha. For |alpha| <= 1 this is the real arcsin
/// (branch ignored); for alpha > 1 it is pi/2 - i ln(alpha +/- sqrt(alpha^2-1)),
/// and the odd continuation for alpha < -1.
Complex complex_arcsin_branch(double alpha, Branch branch);

/// Broken-regime state (|gamma| > J, g = 0) obtained by continuing the phase
/// of the symmetric state into the complex plane. Occupations become
/// n0 (alpha -/+ sqrt(alpha^2-1)) and mu = -/+ i sqrt(gamma^2 - J^2).
/// Throws RegimeError for |gamma| <= J.
TmsSolution pt_broken_state(double n0, double gamma, double hopping,
                            Branch branch = Branch::Minus);

/// psi_i(t) = phi_i exp(-i mu t); negative t evolves backwards.
LatticeState evolve_analytic(const TmsSolution& sol, double t);

/// c = 2 n0 sqrt(1 - (gamma/J)^2), j = 2 n0 gamma. Throws RegimeError for
/// |gamma| > J.
CharacteristicValues characteristic_values(double n0, double gamma,
                                           double hopping);

/// Chemical potential of the two-site subsystem embedded in the lattice,
/// mu~ = g n0 +/- 2 sqrt(J^2 - gamma^2) with a complex root past the
/// exceptional point (Minus: Im mu~ <= 0).
Complex chemical_potential_embedded(double n0, double gamma, double hopping,
                                    double nonlinearity,
                                    Branch branch = Branch::Minus);

/// The TMS Hamiltonian evaluated at the solution's own amplitudes.
std::array<std::array<Complex, 2>, 2> tms_hamiltonian(const TmsSolution& sol);

}  // namespace ptl
