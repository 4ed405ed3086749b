#pragma once

// Open one-dimensional Bose lattice in the discrete mean-field description:
//
//   i d/dt psi_k = -J psi_{k-1} - J psi_{k+1} + g |psi_k|^2 psi_k
//                  + mu_k psi_k - i (gamma_k / 2) psi_k
//
// with hard walls (psi_0 = psi_{M+1} = 0). Units hbar = m = 1. A positive
// gamma_k is a particle loss, a negative one a gain.

#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace ptl {

using Complex = std::complex<double>;

/// 1-based lattice site label k = 1..M, as used in the physics literature.
struct Site {
  std::size_t k = 1;

  constexpr std::size_t offset() const noexcept { return k - 1; }
  constexpr Site next() const noexcept { return Site{k + 1}; }
  friend constexpr auto operator<=>(Site, Site) = default;
};

struct LatticeParams {
  std::size_t sites = 1;
  double hopping = 1.0;       // J
  double nonlinearity = 0.0;  // g
  std::vector<double> onsite;     // mu_k, length M
  std::vector<double> gain_loss;  // gamma_k, length M

  /// Chain of `sites` sites with zero onsite energies and no gain or loss.
  static LatticeParams uniform(std::size_t sites, double hopping = 1.0,
                               double nonlinearity = 0.0);

  /// Throws ContractViolation unless M >= 1, both arrays have length M,
  /// J >= 0, and every value is finite.
  void validate() const;
};

struct LatticeState {
  std::vector<Complex> amplitudes;
  double time = 0.0;

  std::size_t size() const noexcept { return amplitudes.size(); }

  const Complex& operator[](Site s) const { return amplitudes[s.offset()]; }
  Complex& operator[](Site s) { return amplitudes[s.offset()]; }

  /// n_k = |psi_k|^2. Throws ContractViolation for a site outside [1, M].
  double occupation(Site s) const;

  /// Sum of all occupations.
  double total_norm() const noexcept;

  std::vector<double> occupations() const;

  /// Principal-value phases arg(psi_k) in (-pi, pi]; zero where psi_k == 0.
  std::vector<double> phases() const;
};

/// Free-function aliases of the LatticeState accessors.
double site_occupation(const LatticeState& state, Site s);
double total_norm(const LatticeState& state) noexcept;

/// psi_k = sqrt(n_k) exp(i phi_k). Throws ContractViolation on negative or
/// non-finite occupations, non-finite phases, or length mismatch.
LatticeState from_polar(std::span<const double> occupations,
                        std::span<const double> phases, double time = 0.0);

/// Writes d psi / dt into `out`. No validation; sizes must match params.sites.
void rhs_into(std::span<const Complex> psi, const LatticeParams& params,
              std::span<Complex> out) noexcept;

/// d psi_k / dt for every site. Throws ContractViolation on size mismatch.
std::vector<Complex> rhs(const LatticeState& state, const LatticeParams& params);

/// The non-Hermitian dimer with +i gamma on site 1 and -i gamma on site 2
/// written as a two-site lattice: gamma_1 = -2 gamma, gamma_2 = +2 gamma.
/// Requires J > 0.
LatticeParams tms_as_lattice(double gamma, double nonlinearity, double hopping);

/// Throws ContractViolation if the state does not fit the parameters.
void check_compatible(const LatticeState& state, const LatticeParams& params);

}  // namespace ptl
