#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ptl/errors.hpp"
#include "ptl/lattice_model.hpp"
#include "ptl/observables.hpp"
#include "ptl/tms_analytic.hpp"

namespace ptl {
namespace {

TEST(Rhs, IsolatedSiteHasNoDynamics) {
  const LatticeParams p = LatticeParams::uniform(1, 1.0, 0.0);
  LatticeState s;
  s.amplitudes = {Complex{0.3, -0.7}};
  const auto d = rhs(s, p);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], Complex{});
}

TEST(Rhs, ZeroStateHasZeroDerivative) {
  oracle::Sampler rng(11);
  const LatticeParams p = rng.params(7);
  LatticeState s;
  s.amplitudes.assign(7, Complex{});
  for (const auto& d : rhs(s, p)) EXPECT_EQ(d, Complex{});
}

TEST(Rhs, DimerEigenstateRotatesWithMinusIMu) {
  const LatticeParams p = tms_as_lattice(0.8, 0.0, 1.0);
  const TmsSolution sol = pt_symmetric_state(0.5, 0.8, 1.0, 0.0, Branch::Minus);
  ASSERT_NEAR(sol.mu.real(), -0.6, 1e-15);
  const LatticeState s = evolve_analytic(sol, 0.0);
  const auto d = rhs(s, p);
  const Complex rotation{0.0, 0.6};
  double residual = 0.0;
  for (std::size_t k = 0; k < 2; ++k) residual += std::norm(d[k] - rotation * s.amplitudes[k]);
  EXPECT_LT(std::sqrt(residual), 1e-12);
}

TEST(Rhs, HardWallEndsSeeOnlyOneNeighbour) {
  LatticeParams p = LatticeParams::uniform(3, 1.0, 0.0);
  LatticeState s;
  s.amplitudes = {Complex{0.0}, Complex{1.0}, Complex{0.0}};
  const auto d = rhs(s, p);
  // i d psi_1/dt = -J psi_2 -> d psi_1/dt = i J psi_2.
  EXPECT_EQ(d[0], (Complex{0.0, 1.0}));
  EXPECT_EQ(d[2], (Complex{0.0, 1.0}));
  EXPECT_EQ(d[1], Complex{});
}

TEST(Rhs, DimensionMismatchIsAContractViolation) {
  const LatticeParams p = LatticeParams::uniform(3);
  LatticeState s;
  s.amplitudes.assign(4, Complex{1.0});
  EXPECT_THROW(rhs(s, p), ContractViolation);
}

TEST(LatticeParams, RejectsInvalidValues) {
  LatticeParams p = LatticeParams::uniform(3);
  p.hopping = -1.0;
  EXPECT_THROW(p.validate(), ContractViolation);
  p = LatticeParams::uniform(3);
  p.gain_loss[1] = std::nan("");
  EXPECT_THROW(p.validate(), ContractViolation);
  p = LatticeParams::uniform(3);
  p.onsite.pop_back();
  EXPECT_THROW(p.validate(), ContractViolation);
  EXPECT_THROW(LatticeParams::uniform(0), ContractViolation);
}

TEST(TmsAsLattice, MapsBalancedGainAndLoss) {
  const LatticeParams closed = tms_as_lattice(0.0, 0.0, 1.0);
  EXPECT_EQ(closed.sites, 2u);
  EXPECT_EQ(closed.gain_loss, (std::vector<double>{0.0, 0.0}));

  const LatticeParams p = tms_as_lattice(0.8, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(p.gain_loss[0], -1.6);
  EXPECT_DOUBLE_EQ(p.gain_loss[1], 1.6);
  EXPECT_EQ(p.onsite, (std::vector<double>{0.0, 0.0}));

  const LatticeParams q = tms_as_lattice(1.0, 0.5, 1.0);
  EXPECT_EQ(q.sites, 2u);
  EXPECT_EQ(q.nonlinearity, 0.5);

  EXPECT_THROW(tms_as_lattice(0.5, 0.0, 0.0), ContractViolation);
}

TEST(Occupation, SitesAndTotals) {
  const std::vector<double> n(50, 0.5), phi(50, 0.0);
  const LatticeState s = from_polar(n, phi);
  EXPECT_NEAR(site_occupation(s, Site{1}), 0.5, 1e-15);
  EXPECT_NEAR(site_occupation(s, Site{50}), 0.5, 1e-15);
  EXPECT_NEAR(total_norm(s), 25.0, 1e-13);

  LatticeState zero;
  zero.amplitudes.assign(4, Complex{});
  EXPECT_EQ(total_norm(zero), 0.0);

  LatticeState one;
  one.amplitudes = {Complex{1.0, 1.0} / std::sqrt(2.0)};
  EXPECT_NEAR(site_occupation(one, Site{1}), 1.0, 1e-15);

  EXPECT_THROW(site_occupation(s, Site{0}), ContractViolation);
  EXPECT_THROW(site_occupation(s, Site{51}), ContractViolation);
}

TEST(FromPolar, BuildsDimerStateAndRoundTrips) {
  const double phi = -0.5 * std::asin(0.8);
  EXPECT_NEAR(phi, -0.463647609000806116, 1e-15);
  const std::vector<double> n{0.5, 0.5}, ph{phi, -phi};
  const LatticeState s = from_polar(n, ph);
  const TmsSolution sol = pt_symmetric_state(0.5, 0.8, 1.0, 0.0);
  EXPECT_LT(std::abs(s.amplitudes[0] - sol.amplitudes[0]), 1e-15);
  EXPECT_LT(std::abs(s.amplitudes[1] - sol.amplitudes[1]), 1e-15);

  const LatticeState unit = from_polar(std::vector<double>{1.0}, std::vector<double>{0.0});
  EXPECT_EQ(unit.amplitudes[0], Complex{1.0});

  const LatticeState empty_site = from_polar(std::vector<double>{0.0, 1.0},
                                             std::vector<double>{2.3, 0.0});
  EXPECT_EQ(empty_site.amplitudes[0], Complex{});

  EXPECT_THROW(from_polar(std::vector<double>{-0.1}, std::vector<double>{0.0}),
               ContractViolation);
  EXPECT_THROW(from_polar(std::vector<double>{0.1, 0.2}, std::vector<double>{0.0}),
               ContractViolation);
}

TEST(FromPolarProperty, OccupationPhaseRoundTrip) {
  oracle::Sampler rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = rng.index(1, 12);
    std::vector<double> n(m), phi(m);
    for (std::size_t k = 0; k < m; ++k) {
      n[k] = rng.uniform(1e-6, 3.0);
      phi[k] = rng.uniform(-std::numbers::pi + 1e-9, std::numbers::pi);
    }
    const LatticeState s = from_polar(n, phi);
    const auto n2 = s.occupations();
    const auto phi2 = s.phases();
    for (std::size_t k = 0; k < m; ++k) {
      EXPECT_NEAR(n2[k], n[k], 1e-12 * std::max(1.0, n[k]));
      EXPECT_NEAR(phi2[k], phi[k], 1e-12);
    }
  }
}

// d n_k/dt from the equations of motion equals the continuity form
// j_{k-1,k} - j_{k,k+1} - gamma_k n_k, and both match a finite-difference
// estimate built from an independent copy of the equations.
TEST(ContinuityProperty, RandomStates) {
  oracle::Sampler rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = rng.index(1, 20);
    const LatticeParams p = rng.params(m);
    const LatticeState s = rng.state(m);
    const auto from_rhs = occupation_rates(s, p);
    const auto from_currents = continuity_rates(s, p);
    const auto from_fd = oracle::occupation_rates_fd(s.amplitudes, p);
    for (std::size_t k = 0; k < m; ++k) {
      EXPECT_NEAR(from_rhs[k], from_currents[k], 1e-10);
      EXPECT_NEAR(from_rhs[k], from_fd[k], 1e-6);
    }
  }
}

TEST(NormProperty, ClosedChainHasZeroNormDerivative) {
  oracle::Sampler rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = rng.index(1, 30);
    const LatticeParams p = rng.params(m, /*closed=*/true);
    const LatticeState s = rng.state(m);
    double total = 0.0;
    for (double r : occupation_rates(s, p)) total += r;
    EXPECT_NEAR(total, 0.0, 1e-12);
  }
}

TEST(GaugeProperty, GlobalPhaseLeavesObservablesUnchanged) {
  oracle::Sampler rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = rng.index(2, 15);
    const LatticeParams p = rng.params(m);
    const LatticeState s = rng.state(m);
    LatticeState rotated = s;
    const Complex u = std::polar(1.0, rng.uniform(-10.0, 10.0));
    for (auto& a : rotated.amplitudes) a *= u;
    const auto r0 = occupation_rates(s, p);
    const auto r1 = occupation_rates(rotated, p);
    for (std::size_t k = 0; k < m; ++k) EXPECT_NEAR(r0[k], r1[k], 1e-12);
    for (std::size_t k = 1; k < m; ++k) {
      const Site a{k}, b{k + 1};
      EXPECT_NEAR(current(s, a, b, p.hopping), current(rotated, a, b, p.hopping), 1e-12);
      EXPECT_NEAR(correlation(s, a, b), correlation(rotated, a, b), 1e-12);
    }
  }
}

}  // namespace
}  // namespace ptl
