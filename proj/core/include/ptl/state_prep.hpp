#pragma once

// Initial conditions that make the two-site subsystem {kS, kS+1} of an open
// chain behave like the PT-symmetric dimer: the surrounding sites act as a
// reservoir whose currents j_L (left of the subsystem) and j_R (right of it)
// replace the gain, and at most two local loss/gain rates close the balance.
//
// Scenario rows, with j = 2 n0 gamma the subsystem current:
//
//   row | j_L | j_R | n0 gamma_kS | n0 gamma_kS+1
//   ----+-----+-----+-------------+---------------
//    1  | +j  | -j  |      0      |      2j
//    2  | +j  | +j  |      0      |       0
//    3  | -j  | +j  |    -2j      |       0
//    4  | -j  | -j  |    -2j      |      2j

#include <vector>

#include "ptl/lattice_model.hpp"
#include "ptl/tms_analytic.hpp"

namespace ptl {

enum class Scenario { Row1 = 1, Row2 = 2, Row3 = 3, Row4 = 4 };

struct ScenarioSigns {
  int left = 1;   // sign of j_L relative to j
  int right = 1;  // sign of j_R relative to j
};

/// Throws ContractViolation for rows outside 1..4.
Scenario scenario_from_row(int row);
int scenario_row(Scenario s) noexcept;
ScenarioSigns scenario_signs(Scenario s) noexcept;

/// Rows 1 and 2 need no gain site anywhere in the chain.
bool experimentally_accessible(Scenario s) noexcept;

enum class PrepRegime { Symmetric, Broken };

struct PrepSpec {
  Scenario scenario = Scenario::Row1;
  PrepRegime regime = PrepRegime::Symmetric;
  double gamma = 0.8;
  double hopping = 1.0;
  double n0 = 0.5;
  double nonlinearity = 0.0;
  std::size_t sites = 50;
  Site ks{25};
  Branch branch = Branch::Minus;  // broken regime only
  double global_phase = 0.0;

  /// Checks 2 <= kS <= M-2, J > 0, n0 >= 0, finiteness, and the regime
  /// condition on gamma. Throws ContractViolation / RegimeError.
  void validate() const;
};

/// kS = floor(M/2), the middle of the chain.
Site default_subsystem_site(std::size_t sites) noexcept;

struct Preparation {
  LatticeState state;
  LatticeParams params;
};

/// Local gain/loss rates: zero outside the subsystem, Table values at kS and
/// kS+1 (loss 4 gamma on kS+1 for rows 1 and 4, gain -4 gamma on kS for rows
/// 3 and 4).
std::vector<double> gamma_profile(const PrepSpec& spec);

/// Uniform occupations n0 with neighbour phase differences arcsin(s gamma/J),
/// s = s_left left of the subsystem, +1 across it, s_right to its right. The
/// subsystem phases are the dimer's (phi, -phi) plus `global_phase`.
Preparation prepare_pt_symmetric(const PrepSpec& spec);

/// Exponential occupation ladder with real phase steps of +/- pi/2. The
/// subsystem holds the dimer's broken-regime occupations; every link with
/// sign s multiplies the occupation by exp(-2 s Im z), z the complex arcsin
/// of the dimer state. Requires g = 0.
Preparation prepare_pt_broken(const PrepSpec& spec);

/// Dispatches on spec.regime.
Preparation prepare(const PrepSpec& spec);

}  // namespace ptl
