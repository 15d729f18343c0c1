#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "hb/bounds.hpp"

// Constructors for the worked scenario families plus a seeded generator of
// random periodic systems for property testing.
namespace hb {

/// Requested scenario is stationary (e.g. a qubit at a Bloch pole).
class StationaryScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BuiltScenario {
  HamiltonianSchedule schedule;
  StateVector psi0;
  double tau = 0.0;
  std::optional<double> theta_predicted;
};

/// Rabi vector along +z with length omega; initial Bloch vector at polar
/// angle phi, azimuth 0.
struct QubitScenario {
  double phi = M_PI / 2;    // in (0, pi)
  double omega = 1.0;       // > 0
  double trace_h = 0.0;
};

BuiltScenario build_qubit(const QubitScenario& s);

/// Diagonal Hamiltonian with commensurate eigenvalues levels[j] * omega,
/// levels strictly increasing integers; all three levels occupied.
struct QutritScenario {
  std::array<int, 3> levels = {0, 1, 2};
  double omega = 1.0;
  std::array<double, 3> amplitudes = {1.0 / 3, 1.0 / 3, 1.0 / 3};  // occupations
  std::array<double, 2> phases = {0.0, 0.0};  // relative phases of levels 1, 2
};

BuiltScenario build_qutrit(const QutritScenario& s);

enum class QutritBranch { BelowMiddle, AboveMiddle, EqualMiddle };

/// Winding integers and ML-quotient identities of a closed qutrit evolution
/// with all three levels occupied, recovered from the trajectory.
struct QutritAnalysis {
  std::array<long, 3> winding;  // n_0 > n_1 > n_2
  bool ordering_ok = false;
  QutritBranch branch = QutritBranch::BelowMiddle;
  double theta = 0.0;
  double tau = 0.0;
  double expected_energy = 0.0;
  double quotient_below = 0.0;
  double quotient_above = 0.0;
  // |lhs - rhs| of the printed identity for each quotient.
  double residual_below = 0.0;
  double residual_above = 0.0;
  bool below_equals_tau = false;
  bool above_equals_tau = false;
};

QutritAnalysis analyze_qutrit(const Trajectory& traj,
                              double tol_closure = kTolClosureIntegrated);

/// Rotating-frame qubit family with A = mu sin(chi) sz and
/// H = mu (sin(chi) sz - cos(chi) sx), mu = E / (1 - cos(chi)); the initial
/// state is the +1 eigenstate of sx and tau = pi / (E cot(chi/2)).
struct CounterexampleScenario {
  double energy_scale = 1.0;  // E > 0
  double chi = M_PI / 3;      // in (0, pi/2)
};

BuiltScenario build_counterexample(const CounterexampleScenario& s);

/// Seeded random periodic system: integer spectrum (units of base_omega)
/// conjugated by a random unitary, random state occupying every level, and
/// tau = 2*pi / (base_omega * gcd of occupied-level differences).
BuiltScenario random_periodic(int dim, std::uint64_t seed, double base_omega);

/// Witnesses found by grid search over integer qutrit spectra and amplitude
/// simplices for each saturation pattern of the ML quotients.
struct QutritWitnessSet {
  std::optional<QutritScenario> neither;
  std::optional<QutritScenario> below_only;
  std::optional<QutritScenario> above_only;
  std::optional<QutritScenario> both;
  // <H> = eps_1 special case, with winding gap n_1 - n_2 equal to 1 and > 1.
  std::optional<QutritScenario> equal_middle_adjacent;
  std::optional<QutritScenario> equal_middle_gapped;

  bool complete() const {
    return neither && below_only && above_only && both &&
           equal_middle_adjacent && equal_middle_gapped;
  }
};

QutritWitnessSet search_qutrit_witnesses(int max_level = 6,
                                         double amplitude_step = 0.05);

}  // namespace hb
