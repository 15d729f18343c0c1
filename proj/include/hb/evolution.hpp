#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "hb/quantum_core.hpp"

// Trajectory generation under constant and time-dependent Hamiltonians,
// closure detection, and period search.
namespace hb {

struct ConstantSchedule {
  HermitianObservable hamiltonian;
};

/// H_t = e^{-iAt} H e^{iAt}.
struct RotatingFrameSchedule {
  HermitianObservable frame_generator;  // A
  HermitianObservable hamiltonian;      // H
};

/// Hermitian samples on a strictly increasing time grid; evaluated between
/// samples by linear interpolation.
struct SampledSchedule {
  std::vector<double> times;
  std::vector<Matrix> matrices;
};

using HamiltonianSchedule =
    std::variant<ConstantSchedule, RotatingFrameSchedule, SampledSchedule>;

int schedule_dim(const HamiltonianSchedule& schedule);
bool schedule_is_constant(const HamiltonianSchedule& schedule);
Matrix hamiltonian_at(const HamiltonianSchedule& schedule, double t);

inline constexpr double kMinStepFidelity = 0.5;
inline constexpr double kTolClosureAnalytic = 1e-8;
inline constexpr double kTolClosureIntegrated = 1e-5;

/// Time grid plus the state at each grid point. Consecutive fidelities stay
/// above kMinStepFidelity so discrete phase extraction is branch-unambiguous.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::shared_ptr<const HamiltonianSchedule> schedule;  // may be null

  double tau() const { return times.back(); }
  size_t size() const { return states.size(); }
};

/// Uniform grid over [0, t_end] with the given number of steps.
std::vector<double> uniform_grid(double t_end, int steps);

/// e^{-iHt} psi0 via the cached spectral decomposition.
StateVector evolve_constant(const HermitianObservable& hamiltonian,
                            const StateVector& psi0, double t);

/// Constant schedules use exact per-sample spectral evolution. Time-dependent
/// schedules use the exponential-midpoint rule U_k = exp(-i H(t_mid) dt) with
/// per-step renormalization (second order, unitary per step).
Trajectory evolve_schedule(const HamiltonianSchedule& schedule,
                           const StateVector& psi0,
                           const std::vector<double>& grid);

/// 1 - |<psi_0|psi_tau>|^2.
double closure_defect(const Trajectory& traj);

enum class PeriodKind { Periodic, Stationary, NotFound };

struct PeriodResult {
  PeriodKind kind = PeriodKind::NotFound;
  double period = 0.0;
};

/// Smallest t in (0, t_max] with closure defect below tol, under constant H.
/// Coarse scan sampling the fastest occupied Bohr frequency >= 20 times per
/// cycle, then golden-section refinement of the defect minimum to relative
/// precision 1e-10.
PeriodResult find_period(const HermitianObservable& hamiltonian,
                         const StateVector& psi0, double t_max, double tol);

}  // namespace hb
