#include "hb/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace hb {

namespace {

Matrix hermitian_exp(const Matrix& hermitian, double factor) {
  // exp(i * factor * hermitian) for Hermitian input, via eigendecomposition.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  const Eigen::VectorXd& evals = solver.eigenvalues();
  Vector phases(evals.size());
  for (int k = 0; k < evals.size(); ++k) {
    phases[k] = std::polar(1.0, factor * evals[k]);
  }
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

void check_grid(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw std::invalid_argument("empty time grid");
  }
  if (std::abs(grid.front()) > 1e-15) {
    throw std::invalid_argument("time grid must start at 0");
  }
  for (size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] <= grid[k - 1]) {
      throw std::invalid_argument("time grid must be strictly increasing");
    }
  }
}

}  // namespace

int schedule_dim(const HamiltonianSchedule& schedule) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantSchedule>) {
          return s.hamiltonian.dim();
        } else if constexpr (std::is_same_v<T, RotatingFrameSchedule>) {
          if (s.frame_generator.dim() != s.hamiltonian.dim()) {
            throw DimensionMismatch("rotating frame: A and H dimensions differ");
          }
          return s.hamiltonian.dim();
        } else {
          if (s.times.empty() || s.times.size() != s.matrices.size()) {
            throw std::invalid_argument("sampled schedule: times/matrices mismatch");
          }
          return static_cast<int>(s.matrices.front().rows());
        }
      },
      schedule);
}

bool schedule_is_constant(const HamiltonianSchedule& schedule) {
  return std::holds_alternative<ConstantSchedule>(schedule);
}

Matrix hamiltonian_at(const HamiltonianSchedule& schedule, double t) {
  return std::visit(
      [t](const auto& s) -> Matrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantSchedule>) {
          return s.hamiltonian.matrix();
        } else if constexpr (std::is_same_v<T, RotatingFrameSchedule>) {
          const Matrix frame = hermitian_exp(s.frame_generator.matrix(), -t);
          return frame * s.hamiltonian.matrix() * frame.adjoint();
        } else {
          const auto& times = s.times;
          if (t <= times.front()) return s.matrices.front();
          if (t >= times.back()) return s.matrices.back();
          const auto it = std::upper_bound(times.begin(), times.end(), t);
          const size_t hi = static_cast<size_t>(it - times.begin());
          const size_t lo = hi - 1;
          const double w = (t - times[lo]) / (times[hi] - times[lo]);
          return (1.0 - w) * s.matrices[lo] + w * s.matrices[hi];
        }
      },
      schedule);
}

std::vector<double> uniform_grid(double t_end, int steps) {
  if (t_end <= 0.0 || steps < 1) {
    throw std::invalid_argument("uniform_grid: t_end and steps must be positive");
  }
  std::vector<double> grid(steps + 1);
  for (int k = 0; k <= steps; ++k) {
    grid[k] = t_end * static_cast<double>(k) / steps;
  }
  return grid;
}

StateVector evolve_constant(const HermitianObservable& hamiltonian,
                            const StateVector& psi0, double t) {
  if (hamiltonian.dim() != psi0.dim()) {
    throw DimensionMismatch("evolve_constant: dimension mismatch");
  }
  if (!std::isfinite(t)) {
    throw std::invalid_argument("evolve_constant: t must be finite");
  }
  const Vector coeffs = hamiltonian.eigenvectors().adjoint() * psi0.amplitudes();
  Vector rotated(coeffs.size());
  for (int k = 0; k < coeffs.size(); ++k) {
    rotated[k] = std::polar(1.0, -hamiltonian.eigenvalues()[k] * t) * coeffs[k];
  }
  return StateVector(hamiltonian.eigenvectors() * rotated);
}

Trajectory evolve_schedule(const HamiltonianSchedule& schedule,
                           const StateVector& psi0,
                           const std::vector<double>& grid) {
  check_grid(grid);
  if (schedule_dim(schedule) != psi0.dim()) {
    throw DimensionMismatch("evolve_schedule: dimension mismatch");
  }

  Trajectory traj;
  traj.times = grid;
  traj.schedule = std::make_shared<HamiltonianSchedule>(schedule);
  traj.states.reserve(grid.size());
  traj.states.push_back(psi0);

  if (const auto* constant = std::get_if<ConstantSchedule>(&schedule)) {
    const auto& h = constant->hamiltonian;
    const Vector coeffs = h.eigenvectors().adjoint() * psi0.amplitudes();
    Vector rotated(coeffs.size());
    for (size_t k = 1; k < grid.size(); ++k) {
      for (int j = 0; j < coeffs.size(); ++j) {
        rotated[j] = std::polar(1.0, -h.eigenvalues()[j] * grid[k]) * coeffs[j];
      }
      traj.states.push_back(StateVector(h.eigenvectors() * rotated));
    }
  } else {
    for (size_t k = 1; k < grid.size(); ++k) {
      const double dt = grid[k] - grid[k - 1];
      const double t_mid = 0.5 * (grid[k] + grid[k - 1]);
      const Matrix step = hermitian_exp(hamiltonian_at(schedule, t_mid), -dt);
      traj.states.push_back(StateVector(step * traj.states.back().amplitudes()));
    }
  }

  for (size_t k = 1; k < traj.states.size(); ++k) {
    if (traj.states[k - 1].fidelity(traj.states[k]) <= kMinStepFidelity) {
      throw std::runtime_error("evolve_schedule: grid too coarse, consecutive fidelity <= 0.5");
    }
  }
  return traj;
}

double closure_defect(const Trajectory& traj) {
  if (traj.states.empty()) {
    throw std::invalid_argument("closure_defect: empty trajectory");
  }
  const double defect = 1.0 - traj.states.front().fidelity(traj.states.back());
  return std::clamp(defect, 0.0, 1.0);
}

PeriodResult find_period(const HermitianObservable& hamiltonian,
                         const StateVector& psi0, double t_max, double tol) {
  if (t_max <= 0.0) {
    throw std::invalid_argument("find_period: t_max must be positive");
  }
  const OccupationProfile profile = occupation_profile(hamiltonian, psi0);
  if (profile.levels.size() < 2) {
    return {PeriodKind::Stationary, 0.0};
  }

  // Residual-norm form of the defect; 1 - |<psi0|psi_t>|^2 loses the
  // quadratic minimum to cancellation near machine precision.
  const auto defect_at = [&](double t) {
    const StateVector psi_t = evolve_constant(hamiltonian, psi0, t);
    const Vector residual =
        psi_t.amplitudes() -
        psi0.overlap(psi_t) * psi0.amplitudes();
    return residual.squaredNorm();
  };

  const double max_gap = profile.eps_max - profile.eps_min;
  const double step = 2.0 * M_PI / max_gap / 20.0;

  // Scan for local minima of the defect; refine each candidate by
  // golden-section search and accept the first that dips below tol.
  constexpr double kGolden = 0.6180339887498949;
  double prev2 = defect_at(0.0);  // 0, but keeps the triple uniform
  double prev1 = defect_at(step);
  for (double t = 2.0 * step; t <= t_max + step; t += step) {
    const double cur = defect_at(std::min(t, t_max));
    if (prev1 <= prev2 && prev1 <= cur) {
      double a = std::max(0.0, std::min(t, t_max) - 2.0 * step);
      double b = std::min(t, t_max);
      double x1 = b - kGolden * (b - a);
      double x2 = a + kGolden * (b - a);
      double f1 = defect_at(x1);
      double f2 = defect_at(x2);
      while (b - a > 1e-10 * std::max(1.0, b)) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - kGolden * (b - a);
          f1 = defect_at(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + kGolden * (b - a);
          f2 = defect_at(x2);
        }
      }
      const double t_min = 0.5 * (a + b);
      if (t_min > 1e-10 && defect_at(t_min) < tol) {
        return {PeriodKind::Periodic, t_min};
      }
    }
    prev2 = prev1;
    prev1 = cur;
  }
  return {PeriodKind::NotFound, 0.0};
}

}  // namespace hb
