#include "hb/geometry.hpp"

#include <cmath>
#include <sstream>

namespace hb {

namespace {

void check_segments(const Trajectory& traj) {
  if (traj.size() < 2) {
    throw std::invalid_argument("trajectory needs at least two points");
  }
  for (size_t k = 1; k < traj.size(); ++k) {
    if (traj.states[k - 1].fidelity(traj.states[k]) <= kMinStepFidelity) {
      throw std::runtime_error("trajectory violates the consecutive-fidelity invariant");
    }
  }
}

}  // namespace

OpenCurveError::OpenCurveError(double defect, double tol)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "curve is not closed: defect " << defect << " exceeds tolerance " << tol;
        return msg.str();
      }()),
      defect_(defect) {}

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * M_PI;
  double wrapped = std::fmod(angle, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  if (wrapped >= two_pi) wrapped = 0.0;
  return wrapped;
}

double connection_integral(const Trajectory& traj) {
  check_segments(traj);
  double integral = 0.0;
  for (size_t k = 1; k < traj.size(); ++k) {
    integral -= std::arg(traj.states[k - 1].overlap(traj.states[k]));
  }
  return integral;
}

PhaseResult aa_phase(const Trajectory& traj, double tol_closure) {
  const double defect = closure_defect(traj);
  if (defect >= tol_closure) {
    throw OpenCurveError(defect, tol_closure);
  }
  PhaseResult result;
  result.closure_defect = defect;
  result.connection_integral = connection_integral(traj);
  result.endpoint_arg = std::arg(traj.states.front().overlap(traj.states.back()));
  result.theta = wrap_phase(result.endpoint_arg + result.connection_integral);
  return result;
}

Trajectory horizontalize(const Trajectory& traj) {
  check_segments(traj);
  Trajectory corrected;
  corrected.times = traj.times;
  corrected.schedule = traj.schedule;
  corrected.states.reserve(traj.size());
  corrected.states.push_back(traj.states.front());
  double accumulated = 0.0;  // connection integral up to t_k
  for (size_t k = 1; k < traj.size(); ++k) {
    accumulated -= std::arg(traj.states[k - 1].overlap(traj.states[k]));
    corrected.states.push_back(StateVector(
        std::polar(1.0, accumulated) * traj.states[k].amplitudes()));
  }
  return corrected;
}

double fs_length(const Trajectory& traj) {
  check_segments(traj);
  double length = 0.0;
  for (size_t k = 1; k < traj.size(); ++k) {
    // asin of the transverse component is well conditioned for the short
    // segments produced by fine grids, unlike acos of the overlap modulus.
    const StateVector& a = traj.states[k - 1];
    const StateVector& b = traj.states[k];
    const Vector transverse = b.amplitudes() - a.overlap(b) * a.amplitudes();
    length += std::asin(std::min(1.0, transverse.norm()));
  }
  return length;
}

double fs_length_from_uncertainty(const Trajectory& traj) {
  check_segments(traj);
  if (!traj.schedule) {
    throw std::invalid_argument("fs_length_from_uncertainty requires a schedule");
  }
  if (const auto* constant = std::get_if<ConstantSchedule>(traj.schedule.get())) {
    // dH is a constant of motion under a constant Hamiltonian.
    return std::sqrt(variance(constant->hamiltonian, traj.states.front())) *
           traj.tau();
  }
  double length = 0.0;
  double prev = 0.0;
  for (size_t k = 0; k < traj.size(); ++k) {
    const HermitianObservable h_t(hamiltonian_at(*traj.schedule, traj.times[k]));
    const double dh = std::sqrt(variance(h_t, traj.states[k]));
    if (k > 0) {
      length += 0.5 * (prev + dh) * (traj.times[k] - traj.times[k - 1]);
    }
    prev = dh;
  }
  return length;
}

double average_uncertainty(const Trajectory& traj) {
  return fs_length_from_uncertainty(traj) / traj.tau();
}

}  // namespace hb
