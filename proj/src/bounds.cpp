#include "hb/bounds.hpp"

#include <cmath>

namespace hb {

namespace {

constexpr double two_pi = 2.0 * M_PI;

void check_theta(double theta) {
  if (theta < 0.0 || theta >= two_pi) {
    throw std::invalid_argument("theta must lie in [0, 2*pi)");
  }
}

// Trapezoid average over the trajectory grid of a per-sample quantity.
template <typename F>
double time_average(const Trajectory& traj, F&& sample) {
  double integral = 0.0;
  double prev = 0.0;
  for (size_t k = 0; k < traj.size(); ++k) {
    const double value = sample(k);
    if (k > 0) {
      integral += 0.5 * (prev + value) * (traj.times[k] - traj.times[k - 1]);
    }
    prev = value;
  }
  return integral / traj.tau();
}

OccupationProfile instantaneous_profile(const Trajectory& traj, size_t k) {
  const HermitianObservable h_t(hamiltonian_at(*traj.schedule, traj.times[k]));
  return occupation_profile(h_t, traj.states[k]);
}

}  // namespace

MlBoundResult ml_bound(const OccupationProfile& profile, double theta) {
  check_theta(theta);
  MlBoundResult result;
  if (profile.stationary()) {
    return result;  // bound defined as 0
  }
  result.quotients.below =
      theta > 0.0 ? theta / (profile.expected_energy - *profile.eps_below) : 0.0;
  result.quotients.above =
      (two_pi - theta) / (*profile.eps_above - profile.expected_energy);
  result.bound = std::max(result.quotients.below, result.quotients.above);
  return result;
}

double ml_time_averaged(const Trajectory& traj, double theta) {
  check_theta(theta);
  if (!traj.schedule) {
    throw std::invalid_argument("ml_time_averaged requires a schedule");
  }
  if (const auto* constant = std::get_if<ConstantSchedule>(traj.schedule.get())) {
    // Occupations are constants of motion, so the time averages collapse.
    const OccupationProfile p =
        occupation_profile(constant->hamiltonian, traj.states.front());
    if (p.stationary()) {
      throw std::runtime_error("ml_time_averaged: instantaneous profile is stationary");
    }
    return std::max(theta / (p.expected_energy - *p.eps_below),
                    (two_pi - theta) / (*p.eps_above - p.expected_energy));
  }
  const double avg_below = time_average(traj, [&](size_t k) {
    const OccupationProfile p = instantaneous_profile(traj, k);
    if (p.stationary()) {
      throw std::runtime_error("ml_time_averaged: instantaneous profile is stationary");
    }
    return p.expected_energy - *p.eps_below;
  });
  const double avg_above = time_average(traj, [&](size_t k) {
    const OccupationProfile p = instantaneous_profile(traj, k);
    return *p.eps_above - p.expected_energy;
  });
  return std::max(theta / avg_below, (two_pi - theta) / avg_above);
}

double length_lower_bound(double theta) {
  check_theta(theta);
  return std::sqrt(theta * (two_pi - theta));
}

double mt_bound(double theta, double avg_uncertainty) {
  check_theta(theta);
  if (theta == 0.0) return 0.0;
  if (avg_uncertainty <= 0.0) {
    throw std::invalid_argument("mt_bound: stationary curve cannot carry phase");
  }
  return length_lower_bound(theta) / avg_uncertainty;
}

double bd_bound(const Trajectory& traj, double theta) {
  check_theta(theta);
  if (theta == 0.0) return 0.0;
  if (!traj.schedule) {
    throw std::invalid_argument("bd_bound requires a schedule");
  }
  if (const auto* constant = std::get_if<ConstantSchedule>(traj.schedule.get())) {
    const OccupationProfile p =
        occupation_profile(constant->hamiltonian, traj.states.front());
    if (p.eps_max - p.eps_min <= 0.0) {
      throw std::runtime_error("bd_bound: instantaneous profile is stationary");
    }
    return length_lower_bound(theta) /
           std::sqrt((p.expected_energy - p.eps_min) *
                     (p.eps_max - p.expected_energy));
  }
  const double avg = time_average(traj, [&](size_t k) {
    const OccupationProfile p = instantaneous_profile(traj, k);
    if (p.eps_max - p.eps_min <= 0.0) {
      throw std::runtime_error("bd_bound: instantaneous profile is stationary");
    }
    return std::sqrt((p.expected_energy - p.eps_min) *
                     (p.eps_max - p.expected_energy));
  });
  return length_lower_bound(theta) / avg;
}

BoundReport full_report(const Trajectory& traj, double tol_closure) {
  const PhaseResult phase = aa_phase(traj, tol_closure);

  BoundReport report;
  report.tau = traj.tau();
  report.fs_length = fs_length(traj);
  report.avg_uncertainty = traj.schedule ? average_uncertainty(traj) : 0.0;

  // A stationary curve carries no phase; the tiny numerical theta residue
  // (possibly wrapped to just below 2*pi) is collapsed to 0.
  const bool stationary = report.avg_uncertainty < 1e-12;
  report.theta = stationary ? 0.0 : phase.theta;

  if (!stationary) {
    if (traj.schedule && schedule_is_constant(*traj.schedule)) {
      const auto& constant = std::get<ConstantSchedule>(*traj.schedule);
      const OccupationProfile profile =
          occupation_profile(constant.hamiltonian, traj.states.front());
      const MlBoundResult ml = ml_bound(profile, report.theta);
      report.ml_bound = ml.bound;
      report.ml_quotients = ml.quotients;
      report.ml_is_bound = true;
    } else if (traj.schedule) {
      report.ml_bound = ml_time_averaged(traj, report.theta);
      report.ml_is_bound = false;
    }
    report.mt_bound = mt_bound(report.theta, report.avg_uncertainty);
    report.bd_bound = bd_bound(traj, report.theta);
  }

  report.saturation_ratios = {{"ml", report.ml_bound / report.tau},
                              {"mt", report.mt_bound / report.tau},
                              {"bd", report.bd_bound / report.tau}};
  return report;
}

}  // namespace hb
