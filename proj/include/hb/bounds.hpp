#pragma once

#include <map>
#include <string>

#include "hb/geometry.hpp"

// The three evolution-time lower bounds and the length lower bound.
namespace hb {

struct MlQuotients {
  double below = 0.0;  // theta / <H - eps_below>
  double above = 0.0;  // (2*pi - theta) / <eps_above - H>
};

struct MlBoundResult {
  double bound = 0.0;
  MlQuotients quotients;
};

/// Report of all bound evaluations for one closed trajectory. For
/// time-dependent schedules the ml entry holds the time-averaged diagnostic,
/// which is not an evolution-time bound; ml_is_bound records which case holds.
struct BoundReport {
  double theta = 0.0;  // in [0, 2*pi)
  double tau = 0.0;
  double fs_length = 0.0;
  double avg_uncertainty = 0.0;
  double ml_bound = 0.0;
  bool ml_is_bound = true;
  MlQuotients ml_quotients;
  double mt_bound = 0.0;
  double bd_bound = 0.0;
  std::map<std::string, double> saturation_ratios;
};

/// Margolus-Levitin type bound for constant Hamiltonians,
/// max{theta/<H - eps_below>, (2*pi - theta)/<eps_above - H>}.
/// A missing eps_below or eps_above means the state is stationary and the
/// bound is 0.
MlBoundResult ml_bound(const OccupationProfile& profile, double theta);

/// Time-averaged ML expression for time-dependent schedules. Not a lower
/// bound on tau; exposed as a diagnostic precisely because it can exceed tau.
double ml_time_averaged(const Trajectory& traj, double theta);

/// Minimal Fubini-Study length of a closed curve with geometric phase theta:
/// sqrt(theta * (2*pi - theta)).
double length_lower_bound(double theta);

/// Mandelstam-Tamm type bound, length_lower_bound(theta) / <<dH>>.
double mt_bound(double theta, double avg_uncertainty);

/// Bhatia-Davies type bound: length_lower_bound(theta) divided by the time
/// average of sqrt(<H_t - eps_min;t> <eps_max;t - H_t>). Never exceeds the
/// MT bound of the same trajectory.
double bd_bound(const Trajectory& traj, double theta);

BoundReport full_report(const Trajectory& traj,
                        double tol_closure = kTolClosureIntegrated);

}  // namespace hb
