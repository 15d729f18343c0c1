#pragma once

#include "hb/evolution.hpp"

// Geometric phase extraction, horizontal-lift correction, and Fubini-Study
// lengths for closed state curves.
namespace hb {

struct PhaseResult {
  double theta = 0.0;                // in [0, 2*pi)
  double connection_integral = 0.0;  // integral of i<psi|dpsi>
  double endpoint_arg = 0.0;         // arg <psi_0|psi_tau>
  double closure_defect = 0.0;
};

class OpenCurveError : public std::runtime_error {
 public:
  OpenCurveError(double defect, double tol);
  double defect() const { return defect_; }

 private:
  double defect_;
};

/// Reduce an angle to its representative in [0, 2*pi).
double wrap_phase(double angle);

/// Discrete Berry-Simon connection integral, -sum_k arg<psi_k|psi_{k+1}>;
/// every segment argument lies in (-pi, pi).
double connection_integral(const Trajectory& traj);

/// Geometric phase of a closed trajectory:
/// theta = (arg<psi_0|psi_tau> + connection integral) mod 2*pi.
PhaseResult aa_phase(const Trajectory& traj,
                     double tol_closure = kTolClosureIntegrated);

/// Pointwise phase correction making the lift horizontal; the corrected
/// endpoint overlap carries the holonomy directly.
Trajectory horizontalize(const Trajectory& traj);

/// Fubini-Study length as the sum of segment distances arccos|<psi_k|psi_{k+1}>|.
double fs_length(const Trajectory& traj);

/// Fubini-Study length as the time quadrature of the instantaneous energy
/// uncertainty (trapezoid rule); requires an attached schedule.
double fs_length_from_uncertainty(const Trajectory& traj);

/// Time average of the instantaneous energy uncertainty over [0, tau].
double average_uncertainty(const Trajectory& traj);

}  // namespace hb
