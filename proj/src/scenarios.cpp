#include "hb/scenarios.hpp"

#include <cmath>
#include <numeric>
#include <random>

namespace hb {

namespace {

constexpr double two_pi = 2.0 * M_PI;

double uniform01(std::mt19937_64& rng) {
  // 53-bit mantissa draw; keeps the stream identical across platforms.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Matrix random_unitary(int dim, std::mt19937_64& rng) {
  Matrix gaussian(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      const double u1 = std::max(uniform01(rng), 1e-300);
      const double u2 = uniform01(rng);
      const double radius = std::sqrt(-2.0 * std::log(u1));
      gaussian(r, c) = Complex(radius * std::cos(two_pi * u2),
                               radius * std::sin(two_pi * u2));
    }
  }
  Eigen::HouseholderQR<Matrix> qr(gaussian);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const Complex diag = r(c, c);
    if (std::abs(diag) > 0.0) {
      q.col(c) *= diag / std::abs(diag);
    }
  }
  return q;
}

long level_gcd(const std::vector<long>& sorted_levels) {
  long g = 0;
  for (size_t k = 1; k < sorted_levels.size(); ++k) {
    g = std::gcd(g, sorted_levels[k] - sorted_levels[k - 1]);
  }
  return g;
}

}  // namespace

BuiltScenario build_qubit(const QubitScenario& s) {
  if (s.omega <= 0.0) {
    throw std::invalid_argument("build_qubit: omega must be positive");
  }
  if (s.phi <= 0.0 || s.phi >= M_PI) {
    throw StationaryScenario("build_qubit: phi at a Bloch pole gives a stationary state");
  }
  const Matrix h = 0.5 * (s.trace_h * Matrix::Identity(2, 2) + s.omega * pauli_z());
  Vector psi(2);
  psi << std::sin(s.phi / 2), std::cos(s.phi / 2);
  return {ConstantSchedule{HermitianObservable(h)}, StateVector(psi),
          two_pi / s.omega, wrap_phase(M_PI * (1.0 + std::cos(s.phi)))};
}

BuiltScenario build_qutrit(const QutritScenario& s) {
  if (s.levels[0] >= s.levels[1] || s.levels[1] >= s.levels[2]) {
    throw std::invalid_argument("build_qutrit: levels must be strictly increasing");
  }
  if (s.omega <= 0.0) {
    throw std::invalid_argument("build_qutrit: omega must be positive");
  }
  for (double p : s.amplitudes) {
    if (p <= 0.0) {
      throw std::invalid_argument("build_qutrit: all three levels must be occupied");
    }
  }
  Matrix h = Matrix::Zero(3, 3);
  Vector psi(3);
  double total = s.amplitudes[0] + s.amplitudes[1] + s.amplitudes[2];
  psi[0] = std::sqrt(s.amplitudes[0] / total);
  psi[1] = std::polar(std::sqrt(s.amplitudes[1] / total), s.phases[0]);
  psi[2] = std::polar(std::sqrt(s.amplitudes[2] / total), s.phases[1]);
  for (int j = 0; j < 3; ++j) {
    h(j, j) = s.levels[j] * s.omega;
  }
  const long g = std::gcd(static_cast<long>(s.levels[1] - s.levels[0]),
                          static_cast<long>(s.levels[2] - s.levels[1]));
  return {ConstantSchedule{HermitianObservable(h)}, StateVector(psi),
          two_pi / (s.omega * static_cast<double>(g)), std::nullopt};
}

QutritAnalysis analyze_qutrit(const Trajectory& traj, double tol_closure) {
  if (!traj.schedule || !schedule_is_constant(*traj.schedule)) {
    throw std::invalid_argument("analyze_qutrit: constant schedule required");
  }
  const auto& hamiltonian = std::get<ConstantSchedule>(*traj.schedule).hamiltonian;
  const OccupationProfile profile =
      occupation_profile(hamiltonian, traj.states.front());
  if (profile.levels.size() != 3) {
    throw std::invalid_argument("analyze_qutrit: all three levels must be occupied");
  }

  QutritAnalysis analysis;
  analysis.tau = traj.tau();
  analysis.theta = aa_phase(traj, tol_closure).theta;
  analysis.expected_energy = profile.expected_energy;

  const double mean = profile.expected_energy;
  const std::array<double, 3> eps = {profile.levels[0].energy,
                                     profile.levels[1].energy,
                                     profile.levels[2].energy};
  for (int j = 0; j < 3; ++j) {
    const double winding = (analysis.tau * (mean - eps[j]) - analysis.theta) / two_pi;
    analysis.winding[j] = std::lround(winding);
    if (std::abs(winding - static_cast<double>(analysis.winding[j])) > 1e-6) {
      throw std::runtime_error("analyze_qutrit: non-integer winding residual");
    }
  }
  analysis.ordering_ok = analysis.winding[0] > analysis.winding[1] &&
                         analysis.winding[1] > analysis.winding[2];

  const auto [n0, n1, n2] = analysis.winding;
  const double tau = analysis.tau;
  const double theta = analysis.theta;
  if (mean < eps[1] - kTolEnergyEq) {
    analysis.branch = QutritBranch::BelowMiddle;
    analysis.quotient_below = theta / (mean - eps[0]);
    analysis.quotient_above = (two_pi - theta) / (eps[1] - mean);
    analysis.residual_below = std::abs(
        analysis.quotient_below -
        tau * (mean - eps[0] - two_pi * n0 / tau) / (mean - eps[0]));
    analysis.residual_above = std::abs(
        analysis.quotient_above -
        tau * (two_pi * (n1 + 1) / tau + eps[1] - mean) / (eps[1] - mean));
  } else if (mean > eps[1] + kTolEnergyEq) {
    analysis.branch = QutritBranch::AboveMiddle;
    analysis.quotient_below = theta / (mean - eps[1]);
    analysis.quotient_above = (two_pi - theta) / (eps[2] - mean);
    analysis.residual_below = std::abs(
        analysis.quotient_below -
        tau * (mean - eps[1] - two_pi * n1 / tau) / (mean - eps[1]));
    analysis.residual_above = std::abs(
        analysis.quotient_above -
        tau * (two_pi * (n2 + 1) / tau + eps[2] - mean) / (eps[2] - mean));
  } else {
    // <H> = eps_1: the middle level counts as neither below nor above, theta
    // vanishes, and the surviving quotient is 2*pi/(eps_2 - eps_1).
    analysis.branch = QutritBranch::EqualMiddle;
    const double theta_eff = theta > M_PI ? theta - two_pi : theta;
    analysis.quotient_below = 0.0;
    analysis.quotient_above = (two_pi - theta_eff) / (eps[2] - mean);
    analysis.residual_below = std::abs(theta_eff);
    analysis.residual_above =
        std::abs(analysis.quotient_above - tau / static_cast<double>(n1 - n2));
  }

  const double tol_sat = 1e-6 * tau;
  analysis.below_equals_tau = std::abs(analysis.quotient_below - tau) < tol_sat;
  analysis.above_equals_tau = std::abs(analysis.quotient_above - tau) < tol_sat;
  return analysis;
}

BuiltScenario build_counterexample(const CounterexampleScenario& s) {
  if (s.energy_scale <= 0.0) {
    throw std::invalid_argument("build_counterexample: E must be positive");
  }
  if (s.chi <= 0.0 || s.chi >= M_PI / 2) {
    throw std::invalid_argument("build_counterexample: chi must lie in (0, pi/2)");
  }
  const double mu = s.energy_scale / (1.0 - std::cos(s.chi));
  const Matrix frame = mu * std::sin(s.chi) * pauli_z();
  const Matrix h = mu * (std::sin(s.chi) * pauli_z() - std::cos(s.chi) * pauli_x());
  Vector psi(2);
  psi << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const double tau = M_PI * std::tan(s.chi / 2) / s.energy_scale;
  return {RotatingFrameSchedule{HermitianObservable(frame), HermitianObservable(h)},
          StateVector(psi), tau, M_PI};
}

BuiltScenario random_periodic(int dim, std::uint64_t seed, double base_omega) {
  if (dim < 2 || dim > 8) {
    throw std::invalid_argument("random_periodic: dim must lie in [2, 8]");
  }
  if (base_omega <= 0.0) {
    throw std::invalid_argument("random_periodic: base_omega must be positive");
  }
  std::mt19937_64 rng(seed);

  std::vector<long> levels(dim);
  for (;;) {
    for (auto& level : levels) {
      level = static_cast<long>(rng() % 7);
    }
    std::sort(levels.begin(), levels.end());
    if (levels.front() != levels.back()) break;  // need >= 2 distinct levels
  }

  const Matrix unitary = random_unitary(dim, rng);
  Eigen::VectorXd spectrum(dim);
  for (int k = 0; k < dim; ++k) {
    spectrum[k] = static_cast<double>(levels[k]) * base_omega;
  }
  const Matrix h = unitary * spectrum.asDiagonal() * unitary.adjoint();

  // Occupation weights bounded away from 0 so every level stays occupied.
  Vector coeffs(dim);
  double total = 0.0;
  std::vector<double> weights(dim);
  for (int k = 0; k < dim; ++k) {
    weights[k] = 0.1 + uniform01(rng);
    total += weights[k];
  }
  for (int k = 0; k < dim; ++k) {
    coeffs[k] = std::polar(std::sqrt(weights[k] / total), two_pi * uniform01(rng));
  }

  std::vector<long> distinct;
  for (long level : levels) {
    if (distinct.empty() || level != distinct.back()) distinct.push_back(level);
  }
  const long g = level_gcd(distinct);
  return {ConstantSchedule{HermitianObservable(h)}, StateVector(unitary * coeffs),
          two_pi / (base_omega * static_cast<double>(g)), std::nullopt};
}

QutritWitnessSet search_qutrit_witnesses(int max_level, double amplitude_step) {
  QutritWitnessSet found;
  const int simplex = static_cast<int>(std::lround(1.0 / amplitude_step));
  for (int e0 = 0; e0 <= max_level - 2 && !found.complete(); ++e0) {
    for (int e1 = e0 + 1; e1 <= max_level - 1; ++e1) {
      for (int e2 = e1 + 1; e2 <= max_level; ++e2) {
        const long g = std::gcd(static_cast<long>(e1 - e0),
                                static_cast<long>(e2 - e1));
        const double tau = two_pi / static_cast<double>(g);
        for (int i = 1; i < simplex; ++i) {
          for (int j = 1; j < simplex - i; ++j) {
            const double p0 = i * amplitude_step;
            const double p1 = j * amplitude_step;
            const double p2 = 1.0 - p0 - p1;
            const double mean = p0 * e0 + p1 * e1 + p2 * e2;
            const QutritScenario scenario{{e0, e1, e2}, 1.0, {p0, p1, p2}, {0.0, 0.0}};

            // theta = tau <H - eps_0> mod 2*pi, with the wrap snapped onto
            // exact multiples so the equal-middle branch is recognized.
            const double cycles = (mean - e0) / static_cast<double>(g);
            double frac = cycles - std::floor(cycles);
            if (std::min(frac, 1.0 - frac) < 1e-9) frac = 0.0;
            const double theta = two_pi * frac;

            if (std::abs(mean - e1) < 1e-9) {
              const long winding_gap = (e2 - e1) / g;
              auto& slot = winding_gap == 1 ? found.equal_middle_adjacent
                                            : found.equal_middle_gapped;
              if (!slot) slot = scenario;
              continue;
            }
            const double eps_below = mean < e1 ? e0 : e1;
            const double eps_above = mean < e1 ? e1 : e2;
            const double q_below = theta / (mean - eps_below);
            const double q_above = (two_pi - theta) / (eps_above - mean);
            const bool sat_below = std::abs(q_below - tau) < 1e-9 * tau;
            const bool sat_above = std::abs(q_above - tau) < 1e-9 * tau;
            auto& slot = sat_below ? (sat_above ? found.both : found.below_only)
                                   : (sat_above ? found.above_only : found.neither);
            if (!slot) slot = scenario;
          }
        }
      }
    }
  }
  return found;
}

}  // namespace hb
