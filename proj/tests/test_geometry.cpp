#include <doctest.h>

#include <cmath>

#include "hb/geometry.hpp"
#include "hb/scenarios.hpp"
#include "test_helpers.hpp"

using namespace hb;
using hb::testing::random_hermitian;
using hb::testing::random_state;

namespace {

constexpr double two_pi = 2.0 * M_PI;

Trajectory qubit_loop(double phi, double omega, int steps) {
  BuiltScenario s = build_qubit({phi, omega, 0.0});
  return evolve_schedule(s.schedule, s.psi0, uniform_grid(s.tau, steps));
}

// Lift psi_t = exp(-i(H - eps)t) psi_0 on the given grid.
Trajectory shifted_lift(const HermitianObservable& h, const StateVector& psi0,
                        double eps, const std::vector<double>& grid) {
  const HermitianObservable shifted{h.matrix() -
                                    eps * Matrix::Identity(h.dim(), h.dim())};
  Trajectory traj;
  traj.times = grid;
  for (double t : grid) {
    traj.states.push_back(evolve_constant(shifted, psi0, t));
  }
  return traj;
}

// Signed spherical area enclosed by a closed Bloch curve, oriented by
// traversal; l'Huilier-style accumulation of spherical triangle excesses
// against the north pole via the cross-product formulation.
double enclosed_solid_angle(const Trajectory& traj) {
  double area = 0.0;
  for (size_t k = 1; k < traj.size(); ++k) {
    const BlochVector a = bloch_vector(traj.states[k - 1]);
    const BlochVector b = bloch_vector(traj.states[k]);
    // Signed area of the lune between consecutive meridians, computed from
    // the azimuth increment weighted by the mean height.
    const double az_a = std::atan2(a.y, a.x);
    const double az_b = std::atan2(b.y, b.x);
    double daz = az_b - az_a;
    if (daz > M_PI) daz -= two_pi;
    if (daz < -M_PI) daz += two_pi;
    area += daz * (1.0 - 0.5 * (a.z + b.z));
  }
  return area;
}

}  // namespace

TEST_CASE("connection integral of the epsilon-shifted lift") {
  std::mt19937 rng(17);
  BuiltScenario s = build_qubit({1.1, 1.0, 0.3});
  const auto& h = std::get<ConstantSchedule>(s.schedule).hamiltonian;
  const OccupationProfile profile = occupation_profile(h, s.psi0);
  for (const auto& level : profile.levels) {
    Trajectory lift =
        shifted_lift(h, s.psi0, level.energy, uniform_grid(s.tau, 4000));
    const double expected = s.tau * (profile.expected_energy - level.energy);
    CHECK(connection_integral(lift) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("connection integral edge cases") {
  SUBCASE("stationary lift gives zero") {
    std::mt19937 rng(19);
    StateVector psi = random_state(3, rng);
    Trajectory traj;
    traj.times = uniform_grid(1.0, 10);
    for (size_t k = 0; k < traj.times.size(); ++k) traj.states.push_back(psi);
    CHECK(connection_integral(traj) == doctest::Approx(0.0));
  }
  SUBCASE("closed gauge change leaves the integral unchanged") {
    Trajectory traj = qubit_loop(0.8, 1.0, 2000);
    const double base = connection_integral(traj);
    Trajectory gauged = traj;
    for (size_t k = 0; k < traj.size(); ++k) {
      const double t = traj.times[k];
      const double alpha =
          0.3 * std::sin(two_pi * t / traj.tau());  // alpha(0) = alpha(tau) = 0
      gauged.states[k] =
          StateVector(std::polar(1.0, alpha) * traj.states[k].amplitudes());
    }
    CHECK(connection_integral(gauged) == doctest::Approx(base).epsilon(1e-9));
  }
  SUBCASE("a single point is rejected") {
    Trajectory traj;
    traj.times = {0.0};
    std::mt19937 rng(23);
    traj.states.push_back(random_state(2, rng));
    CHECK_THROWS_AS(connection_integral(traj), std::invalid_argument);
  }
}

TEST_CASE("qubit geometric phase theta = pi(1 + cos phi)") {
  CHECK(aa_phase(qubit_loop(M_PI / 2, 1.0, 4000)).theta ==
        doctest::Approx(M_PI).epsilon(1e-6));
  CHECK(aa_phase(qubit_loop(M_PI / 3, 1.0, 4000)).theta ==
        doctest::Approx(3.0 * M_PI / 2).epsilon(1e-6));
}

TEST_CASE("stationary curve carries no phase") {
  HermitianObservable h{pauli_z()};
  Trajectory traj;
  traj.times = uniform_grid(2.5, 100);
  Vector ground(2);
  ground << 1.0, 0.0;
  for (double t : traj.times) {
    traj.states.push_back(evolve_constant(h, StateVector(ground), t));
  }
  CHECK(aa_phase(traj).theta == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("open curves are refused") {
  BuiltScenario s = build_qubit({M_PI / 2, 1.0, 0.0});
  Trajectory open_curve =
      evolve_schedule(s.schedule, s.psi0, uniform_grid(0.6 * s.tau, 1000));
  CHECK_THROWS_AS(aa_phase(open_curve), OpenCurveError);
  try {
    aa_phase(open_curve);
  } catch (const OpenCurveError& err) {
    CHECK(err.defect() > 1e-5);
  }
}

TEST_CASE("horizontalize") {
  SUBCASE("corrected lift is horizontal per segment") {
    std::mt19937 rng(29);
    HermitianObservable h{random_hermitian(2, rng)};
    StateVector psi = random_state(2, rng);
    Trajectory lift = shifted_lift(h, psi, 0.0, uniform_grid(3.0, 2000));
    Trajectory horizontal = horizontalize(lift);
    for (size_t k = 1; k < horizontal.size(); ++k) {
      CHECK(std::abs(std::arg(horizontal.states[k - 1].overlap(
                horizontal.states[k]))) < 1e-8);
    }
    CHECK(std::abs(connection_integral(horizontal)) < 1e-8);

    SUBCASE("and idempotent") {
      Trajectory twice = horizontalize(horizontal);
      for (size_t k = 0; k < twice.size(); ++k) {
        CHECK((twice.states[k].amplitudes() - horizontal.states[k].amplitudes())
                  .norm() < 1e-10);
      }
    }
  }
  SUBCASE("endpoint overlap of the corrected loop is the holonomy") {
    Trajectory loop = qubit_loop(M_PI / 2, 1.0, 4000);
    Trajectory horizontal = horizontalize(loop);
    const double holonomy_arg = std::arg(
        horizontal.states.front().overlap(horizontal.states.back()));
    CHECK(wrap_phase(holonomy_arg) == doctest::Approx(M_PI).epsilon(1e-6));
  }
}

TEST_CASE("Fubini-Study length") {
  SUBCASE("qubit circle has length pi sin phi") {
    for (double phi : {0.5, M_PI / 2, 2.2}) {
      Trajectory loop = qubit_loop(phi, 1.0, 4000);
      CHECK(fs_length(loop) ==
            doctest::Approx(M_PI * std::sin(phi)).epsilon(1e-5));
      // Both evaluation paths agree.
      CHECK(fs_length_from_uncertainty(loop) ==
            doctest::Approx(fs_length(loop)).epsilon(1e-5));
    }
  }
  SUBCASE("phi = pi/2 saturates the length bound") {
    Trajectory loop = qubit_loop(M_PI / 2, 1.0, 4000);
    const double theta = aa_phase(loop).theta;
    CHECK(fs_length(loop) ==
          doctest::Approx(std::sqrt(theta * (two_pi - theta))).epsilon(1e-5));
  }
  SUBCASE("stationary trajectory has zero length") {
    HermitianObservable h{pauli_z()};
    Trajectory traj;
    traj.times = uniform_grid(1.0, 50);
    traj.schedule = std::make_shared<HamiltonianSchedule>(ConstantSchedule{h});
    Vector ground(2);
    ground << 1.0, 0.0;
    for (double t : traj.times) {
      traj.states.push_back(evolve_constant(h, StateVector(ground), t));
    }
    CHECK(fs_length(traj) == doctest::Approx(0.0));
    CHECK(fs_length_from_uncertainty(traj) == doctest::Approx(0.0));
  }
}

TEST_CASE("gauge invariance of the phase") {
  Trajectory loop = qubit_loop(1.3, 1.0, 4000);
  const double base = aa_phase(loop).theta;
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a1 = uni(rng), a2 = uni(rng), a0 = uni(rng);
    Trajectory gauged = loop;
    for (size_t k = 0; k < loop.size(); ++k) {
      const double t = loop.times[k] / loop.tau();
      const double alpha = a0 + a1 * std::sin(two_pi * t) + a2 * t;
      gauged.states[k] =
          StateVector(std::polar(1.0, alpha) * loop.states[k].amplitudes());
    }
    CHECK(aa_phase(gauged).theta == doctest::Approx(base).epsilon(1e-6));
    CHECK(fs_length(gauged) == doctest::Approx(fs_length(loop)).epsilon(1e-6));
  }
}

TEST_CASE("parameterization invariance") {
  Trajectory loop = qubit_loop(0.9, 1.0, 4000);
  const double base_theta = aa_phase(loop).theta;
  const double base_length = fs_length(loop);
  Trajectory warped = loop;
  for (size_t k = 0; k < loop.size(); ++k) {
    const double u = loop.times[k] / loop.tau();
    warped.times[k] = loop.tau() * (u + 0.15 * std::sin(M_PI * u) * u * (1 - u) + u * u) / 2.0;
  }
  // Monotone warp of the grid; states untouched.
  for (size_t k = 1; k < warped.size(); ++k) {
    REQUIRE(warped.times[k] > warped.times[k - 1]);
  }
  warped.schedule = nullptr;
  CHECK(aa_phase(warped).theta == doctest::Approx(base_theta).epsilon(1e-6));
  CHECK(fs_length(warped) == doctest::Approx(base_length).epsilon(1e-6));
}

TEST_CASE("constant-H phase identity over occupied levels") {
  std::mt19937 rng(37);
  BuiltScenario s = random_periodic(3, 1234, 1.0);
  Trajectory traj =
      evolve_schedule(s.schedule, s.psi0, uniform_grid(s.tau, 8000));
  const double theta = aa_phase(traj, 1e-6).theta;
  const auto& h = std::get<ConstantSchedule>(s.schedule).hamiltonian;
  const OccupationProfile profile = occupation_profile(h, s.psi0);
  for (const auto& level : profile.levels) {
    const double predicted =
        wrap_phase(s.tau * (profile.expected_energy - level.energy));
    CHECK(std::abs(std::remainder(predicted - theta, two_pi)) < 1e-6);
  }
}

TEST_CASE("Bloch solid-angle law") {
  for (double phi : {0.6, 1.2, 2.0, 2.6}) {
    Trajectory loop = qubit_loop(phi, 1.0, 4000);
    const double solid = enclosed_solid_angle(loop);
    const double expected = wrap_phase(two_pi - 0.5 * solid);
    CHECK(aa_phase(loop).theta == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("FS speed equals the instantaneous uncertainty") {
  BuiltScenario s = build_qubit({1.0, 1.5, 0.0});
  Trajectory traj = evolve_schedule(s.schedule, s.psi0, uniform_grid(s.tau, 4000));
  const auto& h = std::get<ConstantSchedule>(s.schedule).hamiltonian;
  const double dh = std::sqrt(variance(h, s.psi0));
  for (size_t k = 1; k < traj.size(); k += 500) {
    const double dt = traj.times[k] - traj.times[k - 1];
    const double speed =
        std::acos(std::min(1.0, std::abs(traj.states[k - 1].overlap(traj.states[k])))) /
        dt;
    CHECK(speed == doctest::Approx(dh).epsilon(1e-5));
  }
}
