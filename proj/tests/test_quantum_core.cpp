#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

using namespace hb;
using hb::testing::basis_state;
using hb::testing::random_hermitian;
using hb::testing::random_state;

namespace {

// Closed-form 2x2 Hermitian eigenvalues, independent of the solver path.
std::pair<double, double> eig2x2(const Matrix& m) {
  const double a = std::real(m(0, 0));
  const double d = std::real(m(1, 1));
  const double off = std::abs(m(0, 1));
  const double mean = 0.5 * (a + d);
  const double r = std::sqrt(0.25 * (a - d) * (a - d) + off * off);
  return {mean - r, mean + r};
}

}  // namespace

TEST_CASE("state vector construction") {
  Vector v(2);
  v << 3.0, 4.0;
  StateVector psi(v);
  CHECK(psi.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(StateVector(Vector::Zero(2)), std::invalid_argument);
  CHECK_THROWS_AS(StateVector(Vector::Ones(1)), std::invalid_argument);
}

TEST_CASE("spectral decomposition of Pauli operators") {
  HermitianObservable sz{pauli_z()};
  CHECK(sz.eigenvalues()[0] == doctest::Approx(-1.0));
  CHECK(sz.eigenvalues()[1] == doctest::Approx(1.0));
  // sigma_z = |1><1| - |0><0|, so |0> belongs to eigenvalue -1.
  CHECK(std::abs(sz.eigenvectors().col(0).dot(basis_state(2, 0))) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(sz.eigenvectors().col(1).dot(basis_state(2, 1))) ==
        doctest::Approx(1.0).epsilon(1e-10));

  HermitianObservable id3{Matrix::Identity(3, 3)};
  for (int k = 0; k < 3; ++k) {
    CHECK(id3.eigenvalues()[k] == doctest::Approx(1.0));
  }

  HermitianObservable sx{pauli_x()};
  const auto [lo, hi] = eig2x2(pauli_x());
  CHECK(sx.eigenvalues()[0] == doctest::Approx(lo).epsilon(1e-12));
  CHECK(sx.eigenvalues()[1] == doctest::Approx(hi).epsilon(1e-12));
  Vector minus(2), plus(2);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(std::abs(sx.eigenvectors().col(0).dot(minus)) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(sx.eigenvectors().col(1).dot(plus)) ==
        doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("non-Hermitian input is rejected") {
  Matrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_WITH_AS(HermitianObservable{m},
                       doctest::Contains("not Hermitian"), std::invalid_argument);
}

TEST_CASE("spectral reconstruction and unitarity for random matrices") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + trial % 5;
    HermitianObservable obs{random_hermitian(dim, rng)};
    const Matrix rebuilt = obs.eigenvectors() *
                           obs.eigenvalues().asDiagonal().toDenseMatrix().cast<Complex>() *
                           obs.eigenvectors().adjoint();
    CHECK((rebuilt - obs.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((obs.eigenvectors().adjoint() * obs.eigenvectors() -
           Matrix::Identity(dim, dim))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("occupation profile of the precessing qubit") {
  const double omega = 1.3;
  const double trace_h = 0.4;
  const double phi = 0.9;
  HermitianObservable h{0.5 * (trace_h * Matrix::Identity(2, 2) + omega * pauli_z())};
  Vector v(2);
  v << std::sin(phi / 2), std::cos(phi / 2);
  StateVector psi(v);

  const OccupationProfile profile = occupation_profile(h, psi);
  REQUIRE(profile.levels.size() == 2);
  CHECK(profile.levels[0].energy == doctest::Approx((trace_h - omega) / 2));
  CHECK(profile.levels[1].energy == doctest::Approx((trace_h + omega) / 2));
  CHECK(profile.expected_energy ==
        doctest::Approx((trace_h + omega * std::cos(phi)) / 2).epsilon(1e-12));
  CHECK(*profile.eps_below == doctest::Approx((trace_h - omega) / 2));
  CHECK(*profile.eps_above == doctest::Approx((trace_h + omega) / 2));
}

TEST_CASE("eigenvector input is stationary") {
  HermitianObservable h{pauli_z()};
  StateVector psi(basis_state(2, 0));
  const OccupationProfile profile = occupation_profile(h, psi);
  CHECK(profile.levels.size() == 1);
  CHECK(profile.stationary());
  CHECK_FALSE(profile.eps_below.has_value());
  CHECK_FALSE(profile.eps_above.has_value());
}

TEST_CASE("qutrit with <H> exactly at the middle level") {
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 0.0;
  h(1, 1) = 1.0;
  h(2, 2) = 2.0;
  // p0 = p2 pins <H> to the middle eigenvalue.
  Vector v(3);
  v << std::sqrt(0.25), std::sqrt(0.5), std::sqrt(0.25);
  const OccupationProfile profile =
      occupation_profile(HermitianObservable{h}, StateVector(v));
  CHECK(profile.expected_energy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*profile.eps_below == doctest::Approx(0.0));
  CHECK(*profile.eps_above == doctest::Approx(2.0));
}

TEST_CASE("expectation and variance") {
  HermitianObservable sz{pauli_z()};
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(expectation(sz, StateVector(plus)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(variance(sz, StateVector(plus)) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(variance(sz, StateVector(basis_state(2, 1))) ==
        doctest::Approx(0.0).epsilon(1e-12));

  const double omega = 2.0;
  const double phi = 0.7;
  HermitianObservable h{0.5 * omega * pauli_z()};
  Vector v(2);
  v << std::sin(phi / 2), std::cos(phi / 2);
  CHECK(std::sqrt(variance(h, StateVector(v))) ==
        doctest::Approx(omega * std::sin(phi) / 2).epsilon(1e-12));

  std::mt19937 rng(1);
  CHECK_THROWS_AS(expectation(sz, random_state(3, rng)), DimensionMismatch);
}

TEST_CASE("Bloch and Rabi vectors") {
  CHECK(bloch_vector(StateVector(basis_state(2, 0))).z == doctest::Approx(-1.0));
  CHECK(bloch_vector(StateVector(basis_state(2, 0))).x == doctest::Approx(0.0));

  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const BlochVector r = bloch_vector(StateVector(plus));
  CHECK(r.x == doctest::Approx(1.0));
  CHECK(r.y == doctest::Approx(0.0));
  CHECK(r.z == doctest::Approx(0.0));

  const double omega = 1.7;
  const RabiVector rabi = rabi_vector(HermitianObservable{0.5 * omega * pauli_z()});
  CHECK(rabi.x == doctest::Approx(0.0));
  CHECK(rabi.y == doctest::Approx(0.0));
  CHECK(rabi.z == doctest::Approx(omega));

  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    CHECK(bloch_vector(random_state(2, rng)).norm() ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(bloch_vector(random_state(3, rng)), DimensionMismatch);
}

TEST_CASE("Bhatia-Davies inequality on random systems") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 6;
    HermitianObservable obs{random_hermitian(dim, rng)};
    StateVector psi = random_state(dim, rng);
    const OccupationProfile p = occupation_profile(obs, psi);
    const double rhs = (p.expected_energy - p.eps_min) * (p.eps_max - p.expected_energy);
    CHECK(variance(obs, psi) <= rhs + 1e-10);
  }
}

TEST_CASE("Bhatia-Davies equality with at most two occupied levels") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 3 + trial % 4;
    HermitianObservable obs{random_hermitian(dim, rng)};
    std::uniform_real_distribution<double> uni(0.1, 1.0);
    Vector coeffs = Vector::Zero(dim);
    coeffs[0] = uni(rng);
    coeffs[dim - 1] = Complex(uni(rng), uni(rng));
    StateVector psi(obs.eigenvectors() * coeffs);
    const OccupationProfile p = occupation_profile(obs, psi);
    const double rhs = (p.expected_energy - p.eps_min) * (p.eps_max - p.expected_energy);
    CHECK(variance(obs, psi) == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("occupations are invariant under global phase and degenerate rotation") {
  std::mt19937 rng(37);
  // Degenerate middle pair: profile must merge it into one level.
  Eigen::VectorXd spectrum(4);
  spectrum << -1.0, 0.5, 0.5, 2.0;
  for (int trial = 0; trial < 10; ++trial) {
    HermitianObservable base{random_hermitian(4, rng)};
    const Matrix u = base.eigenvectors();  // random orthonormal frame
    const Matrix h = u * spectrum.asDiagonal() * u.adjoint();
    StateVector psi = random_state(4, rng);

    const OccupationProfile p1 = occupation_profile(HermitianObservable{h}, psi);
    REQUIRE(p1.levels.size() == 3);

    StateVector rotated(std::polar(1.0, 1.234) * psi.amplitudes());
    const OccupationProfile p2 = occupation_profile(HermitianObservable{h}, rotated);
    for (size_t k = 0; k < p1.levels.size(); ++k) {
      CHECK(p1.levels[k].occupation ==
            doctest::Approx(p2.levels[k].occupation).epsilon(1e-10));
    }
  }
}

TEST_CASE("variance vanishes iff a single level is occupied") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 5;
    HermitianObservable obs{random_hermitian(dim, rng)};
    StateVector psi = random_state(dim, rng);
    const OccupationProfile p = occupation_profile(obs, psi);
    if (p.levels.size() == 1) {
      CHECK(variance(obs, psi) < 1e-10);
    } else {
      CHECK(variance(obs, psi) > 1e-10);
    }
    // And the converse via an eigenvector.
    StateVector eig(obs.eigenvectors().col(0));
    CHECK(occupation_profile(obs, eig).levels.size() == 1);
    CHECK(variance(obs, eig) < 1e-10);
  }
}
