#include "hb/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hb {

StateVector::StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 2) {
    throw std::invalid_argument("StateVector requires dim >= 2");
  }
  const double norm = amplitudes_.norm();
  if (norm < kTolNorm) {
    throw std::invalid_argument("StateVector amplitudes have vanishing norm");
  }
  if (std::abs(norm - 1.0) > kTolNorm) {
    amplitudes_ /= norm;
  }
}

Complex StateVector::overlap(const StateVector& other) const {
  if (other.dim() != dim()) {
    throw DimensionMismatch("StateVector overlap: dimension mismatch");
  }
  return amplitudes_.dot(other.amplitudes_);
}

double StateVector::fidelity(const StateVector& other) const {
  return std::norm(overlap(other));
}

HermitianObservable::HermitianObservable(Matrix matrix, double tol)
    : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2) {
    throw std::invalid_argument("HermitianObservable requires a square matrix, dim >= 2");
  }
  const double asym = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max asymmetry " << asym;
    throw std::invalid_argument(msg.str());
  }
  // Symmetrize before decomposing so the spectrum is exactly real.
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigendecomposition failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

HermitianObservable HermitianObservable::scaled(double factor) const {
  return HermitianObservable(factor * matrix_);
}

OccupationProfile occupation_profile(const HermitianObservable& obs,
                                     const StateVector& psi, double tol_occ,
                                     double tol_degenerate, double tol_eq) {
  if (obs.dim() != psi.dim()) {
    throw DimensionMismatch("occupation_profile: dimension mismatch");
  }
  OccupationProfile profile;
  const auto& evals = obs.eigenvalues();
  const auto& evecs = obs.eigenvectors();

  // Group degenerate eigenvalues into single levels with summed occupation.
  int i = 0;
  while (i < obs.dim()) {
    int j = i;
    double occ = 0.0;
    double energy_sum = 0.0;
    while (j < obs.dim() && evals[j] - evals[i] <= tol_degenerate) {
      occ += std::norm(evecs.col(j).dot(psi.amplitudes()));
      energy_sum += evals[j];
      ++j;
    }
    if (occ > tol_occ) {
      profile.levels.push_back({energy_sum / (j - i), occ});
    }
    i = j;
  }

  double mean = 0.0;
  for (const auto& level : profile.levels) mean += level.occupation * level.energy;
  profile.expected_energy = mean;
  profile.eps_min = profile.levels.front().energy;
  profile.eps_max = profile.levels.back().energy;
  for (const auto& level : profile.levels) {
    if (level.energy < mean - tol_eq) {
      profile.eps_below = level.energy;  // ascending order: keeps the largest
    } else if (level.energy > mean + tol_eq && !profile.eps_above) {
      profile.eps_above = level.energy;
    }
  }
  return profile;
}

double expectation(const HermitianObservable& obs, const StateVector& psi) {
  if (obs.dim() != psi.dim()) {
    throw DimensionMismatch("expectation: dimension mismatch");
  }
  return std::real(psi.amplitudes().dot(obs.matrix() * psi.amplitudes()));
}

double variance(const HermitianObservable& obs, const StateVector& psi) {
  if (obs.dim() != psi.dim()) {
    throw DimensionMismatch("variance: dimension mismatch");
  }
  const Vector h_psi = obs.matrix() * psi.amplitudes();
  const double second_moment = std::real(h_psi.dot(h_psi));
  const double mean = std::real(psi.amplitudes().dot(h_psi));
  return std::max(0.0, second_moment - mean * mean);
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }
double RabiVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, 1), Complex(0, -1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}

namespace {
double pauli_trace(const Matrix& rho, const Matrix& sigma) {
  return std::real((rho * sigma).trace());
}
}  // namespace

BlochVector bloch_vector(const StateVector& psi) {
  if (psi.dim() != 2) {
    throw DimensionMismatch("bloch_vector is defined for qubits only");
  }
  const Matrix rho = psi.projector();
  return {pauli_trace(rho, pauli_x()), pauli_trace(rho, pauli_y()),
          pauli_trace(rho, pauli_z())};
}

RabiVector rabi_vector(const HermitianObservable& obs) {
  if (obs.dim() != 2) {
    throw DimensionMismatch("rabi_vector is defined for qubits only");
  }
  return {pauli_trace(obs.matrix(), pauli_x()), pauli_trace(obs.matrix(), pauli_y()),
          pauli_trace(obs.matrix(), pauli_z())};
}

}  // namespace hb
