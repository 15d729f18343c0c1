#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

// Complex linear-algebra substrate: pure states, Hermitian observables with
// cached spectra, occupation analysis, and the qubit Bloch/Rabi maps.
namespace hb {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kTolNorm = 1e-12;
inline constexpr double kTolHermitian = 1e-10;
inline constexpr double kTolDegenerate = 1e-9;
inline constexpr double kTolOccupation = 1e-10;
inline constexpr double kTolEnergyEq = 1e-9;

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unit-norm complex vector representing a pure state.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }

  Complex overlap(const StateVector& other) const;
  double fidelity(const StateVector& other) const;

  /// Rank-1 projector |psi><psi|.
  Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  Vector amplitudes_;
};

/// Hermitian matrix with cached spectral decomposition (hbar = 1).
class HermitianObservable {
 public:
  explicit HermitianObservable(Matrix matrix, double tol = kTolHermitian);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const { return matrix_; }
  /// Ascending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  /// Orthonormal columns, same order as eigenvalues().
  const Matrix& eigenvectors() const { return eigenvectors_; }

  HermitianObservable scaled(double factor) const;
  HermitianObservable negated() const { return scaled(-1.0); }

 private:
  Matrix matrix_;
  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
};

struct OccupationLevel {
  double energy = 0.0;
  double occupation = 0.0;  // in [0, 1]
};

/// Distinct occupied eigenvalues of an observable for a given state, with the
/// occupied levels straddling the expected energy. eps_below is the largest
/// occupied energy below <H>, eps_above the smallest occupied energy above;
/// either may be missing, in which case the state is stationary.
struct OccupationProfile {
  std::vector<OccupationLevel> levels;
  double expected_energy = 0.0;
  std::optional<double> eps_below;
  std::optional<double> eps_above;
  double eps_min = 0.0;
  double eps_max = 0.0;

  bool stationary() const { return !eps_below || !eps_above; }
};

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
};

struct RabiVector {
  double x = 0.0, y = 0.0, z = 0.0;
  double norm() const;
};

OccupationProfile occupation_profile(const HermitianObservable& obs,
                                     const StateVector& psi,
                                     double tol_occ = kTolOccupation,
                                     double tol_degenerate = kTolDegenerate,
                                     double tol_eq = kTolEnergyEq);

double expectation(const HermitianObservable& obs, const StateVector& psi);
double variance(const HermitianObservable& obs, const StateVector& psi);

// Pauli operators with sigma_z = |1><1| - |0><0|; |0> sits at the south pole.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

BlochVector bloch_vector(const StateVector& psi);
RabiVector rabi_vector(const HermitianObservable& obs);

}  // namespace hb
