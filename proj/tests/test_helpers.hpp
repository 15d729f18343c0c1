#pragma once

#include <random>

#include "hb/quantum_core.hpp"

namespace hb::testing {

inline hb::Matrix random_hermitian(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  hb::Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < dim; ++c) {
      m(r, c) = hb::Complex(gauss(rng), gauss(rng));
    }
  }
  return 0.5 * (m + m.adjoint().eval());
}

inline hb::StateVector random_state(int dim, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  hb::Vector v(dim);
  for (int k = 0; k < dim; ++k) {
    v[k] = hb::Complex(gauss(rng), gauss(rng));
  }
  return hb::StateVector(v);
}

inline hb::Vector basis_state(int dim, int index) {
  hb::Vector v = hb::Vector::Zero(dim);
  v[index] = 1.0;
  return v;
}

}  // namespace hb::testing
