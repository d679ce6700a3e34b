#pragma once

// Seeded random operators for tests and simulations.

#include "evrep/spin.hpp"

#include <random>

namespace evrep {

using Rng = std::mt19937_64;

inline CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

/// Hilbert-Schmidt ensemble: X X^dagger / tr, X complex Gaussian.
inline HermitianOperator random_density(TwoS two_s, Rng& rng) {
  const auto d = Eigen::Index(two_s.dim());
  const CMatrix x = gaussian_matrix(d, d, rng);
  const CMatrix rho = x * x.adjoint();
  return HermitianOperator(rho / rho.trace().real());
}

inline StateVector random_pure_state(TwoS two_s, Rng& rng) {
  const CVector v = gaussian_matrix(Eigen::Index(two_s.dim()), 1, rng);
  return StateVector(v / v.norm());
}

/// GUE-like Hermitian matrix, (X + X^dagger)/2.
inline HermitianOperator random_hermitian(TwoS two_s, Rng& rng) {
  const auto d = Eigen::Index(two_s.dim());
  const CMatrix x = gaussian_matrix(d, d, rng);
  return HermitianOperator((x + x.adjoint()) / Real{2});
}

inline Direction random_direction(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Real z = 2 * Real(u(rng)) - 1;
  return Direction(std::acos(z), 2 * pi * Real(u(rng)));
}

}  // namespace evrep
