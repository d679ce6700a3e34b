#pragma once

// Spin-s substrate: spin matrices, rotations, coherent states.
//
// Basis convention: amplitude index k = 0..2s labels |s-k, n_z>, i.e. the
// first entry is the highest weight state.

#include <Eigen/Dense>

#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace evrep {

using Real = long double;
using Complex = std::complex<Real>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Vec3 = Eigen::Matrix<Real, 3, 1>;

inline constexpr Real pi = std::numbers::pi_v<Real>;

/// Largest polar angle for which the stereographic expansion is used.
inline constexpr Real south_pole_margin = 1e-9L;

inline Real max_abs(const CMatrix& m) { return m.size() == 0 ? Real{0} : m.cwiseAbs().maxCoeff(); }

/// The spin quantum number stored as the integer 2s.
class TwoS {
 public:
  static constexpr int max_value = 100;

  explicit TwoS(int two_s) : value_(two_s) {
    if (two_s < 1 || two_s > max_value)
      throw std::invalid_argument("two_s must lie in [1, " + std::to_string(max_value) + "], got " +
                                  std::to_string(two_s));
  }

  int value() const noexcept { return value_; }
  Real spin() const noexcept { return Real(value_) / 2; }
  std::size_t dim() const noexcept { return std::size_t(value_) + 1; }
  std::size_t quorum_size() const noexcept { return dim() * dim(); }

  friend bool operator==(TwoS, TwoS) = default;

 private:
  int value_;
};

/// A point on the unit sphere, theta in [0, pi], phi wrapped into [0, 2pi).
class Direction {
 public:
  Direction(Real theta, Real phi) {
    if (!std::isfinite(theta) || !std::isfinite(phi))
      throw std::invalid_argument("direction angles must be finite");
    constexpr Real slack = 1e-12L;
    if (theta < -slack || theta > pi + slack)
      throw std::invalid_argument("polar angle outside [0, pi]");
    theta_ = std::clamp(theta, Real{0}, pi);
    phi_ = std::fmod(phi, 2 * pi);
    if (phi_ < 0) phi_ += 2 * pi;
    if (phi_ >= 2 * pi) phi_ = 0;
  }

  static Direction from_unit_vector(const Vec3& v) {
    const Real norm = v.norm();
    if (std::abs(norm - 1) > 1e-9L) throw std::invalid_argument("vector is not of unit length");
    const Real z = std::clamp(v.z() / norm, Real{-1}, Real{1});
    return Direction(std::acos(z), std::atan2(v.y(), v.x()));
  }

  Real theta() const noexcept { return theta_; }
  Real phi() const noexcept { return phi_; }

  Vec3 unit_vector() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_), std::cos(theta_)};
  }

  /// Stereographic coordinate z = tan(theta/2) e^{i phi}; undefined at the south pole.
  Complex stereo() const {
    if (theta_ >= pi - south_pole_margin)
      throw std::domain_error("stereographic coordinate undefined at the south pole");
    return std::polar(std::tan(theta_ / 2), phi_);
  }

 private:
  Real theta_;
  Real phi_;
};

class StateVector {
 public:
  explicit StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw std::invalid_argument("empty state vector");
  }

  const CVector& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dim() const noexcept { return std::size_t(amplitudes_.size()); }
  Real norm() const { return amplitudes_.norm(); }

 private:
  CVector amplitudes_;
};

/// Square complex matrix equal to its adjoint; stored exactly Hermitian.
class HermitianOperator {
 public:
  static constexpr Real tolerance = 1e-12L;

  explicit HermitianOperator(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
      throw std::invalid_argument("Hermitian operator must be a non-empty square matrix");
    const Real scale = std::max(Real{1}, max_abs(m));
    if (max_abs(m - m.adjoint()) > tolerance * scale)
      throw std::invalid_argument("matrix is not Hermitian");
    matrix_ = (m + m.adjoint()) / Real{2};
  }

  static HermitianOperator identity(std::size_t dim) {
    return HermitianOperator(CMatrix::Identity(Eigen::Index(dim), Eigen::Index(dim)));
  }

  static HermitianOperator projector(const StateVector& psi) {
    return HermitianOperator(psi.amplitudes() * psi.amplitudes().adjoint());
  }

  const CMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return std::size_t(matrix_.rows()); }
  Real trace() const { return matrix_.trace().real(); }

  RVector eigenvalues() const {
    return Eigen::SelfAdjointEigenSolver<CMatrix>(matrix_, Eigen::EigenvaluesOnly).eigenvalues();
  }

  Complex expectation(const StateVector& psi) const {
    return psi.amplitudes().dot(matrix_ * psi.amplitudes());
  }

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.matrix_ + b.matrix_);
  }
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(a.matrix_ - b.matrix_);
  }
  friend HermitianOperator operator*(Real c, const HermitianOperator& a) {
    return HermitianOperator(c * a.matrix_);
  }

 private:
  CMatrix matrix_;
};

/// Re tr[A B] for Hermitian A, B.
inline Real trace_product(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
  return (a.matrix().array() * b.matrix().transpose().array()).sum().real();
}

inline Real max_norm_distance(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
  return max_abs(a.matrix() - b.matrix());
}

// Coordinates in the orthonormal basis of Hermitian matrices under tr[AB]:
// diagonal entries first, then sqrt(2) Re A_ij and sqrt(2) Im A_ij for i < j.
inline RVector hermitian_coordinates(const CMatrix& a) {
  const Eigen::Index d = a.rows();
  RVector c(d * d);
  const Real r2 = std::sqrt(Real{2});
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < d; ++i) c(r++) = a(i, i).real();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      c(r++) = r2 * a(i, j).real();
      c(r++) = r2 * a(i, j).imag();
    }
  return c;
}

inline CMatrix from_hermitian_coordinates(const RVector& c, Eigen::Index d) {
  if (c.size() != d * d) throw std::invalid_argument("coordinate vector has wrong length");
  CMatrix a(d, d);
  const Real r2 = std::sqrt(Real{2});
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < d; ++i) a(i, i) = c(r++);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      a(i, j) = Complex(c(r), c(r + 1)) / r2;
      a(j, i) = std::conj(a(i, j));
      r += 2;
    }
  return a;
}

struct SpinOperators {
  HermitianOperator x;
  HermitianOperator y;
  HermitianOperator z;

  /// n . s for a 3-vector n.
  HermitianOperator along(const Vec3& n) const {
    return HermitianOperator(n.x() * x.matrix() + n.y() * y.matrix() + n.z() * z.matrix());
  }
};

inline SpinOperators spin_operators(TwoS two_s) {
  const auto d = Eigen::Index(two_s.dim());
  const Real s = two_s.spin();
  CMatrix raise = CMatrix::Zero(d, d);
  CMatrix sz = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Real m = s - Real(k);
    sz(k, k) = m;
    // s+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and |m+1> sits at index k-1.
    if (k > 0) raise(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  const CMatrix lower = raise.adjoint();
  const Complex i{0, 1};
  return {HermitianOperator((raise + lower) / Real{2}), HermitianOperator((raise - lower) / (Real{2} * i)),
          HermitianOperator(sz)};
}

/// exp(-i t G) for Hermitian G, by spectral decomposition.
inline CMatrix unitary_exponential(const HermitianOperator& generator, Real t) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(generator.matrix());
  CVector phases(eig.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(Real{1}, -t * eig.eigenvalues()(k));
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

class RotationOperator {
 public:
  static constexpr Real tolerance = 1e-10L;

  explicit RotationOperator(CMatrix u) : matrix_(std::move(u)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
      throw std::invalid_argument("rotation operator must be a non-empty square matrix");
    const auto d = matrix_.rows();
    if (max_abs(matrix_ * matrix_.adjoint() - CMatrix::Identity(d, d)) > tolerance)
      throw std::invalid_argument("rotation operator is not unitary");
  }

  const CMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return std::size_t(matrix_.rows()); }

  StateVector apply(const StateVector& psi) const {
    if (psi.dim() != dim()) throw std::invalid_argument("state dimension does not match rotation");
    return StateVector(matrix_ * psi.amplitudes());
  }

  /// U A U^dagger, returned unsymmetrised so that callers can measure its Hermiticity.
  CMatrix conjugate(const CMatrix& a) const { return matrix_ * a * matrix_.adjoint(); }

 private:
  CMatrix matrix_;
};

inline RotationOperator rotation_operator(TwoS two_s, const Vec3& axis, Real angle) {
  if (std::abs(axis.norm() - 1) > 1e-9L) throw std::invalid_argument("rotation axis is not a unit vector");
  if (!std::isfinite(angle)) throw std::invalid_argument("rotation angle must be finite");
  return RotationOperator(unitary_exponential(spin_operators(two_s).along(axis), angle));
}

/// Active rotation of 3-vectors matching rotation_operator (Rodrigues formula).
inline Eigen::Matrix<Real, 3, 3> rotation_matrix(const Vec3& axis, Real angle) {
  if (std::abs(axis.norm() - 1) > 1e-9L) throw std::invalid_argument("rotation axis is not a unit vector");
  Eigen::Matrix<Real, 3, 3> k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix<Real, 3, 3>::Identity() + std::sin(angle) * k + (1 - std::cos(angle)) * k * k;
}

/// sqrt(binomial(n, k)); exact products up to n = 60, log-gamma beyond.
inline Real sqrt_binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (n <= 60) {
    Real c = 1;
    for (int i = 1; i <= std::min(k, n - k); ++i) c = c * Real(n - std::min(k, n - k) + i) / Real(i);
    return std::sqrt(c);
  }
  return std::exp((std::lgamma(Real(n + 1)) - std::lgamma(Real(k + 1)) - std::lgamma(Real(n - k + 1))) / 2);
}

/// The axis m(phi) = (-sin phi, cos phi, 0) about which |s, n_z> is tilted.
inline Vec3 tilt_axis(Real phi) { return {-std::sin(phi), std::cos(phi), 0}; }

inline StateVector coherent_state(TwoS two_s, const Direction& dir) {
  const int n = two_s.value();
  CVector amp(n + 1);
  if (dir.theta() < pi - south_pole_margin) {
    const Complex z = dir.stereo();
    const Real prefactor = std::pow(1 + std::norm(z), -two_s.spin());
    Complex zk{1, 0};
    for (int k = 0; k <= n; ++k) {
      amp(k) = prefactor * sqrt_binomial(n, k) * zk;
      zk *= z;
    }
    return StateVector(amp);
  }
  CVector top = CVector::Zero(n + 1);
  top(0) = 1;
  return rotation_operator(two_s, tilt_axis(dir.phi()), dir.theta()).apply(StateVector(top));
}

/// <a|b>.
inline Complex overlap(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("overlap of states with different dimensions");
  return a.amplitudes().dot(b.amplitudes());
}

/// Max-norm deviation of (2s+1)/4pi * integral |n><n| dn from the identity, using
/// grid_order Gauss-Legendre nodes in cos(theta) times grid_order trapezoid nodes in phi.
inline Real resolution_of_identity_residual(TwoS two_s, int grid_order) {
  if (grid_order < 1) throw std::invalid_argument("grid order must be positive");
  const auto d = Eigen::Index(two_s.dim());

  std::vector<std::pair<Real, Real>> nodes;  // (cos theta, weight)
  for (Real x : boost::math::legendre_p_zeros<Real>(grid_order)) {
    const Real dp = boost::math::legendre_p_prime(grid_order, x);
    const Real w = 2 / ((1 - x * x) * dp * dp);
    nodes.emplace_back(x, w);
    if (x != 0) nodes.emplace_back(-x, w);
  }

  CMatrix sum = CMatrix::Zero(d, d);
  const Real dphi = 2 * pi / Real(grid_order);
  for (const auto& [x, w] : nodes) {
    const Real theta = std::acos(x);
    for (int j = 0; j < grid_order; ++j) {
      const CVector v = coherent_state(two_s, Direction(theta, dphi * Real(j))).amplitudes();
      sum += (w * dphi) * (v * v.adjoint());
    }
  }
  sum *= Real(d) / (4 * pi);
  return max_abs(sum - CMatrix::Identity(d, d));
}

}  // namespace evrep
