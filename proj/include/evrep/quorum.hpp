#pragma once

// Measurement directions, the projector quorum Q_n = |n><n|, its Gram metric
// G_nm = tr[Q_n Q_m] and the dual family Q^n with (1/(2s+1)) tr[Q_n Q^m] = delta.
//
// Duals are computed from the frame matrix F, whose column n holds the
// coordinates of Q_n in an orthonormal basis of Hermitian matrices. Then
// G = F^T F and the dual coordinates are (2s+1) F^{-T}; solving with F rather
// than G keeps the error proportional to cond(F) = sqrt(cond(G)).

#include "evrep/spin.hpp"
#include "evrep/symbol_vector.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace evrep {

class IllConditionedScheme : public std::runtime_error {
 public:
  explicit IllConditionedScheme(Real condition_number)
      : std::runtime_error(describe(condition_number)), condition_number_(condition_number) {}

  Real condition_number() const noexcept { return condition_number_; }

 private:
  static std::string describe(Real c) {
    std::ostringstream os;
    os << "direction scheme is numerically singular (condition number of G = " << double(c) << ")";
    return os.str();
  }
  Real condition_number_;
};

/// Ordered set of (2s+1)^2 measurement directions, optionally laid out on 2s+1
/// cones about z with index n = mu (2s+1) + nu.
class DirectionScheme {
 public:
  static DirectionScheme from_cones(TwoS two_s, std::vector<Real> cone_thetas, std::vector<Real> phi_offsets) {
    const std::size_t d = two_s.dim();
    if (cone_thetas.size() != d || phi_offsets.size() != d)
      throw std::invalid_argument("expected " + std::to_string(d) + " cone angles and azimuth offsets");
    for (std::size_t mu = 0; mu < d; ++mu) {
      const Real t = cone_thetas[mu];
      if (!std::isfinite(t) || !(t > 0) || !(t < pi))
        throw std::invalid_argument("cone angles must lie strictly inside (0, pi)");
      if (mu > 0 && !(t > cone_thetas[mu - 1]))
        throw std::invalid_argument("cone angles must be strictly increasing");
      if (!std::isfinite(phi_offsets[mu])) throw std::invalid_argument("azimuth offsets must be finite");
    }
    std::vector<Direction> dirs;
    dirs.reserve(d * d);
    for (std::size_t mu = 0; mu < d; ++mu)
      for (std::size_t nu = 0; nu < d; ++nu)
        dirs.emplace_back(cone_thetas[mu], phi_offsets[mu] + 2 * pi * Real(nu) / Real(d));
    DirectionScheme s(two_s, std::move(dirs));
    s.cone_thetas_ = std::move(cone_thetas);
    s.phi_offsets_ = std::move(phi_offsets);
    return s;
  }

  /// Arbitrary layout; only the count and pairwise distinctness are enforced.
  static DirectionScheme from_directions(TwoS two_s, std::vector<Direction> directions) {
    if (directions.size() != two_s.quorum_size())
      throw std::invalid_argument("expected " + std::to_string(two_s.quorum_size()) + " directions");
    return DirectionScheme(two_s, std::move(directions));
  }

  TwoS two_s() const noexcept { return two_s_; }
  std::size_t size() const noexcept { return directions_.size(); }
  bool has_cones() const noexcept { return !cone_thetas_.empty(); }
  const std::vector<Real>& cone_thetas() const noexcept { return cone_thetas_; }
  const std::vector<Real>& cone_phi_offsets() const noexcept { return phi_offsets_; }
  const std::vector<Direction>& directions() const noexcept { return directions_; }
  const Direction& operator[](std::size_t n) const { return directions_.at(n); }

  std::size_t index(std::size_t mu, std::size_t nu) const { return mu * two_s_.dim() + nu; }

  /// The same directions rigidly rotated; the cone layout is dropped.
  DirectionScheme rotated(const Vec3& axis, Real angle) const {
    const auto r = rotation_matrix(axis, angle);
    std::vector<Direction> dirs;
    dirs.reserve(size());
    for (const auto& d : directions_) dirs.push_back(Direction::from_unit_vector(r * d.unit_vector()));
    return from_directions(two_s_, std::move(dirs));
  }

 private:
  DirectionScheme(TwoS two_s, std::vector<Direction> directions)
      : two_s_(two_s), directions_(std::move(directions)) {
    for (std::size_t a = 0; a < directions_.size(); ++a)
      for (std::size_t b = a + 1; b < directions_.size(); ++b)
        if ((directions_[a].unit_vector() - directions_[b].unit_vector()).norm() < 1e-12L)
          throw std::invalid_argument("directions " + std::to_string(a) + " and " + std::to_string(b) +
                                      " coincide");
  }

  TwoS two_s_;
  std::vector<Real> cone_thetas_;
  std::vector<Real> phi_offsets_;
  std::vector<Direction> directions_;
};

/// Cones at theta_mu = pi (mu+1)/(2s+2), azimuths staggered by pi mu/(2s+1)^2.
inline DirectionScheme standard_directions(TwoS two_s) {
  const std::size_t d = two_s.dim();
  std::vector<Real> thetas(d), offsets(d);
  for (std::size_t mu = 0; mu < d; ++mu) {
    thetas[mu] = pi * Real(mu + 1) / Real(d + 1);
    offsets[mu] = pi * Real(mu) / Real(d * d);
  }
  return DirectionScheme::from_cones(two_s, std::move(thetas), std::move(offsets));
}

namespace detail {

/// Columns hold the orthonormal coordinates of each |n><n|.
inline RMatrix frame_matrix(const std::vector<StateVector>& states, std::size_t dim) {
  const auto n = Eigen::Index(states.size());
  RMatrix f(Eigen::Index(dim * dim), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const CVector& v = states[std::size_t(k)].amplitudes();
    f.col(k) = hermitian_coordinates(v * v.adjoint());
  }
  return f;
}

inline std::vector<StateVector> coherent_states(const DirectionScheme& scheme) {
  std::vector<StateVector> states;
  states.reserve(scheme.size());
  for (const auto& d : scheme.directions()) states.push_back(coherent_state(scheme.two_s(), d));
  return states;
}

}  // namespace detail

struct ConditionReport {
  Real lambda_min = 0;
  Real lambda_max = 0;
  Real condition_number = 0;  ///< infinite when lambda_min is not resolvable
  int determinant_sign = 0;   ///< G = F^T F, so +1 (nonsingular) or 0
  bool singular = false;      ///< lambda_min / lambda_max below the build threshold
  /// lambda_min exceeds the round-off floor of the singular value computation.
  bool certified_positive_definite = false;
};

/// Relative threshold on lambda_min / lambda_max below which G counts as singular.
inline constexpr Real default_singular_threshold = 1e-13L;

namespace detail {

inline ConditionReport condition_from_singular_values(const RVector& sv, Real threshold) {
  ConditionReport r;
  const Real smax = sv.maxCoeff();
  const Real smin = sv.minCoeff();
  r.lambda_max = smax * smax;
  r.lambda_min = smin * smin;
  const Real floor = std::sqrt(Real(sv.size())) * std::numeric_limits<Real>::epsilon() * smax;
  r.certified_positive_definite = smin > floor;
  r.determinant_sign = r.certified_positive_definite ? 1 : 0;
  r.condition_number =
      r.certified_positive_definite ? r.lambda_max / r.lambda_min : std::numeric_limits<Real>::infinity();
  r.singular = !r.certified_positive_definite || r.lambda_min < threshold * r.lambda_max;
  return r;
}

}  // namespace detail

/// Spectrum of G without building duals. The eigenvalues of G are the squared
/// singular values of the frame matrix, which resolves lambda_min far below
/// what an eigen-solve of G itself could.
inline ConditionReport condition_report(const DirectionScheme& scheme,
                                        Real singular_threshold = default_singular_threshold) {
  const RMatrix f = detail::frame_matrix(detail::coherent_states(scheme), scheme.two_s().dim());
  const Eigen::BDCSVD<RMatrix> svd(f);
  return detail::condition_from_singular_values(svd.singularValues(), singular_threshold);
}

class Quorum;
Quorum build_quorum(const DirectionScheme& scheme, Real singular_threshold);

class Quorum {
 public:
  const DirectionScheme& scheme() const noexcept { return scheme_; }
  TwoS two_s() const noexcept { return scheme_.two_s(); }
  std::size_t size() const noexcept { return kernels_.size(); }
  std::size_t dim() const noexcept { return two_s().dim(); }

  const std::vector<StateVector>& states() const noexcept { return states_; }
  const std::vector<HermitianOperator>& kernels() const noexcept { return kernels_; }
  const std::vector<HermitianOperator>& duals() const noexcept { return duals_; }
  const HermitianOperator& kernel(std::size_t n) const { return kernels_.at(n); }
  const HermitianOperator& dual(std::size_t n) const { return duals_.at(n); }

  const RMatrix& gram() const noexcept { return gram_; }
  const RMatrix& gram_inverse() const noexcept { return gram_inverse_; }
  Real condition_number() const noexcept { return condition_.condition_number; }
  const ConditionReport& condition() const noexcept { return condition_; }

  /// Orthonormal coordinates of Q_n (columns).
  const RMatrix& frame() const noexcept { return frame_; }
  /// Orthonormal coordinates of Q^n (columns).
  const RMatrix& dual_frame() const noexcept { return dual_frame_; }

  /// tr[Q^n] for every n.
  RVector dual_traces() const { return dual_frame_.topRows(Eigen::Index(dim())).colwise().sum().transpose(); }

 private:
  friend Quorum build_quorum(const DirectionScheme&, Real);
  explicit Quorum(DirectionScheme scheme) : scheme_(std::move(scheme)) {}

  DirectionScheme scheme_;
  std::vector<StateVector> states_;
  std::vector<HermitianOperator> kernels_;
  std::vector<HermitianOperator> duals_;
  RMatrix frame_;
  RMatrix dual_frame_;
  RMatrix gram_;
  RMatrix gram_inverse_;
  ConditionReport condition_;
};

inline Quorum build_quorum(const DirectionScheme& scheme, Real singular_threshold = default_singular_threshold) {
  Quorum q(scheme);
  const auto d = Eigen::Index(scheme.two_s().dim());
  const auto n = Eigen::Index(scheme.size());

  q.states_ = detail::coherent_states(scheme);
  q.frame_ = detail::frame_matrix(q.states_, std::size_t(d));

  const Eigen::BDCSVD<RMatrix> svd(q.frame_);
  q.condition_ = detail::condition_from_singular_values(svd.singularValues(), singular_threshold);
  if (q.condition_.singular) throw IllConditionedScheme(q.condition_.condition_number);

  q.gram_.resize(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    q.gram_(a, a) = 1;
    for (Eigen::Index b = a + 1; b < n; ++b)
      q.gram_(a, b) = q.gram_(b, a) = std::norm(overlap(q.states_[std::size_t(a)], q.states_[std::size_t(b)]));
  }

  // F^T X = (2s+1) I gives the dual coordinates column by column.
  const Eigen::FullPivLU<RMatrix> lu(q.frame_.transpose());
  q.dual_frame_ = lu.solve(Real(d) * RMatrix::Identity(n, n));
  q.gram_inverse_ = q.dual_frame_.transpose() * q.dual_frame_ / Real(d * d);

  q.kernels_.reserve(std::size_t(n));
  q.duals_.reserve(std::size_t(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    q.kernels_.push_back(HermitianOperator::projector(q.states_[std::size_t(k)]));
    q.duals_.emplace_back(from_hermitian_coordinates(q.dual_frame_.col(k), d));
  }
  return q;
}

/// lower_n = (1/(2s+1)) sum_m G_nm upper^m.
inline SymbolVector metric_lower(const Quorum& q, const SymbolVector& upper) {
  if (upper.variance() != Variance::upper) throw std::invalid_argument("metric_lower expects an upper symbol");
  if (upper.size() != q.size()) throw std::invalid_argument("symbol length does not match quorum size");
  return {q.gram() * upper.values() / Real(q.dim()), Variance::lower};
}

/// Inverse of metric_lower: upper = (2s+1) G^{-1} lower, evaluated through the frame.
inline SymbolVector metric_raise(const Quorum& q, const SymbolVector& lower) {
  if (lower.variance() != Variance::lower) throw std::invalid_argument("metric_raise expects a lower symbol");
  if (lower.size() != q.size()) throw std::invalid_argument("symbol length does not match quorum size");
  const RVector coords = q.dual_frame() * lower.values() / Real(q.dim());
  return {q.dual_frame().transpose() * coords, Variance::upper};
}

}  // namespace evrep
