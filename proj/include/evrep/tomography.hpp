#pragma once

// Stern-Gerlach tomography on a quorum: P_n = <n_n| rho |n_n> is the
// probability of finding the value s along n_n, and
// rho = (1/(2s+1)) sum_n P_n Q^n.

#include "evrep/quorum.hpp"
#include "evrep/spin.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace evrep {

class InvalidState : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DegenerateState : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Positive semidefinite operator; normalization is not enforced.
class DensityMatrix {
 public:
  static constexpr Real psd_tolerance = 1e-8L;

  explicit DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
    if (min_eigenvalue() < -psd_tolerance) throw InvalidState("density matrix is not positive semidefinite");
  }

  static DensityMatrix pure(const StateVector& psi) {
    return DensityMatrix(HermitianOperator(psi.amplitudes() * psi.amplitudes().adjoint() /
                                           psi.amplitudes().squaredNorm()));
  }

  static DensityMatrix maximally_mixed(TwoS two_s) {
    return DensityMatrix(Real{1} / Real(two_s.dim()) * HermitianOperator::identity(two_s.dim()));
  }

  const HermitianOperator& op() const noexcept { return op_; }
  const CMatrix& matrix() const noexcept { return op_.matrix(); }
  std::size_t dim() const noexcept { return op_.dim(); }
  Real trace() const { return op_.trace(); }
  Real min_eigenvalue() const { return op_.eigenvalues().minCoeff(); }
  bool normalized(Real tol = 1e-10L) const { return std::abs(trace() - 1) <= tol; }

 private:
  HermitianOperator op_;
};

/// One probability per quorum direction. Exact mode has no shot count;
/// sampled mode carries the per-direction shots and raw counts.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(RVector values) : values_(std::move(values)) {
    if (!values_.allFinite()) throw std::invalid_argument("probabilities must be finite");
  }
  ProbabilityVector(RVector values, std::int64_t shots, std::vector<std::int64_t> counts)
      : ProbabilityVector(std::move(values)) {
    if (shots <= 0) throw std::invalid_argument("shot count must be positive");
    if (counts.size() != std::size_t(values_.size())) throw std::invalid_argument("one count per direction");
    shots_ = shots;
    counts_ = std::move(counts);
  }

  const RVector& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return std::size_t(values_.size()); }
  Real operator[](std::size_t n) const { return values_(Eigen::Index(n)); }
  bool exact() const noexcept { return !shots_.has_value(); }
  std::optional<std::int64_t> shots() const noexcept { return shots_; }
  const std::vector<std::int64_t>& counts() const noexcept { return counts_; }

 private:
  RVector values_;
  std::optional<std::int64_t> shots_;
  std::vector<std::int64_t> counts_;
};

inline ProbabilityVector exact_probabilities(const Quorum& q, const DensityMatrix& rho) {
  if (rho.dim() != q.dim()) throw std::invalid_argument("state dimension does not match quorum");
  constexpr Real roundoff = 64 * std::numeric_limits<Real>::epsilon();
  RVector p(Eigen::Index(q.size()));
  for (std::size_t n = 0; n < q.size(); ++n) {
    Real v = rho.op().expectation(q.states()[n]).real();
    // Clamp only rounding excursions past the ends of [0, 1].
    if (v < 0 && v > -roundoff) v = 0;
    if (v > 1 && v < 1 + roundoff) v = 1;
    p(Eigen::Index(n)) = v;
  }
  return ProbabilityVector(std::move(p));
}

/// Independent Binomial(shots, P_n) draw per direction; deterministic in seed.
inline ProbabilityVector sample_counts(const ProbabilityVector& p, std::int64_t shots, std::uint64_t seed) {
  if (!p.exact()) throw std::invalid_argument("sampling requires exact probabilities");
  if (shots <= 0) throw std::invalid_argument("shot count must be positive");
  std::mt19937_64 rng(seed);
  RVector freq(Eigen::Index(p.size()));
  std::vector<std::int64_t> counts(p.size());
  for (std::size_t n = 0; n < p.size(); ++n) {
    const Real pn = p[n];
    if (pn < -1e-12L || pn > 1 + 1e-12L) throw std::invalid_argument("probability outside [0, 1]");
    std::binomial_distribution<std::int64_t> draw(shots, double(std::clamp(pn, Real{0}, Real{1})));
    counts[n] = draw(rng);
    freq(Eigen::Index(n)) = Real(counts[n]) / Real(shots);
  }
  return ProbabilityVector(std::move(freq), shots, std::move(counts));
}

/// Raw linear estimate plus the diagnostics needed to judge it.
struct DensityEstimate {
  HermitianOperator rho;
  Real trace;
  Real min_eigenvalue;

  bool physical(Real tol = DensityMatrix::psd_tolerance) const { return min_eigenvalue >= -tol; }
};

inline DensityEstimate reconstruct_density(const Quorum& q, const ProbabilityVector& p) {
  if (p.size() != q.size()) throw std::invalid_argument("probability vector length does not match quorum");
  const RVector coords = q.dual_frame() * p.values() / Real(q.dim());
  HermitianOperator rho(from_hermitian_coordinates(coords, Eigen::Index(q.dim())));
  const Real tr = rho.trace();
  const Real lmin = rho.eigenvalues().minCoeff();
  return {std::move(rho), tr, lmin};
}

/// tr[rho] expressed through the probabilities: (1/(2s+1)) sum_n tr[Q^n] P_n.
inline Real normalization_functional(const Quorum& q, const ProbabilityVector& p) {
  if (p.size() != q.size()) throw std::invalid_argument("probability vector length does not match quorum");
  return q.dual_traces().dot(p.values()) / Real(q.dim());
}

struct ProbabilityValidation {
  bool in_unit_interval = false;
  Real sum = 0;
  bool sum_in_bounds = false;
  Real normalization_residual = 0;
  Real normalization_tolerance = 0;
  bool normalized = false;

  bool ok() const { return in_unit_interval && sum_in_bounds && normalized; }
};

/// Exact-mode normalization tolerance.
inline constexpr Real exact_normalization_tolerance = 1e-9L;

/// Checks 0 <= P_n <= 1, 0 < sum P_n < (2s+1)^2 and the normalization residual.
/// Sampled data is judged against five standard errors of the normalization
/// functional, propagated from the binomial variances P(1-P)/shots.
inline ProbabilityValidation validate_probabilities(const Quorum& q, const ProbabilityVector& p) {
  ProbabilityValidation v;
  if (p.size() != q.size()) return v;
  v.in_unit_interval = (p.values().array() >= 0).all() && (p.values().array() <= 1).all();
  v.sum = p.values().sum();
  v.sum_in_bounds = v.sum > 0 && v.sum < Real(q.size());
  v.normalization_residual = std::abs(normalization_functional(q, p) - 1);
  v.normalization_tolerance = exact_normalization_tolerance;
  if (!p.exact()) {
    const RVector c = q.dual_traces() / Real(q.dim());
    Real variance = 0;
    for (std::size_t n = 0; n < p.size(); ++n) {
      const Real pn = std::clamp(p[n], Real{0}, Real{1});
      variance += c(Eigen::Index(n)) * c(Eigen::Index(n)) * pn * (1 - pn) / Real(*p.shots());
    }
    v.normalization_tolerance = std::max(v.normalization_tolerance, 5 * std::sqrt(variance));
  }
  v.normalized = v.normalization_residual <= v.normalization_tolerance;
  return v;
}

inline constexpr Real degenerate_trace = 1e-12L;

inline HermitianOperator normalize(const HermitianOperator& rho) {
  const Real tr = rho.trace();
  if (!(tr > degenerate_trace)) throw DegenerateState("cannot normalize an operator with non-positive trace");
  return (1 / tr) * rho;
}

/// Clips negative eigenvalues to zero and rescales to unit trace.
inline DensityMatrix psd_project(const HermitianOperator& rho) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho.matrix());
  const RVector clipped = eig.eigenvalues().cwiseMax(Real{0});
  const Real tr = clipped.sum();
  if (!(tr > degenerate_trace)) throw DegenerateState("no positive spectral weight left after clipping");
  const CVector weights = (clipped / tr).cast<Complex>();
  return DensityMatrix(HermitianOperator(eig.eigenvectors() * weights.asDiagonal() * eig.eigenvectors().adjoint()));
}

namespace detail {

inline CMatrix psd_sqrt(const CMatrix& a) {
  const Eigen::SelfAdjointEigenSolver<CMatrix> eig(a);
  const CVector r = eig.eigenvalues().cwiseMax(Real{0}).cwiseSqrt().cast<Complex>();
  return eig.eigenvectors() * r.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace detail

/// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2; negative eigenvalues are clipped.
inline Real fidelity(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("operator dimensions differ");
  const CMatrix ra = detail::psd_sqrt(a.matrix());
  CMatrix inner = ra * b.matrix() * ra;
  inner = (inner + inner.adjoint()) / Real{2};
  const Real t = detail::psd_sqrt(inner).trace().real();
  return t * t;
}

}  // namespace evrep
