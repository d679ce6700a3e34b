#pragma once

// Numerical certificates for the generalized Stratonovich-Weyl properties of a
// quorum {Q_n} and its dual {Q^n}: hermiticity, completeness (two resolutions
// of the identity), bi-orthogonality, SU(2) covariance, and inversion through
// the dual kernel.
//
// Checks run on a KernelPair, a plain copy of both families, so that negative
// controls can hand in perturbed or cross-wired kernels.

#include "evrep/quorum.hpp"
#include "evrep/random_states.hpp"
#include "evrep/spin.hpp"

#include <string>
#include <vector>

namespace evrep {

struct CheckResult {
  std::string name;
  Real residual = 0;
  Real threshold = 0;
  bool pass = false;
};

inline CheckResult make_check(std::string name, Real residual, Real threshold) {
  return {std::move(name), residual, threshold, std::isfinite(residual) && residual < threshold};
}

struct SwReport {
  std::vector<CheckResult> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

struct KernelPair {
  TwoS two_s;
  std::vector<Direction> directions;
  std::vector<CMatrix> primal;
  std::vector<CMatrix> dual;

  static KernelPair from(const Quorum& q) {
    KernelPair k{q.two_s(), q.scheme().directions(), {}, {}};
    for (const auto& op : q.kernels()) k.primal.push_back(op.matrix());
    for (const auto& op : q.duals()) k.dual.push_back(op.matrix());
    return k;
  }

  std::size_t size() const { return primal.size(); }
  Real dim() const { return Real(two_s.dim()); }
};

inline constexpr Real hermiticity_threshold = 1e-10L;
inline constexpr Real sw_threshold = 1e-9L;

namespace detail {

inline Complex trace_of_product(const CMatrix& a, const CMatrix& b) {
  return (a.array() * b.transpose().array()).sum();
}

}  // namespace detail

/// max_n ||K - K^dagger|| over both families.
inline CheckResult check_hermiticity(const KernelPair& k) {
  Real worst = 0;
  for (const auto& m : k.primal) worst = std::max(worst, max_abs(m - m.adjoint()));
  for (const auto& m : k.dual) worst = std::max(worst, max_abs(m - m.adjoint()));
  return make_check("hermiticity", worst, hermiticity_threshold);
}

/// Both resolutions of the identity, with coefficients given by the symbols
/// of the unit operator: tr[Q_n] = 1 against the duals, tr[Q^n] against the
/// projectors. Also confirms the lower unit symbol is all ones.
inline CheckResult check_completeness(const KernelPair& k) {
  const auto d = Eigen::Index(k.two_s.dim());
  const CMatrix id = CMatrix::Identity(d, d);
  CMatrix via_dual = CMatrix::Zero(d, d);
  CMatrix via_primal = CMatrix::Zero(d, d);
  Real unit_symbol = 0;
  for (std::size_t n = 0; n < k.size(); ++n) {
    const Complex lower_unit = k.primal[n].trace();
    const Complex upper_unit = k.dual[n].trace();
    unit_symbol = std::max(unit_symbol, std::abs(lower_unit - Real{1}));
    via_dual += lower_unit * k.dual[n];
    via_primal += upper_unit * k.primal[n];
  }
  via_dual /= k.dim();
  via_primal /= k.dim();
  const Real r = std::max({max_abs(via_dual - id), max_abs(via_primal - id), unit_symbol});
  return make_check("completeness", r, sw_threshold);
}

/// max |(1/(2s+1)) tr[Q_n Q^m] - delta_nm|.
inline CheckResult check_biorthogonality(const KernelPair& k) {
  Real worst = 0;
  for (std::size_t a = 0; a < k.size(); ++a)
    for (std::size_t b = 0; b < k.size(); ++b) {
      const Complex v = detail::trace_of_product(k.primal[a], k.dual[b]) / k.dim();
      worst = std::max(worst, std::abs(v - Real(a == b ? 1 : 0)));
    }
  return make_check("biorthogonality", worst, sw_threshold);
}

/// U_R Q_n U_R^dagger against the projector onto the coherent state at R n_n.
/// R n_n need not belong to the scheme; covariance is a property of kernels.
inline CheckResult check_covariance(const KernelPair& k, const Vec3& axis, Real angle) {
  const auto u = rotation_operator(k.two_s, axis, angle);
  const auto r = rotation_matrix(axis, angle);
  Real worst = 0;
  for (std::size_t n = 0; n < k.size(); ++n) {
    const Direction moved = Direction::from_unit_vector(r * k.directions[n].unit_vector());
    const CVector v = coherent_state(k.two_s, moved).amplitudes();
    worst = std::max(worst, max_abs(u.conjugate(k.primal[n]) - v * v.adjoint()));
  }
  return make_check("covariance", worst, sw_threshold);
}

/// For cone schemes: rotating by 2pi/(2s+1) about z permutes each cone,
/// (mu, nu) -> (mu, nu + 1), and must permute both kernel families alike.
/// Residuals are relative to the largest entry of each family.
inline CheckResult check_scheme_symmetry(const KernelPair& k) {
  const std::size_t d = k.two_s.dim();
  const auto u = rotation_operator(k.two_s, Vec3::UnitZ(), 2 * pi / Real(d));
  const auto family_scale = [](const std::vector<CMatrix>& family) {
    Real m = 0;
    for (const auto& x : family) m = std::max(m, max_abs(x));
    return m > 0 ? m : Real{1};
  };
  const Real primal_scale = family_scale(k.primal);
  const Real dual_scale = family_scale(k.dual);
  Real worst = 0;
  for (std::size_t mu = 0; mu < d; ++mu)
    for (std::size_t nu = 0; nu < d; ++nu) {
      const std::size_t from = mu * d + nu;
      const std::size_t to = mu * d + (nu + 1) % d;
      worst = std::max(worst, max_abs(u.conjugate(k.primal[from]) - k.primal[to]) / primal_scale);
      worst = std::max(worst, max_abs(u.conjugate(k.dual[from]) - k.dual[to]) / dual_scale);
    }
  return make_check("scheme_symmetry", worst, sw_threshold);
}

/// Random Hermitian A: lower symbol from the primal family, rebuilt with the
/// dual family; and the reverse. Fails if the families are not mutually dual.
inline CheckResult check_inversion(const KernelPair& k, std::uint64_t seed = 1, int trials = 5) {
  Rng rng(seed);
  const auto d = Eigen::Index(k.two_s.dim());
  Real worst = 0;
  for (int t = 0; t < trials; ++t) {
    const CMatrix a = random_hermitian(k.two_s, rng).matrix();
    CMatrix via_lower = CMatrix::Zero(d, d);
    CMatrix via_upper = CMatrix::Zero(d, d);
    for (std::size_t n = 0; n < k.size(); ++n) {
      via_lower += detail::trace_of_product(a, k.primal[n]) * k.dual[n];
      via_upper += detail::trace_of_product(a, k.dual[n]) * k.primal[n];
    }
    const Real scale = max_abs(a);
    worst = std::max(worst, max_abs(via_lower / k.dim() - a) / scale);
    worst = std::max(worst, max_abs(via_upper / k.dim() - a) / scale);
  }
  return make_check("inversion", worst, sw_threshold);
}

inline bool is_cone_layout(const Quorum& q) { return q.scheme().has_cones(); }

/// The full suite. Scheme symmetry is included only for cone layouts.
inline SwReport run_sw_checks(const KernelPair& k, bool cone_layout, const Vec3& axis, Real angle) {
  SwReport r;
  r.checks.push_back(check_hermiticity(k));
  r.checks.push_back(check_completeness(k));
  r.checks.push_back(check_biorthogonality(k));
  r.checks.push_back(check_covariance(k, axis, angle));
  if (cone_layout) r.checks.push_back(check_scheme_symmetry(k));
  r.checks.push_back(check_inversion(k));
  return r;
}

inline SwReport run_sw_checks(const Quorum& q, const Vec3& axis, Real angle) {
  return run_sw_checks(KernelPair::from(q), is_cone_layout(q), axis, angle);
}

/// Default covariance probe: a fixed generic axis and angle.
inline Vec3 default_probe_axis() { return Vec3(1, 2, 2) / 3; }
inline constexpr Real default_probe_angle = 0.7L;

inline SwReport run_sw_checks(const Quorum& q) { return run_sw_checks(q, default_probe_axis(), default_probe_angle); }

}  // namespace evrep
