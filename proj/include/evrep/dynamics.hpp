#pragma once

// Von Neumann evolution written on the probability vector (hbar = 1):
//   dP_n/dt = sum_m L_nm P_m,   L_nm = (1/(2s+1)) tr[Q_n (-i)[H, Q^m]].

#include "evrep/quorum.hpp"
#include "evrep/spin.hpp"
#include "evrep/tomography.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace evrep {

class EvolutionGenerator {
 public:
  EvolutionGenerator(RMatrix matrix, HermitianOperator hamiltonian)
      : matrix_(std::move(matrix)), hamiltonian_(std::move(hamiltonian)) {}

  const RMatrix& matrix() const noexcept { return matrix_; }
  const HermitianOperator& hamiltonian() const noexcept { return hamiltonian_; }

  RVector apply(const RVector& p) const { return matrix_ * p; }

 private:
  RMatrix matrix_;
  HermitianOperator hamiltonian_;
};

inline EvolutionGenerator evolution_generator(const Quorum& q, const HermitianOperator& h) {
  if (h.dim() != q.dim()) throw std::invalid_argument("Hamiltonian dimension does not match quorum");
  const auto n = Eigen::Index(q.size());
  const Complex minus_i{0, -1};
  RMatrix l(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const CMatrix& dual = q.dual(std::size_t(m)).matrix();
    // -i[H, Q^m] is Hermitian; its lower symbol is column m of L up to 1/(2s+1).
    const CMatrix rate = minus_i * (h.matrix() * dual - dual * h.matrix());
    for (Eigen::Index k = 0; k < n; ++k) {
      const CVector& v = q.states()[std::size_t(k)].amplitudes();
      l(k, m) = v.dot(rate * v).real() / Real(q.dim());
    }
  }
  return {std::move(l), h};
}

namespace detail {

inline void require_finite(const RVector& p, Real t, Real dt) {
  if (!p.allFinite() || !std::isfinite(t) || !std::isfinite(dt))
    throw std::invalid_argument("propagation inputs must be finite");
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  if (t < 0) throw std::invalid_argument("propagation time must be non-negative");
}

inline RVector rk4_step(const RMatrix& l, const RVector& p, Real h) {
  const RVector k1 = l * p;
  const RVector k2 = l * (p + h / 2 * k1);
  const RVector k3 = l * (p + h / 2 * k2);
  const RVector k4 = l * (p + h * k3);
  return p + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
}

inline std::size_t step_count(Real t, Real dt) {
  // Tolerate t/dt landing a hair above an integer.
  return std::size_t(std::ceil(t / dt - 1e-9L));
}

}  // namespace detail

/// Calls observer(t, P) at t = 0 and after every `every`-th step, always
/// including the final time. Steps are of size dt except possibly the last.
inline void propagate_observed(const EvolutionGenerator& g, const ProbabilityVector& p0, Real t, Real dt,
                               std::size_t every, const std::function<void(Real, const RVector&)>& observer) {
  detail::require_finite(p0.values(), t, dt);
  if (p0.size() != std::size_t(g.matrix().rows()))
    throw std::invalid_argument("probability vector length does not match generator");
  if (every == 0) every = 1;
  const std::size_t steps = detail::step_count(t, dt);
  RVector p = p0.values();
  observer(0, p);
  for (std::size_t k = 1; k <= steps; ++k) {
    const Real t_prev = Real(k - 1) * dt;
    const Real t_next = k == steps ? t : Real(k) * dt;
    p = detail::rk4_step(g.matrix(), p, t_next - t_prev);
    if (k % every == 0 || k == steps) observer(t_next, p);
  }
}

/// Classical fixed-step fourth-order Runge-Kutta integration of dP/dt = L P.
inline ProbabilityVector propagate(const EvolutionGenerator& g, const ProbabilityVector& p0, Real t, Real dt) {
  RVector out = p0.values();
  propagate_observed(g, p0, t, dt, std::numeric_limits<std::size_t>::max(),
                     [&](Real, const RVector& p) { out = p; });
  return ProbabilityVector(std::move(out));
}

/// rho(t) = U rho0 U^dagger with U = exp(-i H t).
inline DensityMatrix exact_state(const DensityMatrix& rho0, const HermitianOperator& h, Real t) {
  if (h.dim() != rho0.dim()) throw std::invalid_argument("Hamiltonian dimension does not match state");
  const CMatrix u = unitary_exponential(h, t);
  const CMatrix rho = u * rho0.matrix() * u.adjoint();
  return DensityMatrix(HermitianOperator((rho + rho.adjoint()) / Real{2}));
}

inline ProbabilityVector exact_propagate(const Quorum& q, const DensityMatrix& rho0, const HermitianOperator& h,
                                         Real t) {
  if (rho0.dim() != q.dim()) throw std::invalid_argument("state dimension does not match quorum");
  return exact_probabilities(q, exact_state(rho0, h, t));
}

}  // namespace evrep
