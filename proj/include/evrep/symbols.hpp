#pragma once

// Two-sided symbol calculus over a quorum.
//
//   lower symbol  A_n = tr[A Q_n]      A = (1/(2s+1)) sum_n A_n Q^n
//   upper symbol  A^n = tr[A Q^n]      A = (1/(2s+1)) sum_n A^n Q_n

#include "evrep/quorum.hpp"
#include "evrep/spin.hpp"
#include "evrep/symbol_vector.hpp"

#include <stdexcept>

namespace evrep {

namespace detail {

inline void require_dim(const Quorum& q, const HermitianOperator& a) {
  if (a.dim() != q.dim()) throw std::invalid_argument("operator dimension does not match quorum");
}

inline void require_length(const Quorum& q, const SymbolVector& s) {
  if (s.size() != q.size()) throw std::invalid_argument("symbol length does not match quorum size");
}

}  // namespace detail

inline SymbolVector lower_symbol(const Quorum& q, const HermitianOperator& a) {
  detail::require_dim(q, a);
  RVector values(Eigen::Index(q.size()));
  const Real scale = std::max(Real{1}, max_abs(a.matrix()));
  for (std::size_t n = 0; n < q.size(); ++n) {
    const Complex e = a.expectation(q.states()[n]);
    if (std::abs(e.imag()) > 1e-12L * scale) throw std::logic_error("lower symbol acquired an imaginary part");
    values(Eigen::Index(n)) = e.real();
  }
  return {std::move(values), Variance::lower};
}

inline SymbolVector upper_symbol(const Quorum& q, const HermitianOperator& a) {
  detail::require_dim(q, a);
  return {q.dual_frame().transpose() * hermitian_coordinates(a.matrix()), Variance::upper};
}

inline HermitianOperator reconstruct_from_lower(const Quorum& q, const SymbolVector& sym) {
  detail::require_length(q, sym);
  if (sym.variance() != Variance::lower) throw std::invalid_argument("expected a lower symbol");
  const RVector coords = q.dual_frame() * sym.values() / Real(q.dim());
  return HermitianOperator(from_hermitian_coordinates(coords, Eigen::Index(q.dim())));
}

inline HermitianOperator reconstruct_from_upper(const Quorum& q, const SymbolVector& sym) {
  detail::require_length(q, sym);
  if (sym.variance() != Variance::upper) throw std::invalid_argument("expected an upper symbol");
  const RVector coords = q.frame() * sym.values() / Real(q.dim());
  return HermitianOperator(from_hermitian_coordinates(coords, Eigen::Index(q.dim())));
}

/// tr[A B] from the symbols of A and B, any combination of variances.
///
/// Mixed variances contract directly with 1/(2s+1). Two upper symbols contract
/// with G/(2s+1)^2. Two lower symbols contract with the raised metric
/// (2s+1)^2 G^{-1} and the same 1/(2s+1)^2 prefactor, i.e. with G^{-1} itself.
inline Real trace_pairing(const Quorum& q, const SymbolVector& a, const SymbolVector& b) {
  detail::require_length(q, a);
  detail::require_length(q, b);
  const Real d = Real(q.dim());
  if (a.variance() != b.variance()) return a.values().dot(b.values()) / d;
  if (a.variance() == Variance::upper) return a.values().dot(q.gram() * b.values()) / (d * d);
  return a.values().dot(q.gram_inverse() * b.values());
}

}  // namespace evrep
