#pragma once

#include "evrep/spin.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace evrep {

/// Which kernel family a symbol was paired against: lower uses the quorum
/// projectors, upper uses their duals.
enum class Variance { lower, upper };

inline const char* to_string(Variance v) { return v == Variance::lower ? "lower" : "upper"; }

class SymbolVector {
 public:
  SymbolVector(RVector values, Variance variance) : values_(std::move(values)), variance_(variance) {
    if (!values_.allFinite()) throw std::invalid_argument("symbol values must be finite");
  }

  const RVector& values() const noexcept { return values_; }
  Variance variance() const noexcept { return variance_; }
  std::size_t size() const noexcept { return std::size_t(values_.size()); }
  Real operator[](std::size_t n) const { return values_(Eigen::Index(n)); }

 private:
  RVector values_;
  Variance variance_;
};

}  // namespace evrep
