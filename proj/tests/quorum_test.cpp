#include "evrep/quorum.hpp"
#include "evrep/random_states.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

namespace {

using namespace evrep;

RVector sorted(RVector v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

TEST(StandardDirections, SpinHalfLayout) {
  const auto s = standard_directions(TwoS(1));
  ASSERT_EQ(s.size(), 4u);
  EXPECT_NEAR(double(s.cone_thetas()[0]), double(pi / 3), 1e-15);
  EXPECT_NEAR(double(s.cone_thetas()[1]), double(2 * pi / 3), 1e-15);
  EXPECT_NEAR(double(s.cone_phi_offsets()[1]), double(pi / 4), 1e-15);
  // n = mu (2s+1) + nu
  EXPECT_NEAR(double(s[3].theta()), double(2 * pi / 3), 1e-15);
  EXPECT_NEAR(double(s[3].phi()), double(pi / 4 + pi), 1e-15);
  EXPECT_NEAR(double(s[1].phi()), double(pi), 1e-15);
}

TEST(StandardDirections, SpinOneLayout) {
  const auto s = standard_directions(TwoS(2));
  ASSERT_EQ(s.size(), 9u);
  const Real expected[] = {pi / 4, pi / 2, 3 * pi / 4};
  for (int mu = 0; mu < 3; ++mu) {
    EXPECT_NEAR(double(s.cone_thetas()[mu]), double(expected[mu]), 1e-15);
    for (int nu = 0; nu < 3; ++nu) EXPECT_NEAR(double(s[s.index(mu, nu)].theta()), double(expected[mu]), 1e-15);
  }
}

TEST(StandardDirections, InvariantUnderCyclicZRotation) {
  for (int n = 1; n <= 8; ++n) {
    const auto s = standard_directions(TwoS(n));
    const auto r = rotation_matrix(Vec3::UnitZ(), 2 * pi / Real(n + 1));
    for (const auto& d : s.directions()) {
      const Vec3 moved = r * d.unit_vector();
      Real nearest = 10;
      for (const auto& e : s.directions()) nearest = std::min(nearest, (e.unit_vector() - moved).norm());
      EXPECT_LT(double(nearest), 1e-12);
    }
  }
}

TEST(DirectionScheme, ValidatesCones) {
  const TwoS t(2);
  EXPECT_THROW(DirectionScheme::from_cones(t, {0.5L, 0.5L, 1.0L}, {0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(DirectionScheme::from_cones(t, {0.0L, 0.5L, 1.0L}, {0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(DirectionScheme::from_cones(t, {0.5L, 1.0L}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(DirectionScheme::from_cones(t, {1.0L, 0.5L, 2.0L}, {0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(DirectionScheme::from_directions(t, std::vector<Direction>(9, Direction(1, 1))),
               std::invalid_argument);
}

TEST(BuildQuorum, ProjectorsAndGramBasics) {
  for (int n : {1, 2, 3, 5}) {
    const auto q = build_quorum(standard_directions(TwoS(n)));
    for (const auto& k : q.kernels()) {
      EXPECT_LT(max_abs(k.matrix() * k.matrix() - k.matrix()), 1e-12L);
      EXPECT_NEAR(double(k.trace()), 1.0, 1e-12);
    }
    const RMatrix& g = q.gram();
    EXPECT_LT(double((g - g.transpose()).cwiseAbs().maxCoeff()), 1e-15);
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      EXPECT_EQ(g(i, i), 1);
      for (Eigen::Index j = 0; j < g.cols(); ++j) {
        EXPECT_GT(g(i, j), 0);
        EXPECT_LE(g(i, j), 1);
      }
    }
  }
}

TEST(BuildQuorum, SpinHalfGramIsHalfOnePlusCosine) {
  const auto q = build_quorum(standard_directions(TwoS(1)));
  const auto& dirs = q.scheme().directions();
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      const Real oracle = (1 + dirs[a].unit_vector().dot(dirs[b].unit_vector())) / 2;
      EXPECT_NEAR(double(q.gram()(a, b)), double(oracle), 1e-15);
    }
}

TEST(BuildQuorum, GramMatchesTraceOfProducts) {
  const auto q = build_quorum(standard_directions(TwoS(3)));
  for (std::size_t a = 0; a < q.size(); a += 3)
    for (std::size_t b = 0; b < q.size(); b += 2)
      EXPECT_NEAR(double(q.gram()(a, b)), double(trace_product(q.kernel(a), q.kernel(b))), 1e-14);
}

TEST(BuildQuorum, BiorthogonalityAndHermitianDuals) {
  for (int n = 1; n <= 10; ++n) {
    const auto q = build_quorum(standard_directions(TwoS(n)));
    Real worst = 0;
    for (std::size_t a = 0; a < q.size(); ++a)
      for (std::size_t b = 0; b < q.size(); ++b)
        worst = std::max(worst, std::abs(trace_product(q.kernel(a), q.dual(b)) / Real(q.dim()) - (a == b ? 1 : 0)));
    EXPECT_LT(worst, 1e-9L) << "two_s=" << n;
    for (const auto& d : q.duals()) EXPECT_LT(max_abs(d.matrix() - d.matrix().adjoint()), 1e-12L);
  }
}

TEST(BuildQuorum, FrameIdentities) {
  for (int n : {1, 2, 4, 7, 10}) {
    const auto q = build_quorum(standard_directions(TwoS(n)));
    const auto d = Eigen::Index(q.dim());
    CMatrix via_primal = CMatrix::Zero(d, d), sum_duals = CMatrix::Zero(d, d);
    for (std::size_t k = 0; k < q.size(); ++k) {
      via_primal += q.dual(k).trace() * q.kernel(k).matrix();
      sum_duals += q.dual(k).matrix();
    }
    EXPECT_LT(max_abs(via_primal / Real(d) - CMatrix::Identity(d, d)), 1e-9L) << "two_s=" << n;
    EXPECT_LT(max_abs(sum_duals - Real(d) * CMatrix::Identity(d, d)), 1e-9L) << "two_s=" << n;
  }
}

TEST(BuildQuorum, KernelExpandsInDuals) {
  const auto q = build_quorum(standard_directions(TwoS(4)));
  for (std::size_t k = 0; k < q.size(); k += 5) {
    CMatrix acc = CMatrix::Zero(5, 5);
    for (std::size_t m = 0; m < q.size(); ++m) acc += q.gram()(k, m) * q.dual(m).matrix();
    EXPECT_LT(max_abs(acc / Real(5) - q.kernel(k).matrix()), 1e-9L);
  }
}

TEST(BuildQuorum, GramInverseIsInverse) {
  const auto q = build_quorum(standard_directions(TwoS(3)));
  const auto n = Eigen::Index(q.size());
  EXPECT_LT(double((q.gram() * q.gram_inverse() - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff()), 1e-12);
}

TEST(BuildQuorum, KernelsDoNotCommute) {
  const auto q = build_quorum(standard_directions(TwoS(2)));
  Real largest = 0;
  for (std::size_t a = 0; a < q.size(); ++a)
    for (std::size_t b = a + 1; b < q.size(); ++b) {
      const CMatrix c = q.kernel(a).matrix() * q.kernel(b).matrix() - q.kernel(b).matrix() * q.kernel(a).matrix();
      largest = std::max(largest, max_abs(c));
    }
  EXPECT_GT(largest, 0.1L);
}

TEST(BuildQuorum, SingularSchemeThrowsWithConditionNumber) {
  const TwoS t(2);
  std::vector<Direction> one_cone;
  for (int k = 0; k < 9; ++k) one_cone.emplace_back(1.0L, 2 * pi * Real(k) / 9);
  const auto scheme = DirectionScheme::from_directions(t, one_cone);
  try {
    build_quorum(scheme);
    FAIL() << "expected IllConditionedScheme";
  } catch (const IllConditionedScheme& e) {
    EXPECT_GT(e.condition_number(), 1e13L);
  }
  // Two_s = 11 is past the relative threshold for the standard scheme.
  EXPECT_THROW(build_quorum(standard_directions(TwoS(11))), IllConditionedScheme);
}

TEST(ConditionReport, SpinHalfMatchesEigenSolve) {
  const auto scheme = standard_directions(TwoS(1));
  const auto r = condition_report(scheme);
  // Independent route: eigenvalues of G assembled from the overlap law.
  RMatrix g(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) g(a, b) = (1 + scheme[a].unit_vector().dot(scheme[b].unit_vector())) / 2;
  const RVector ev = Eigen::SelfAdjointEigenSolver<RMatrix>(g).eigenvalues();
  EXPECT_NEAR(double(r.lambda_min), double(ev.minCoeff()), 1e-14);
  EXPECT_NEAR(double(r.lambda_max), double(ev.maxCoeff()), 1e-14);
  // Frozen from an independent double-precision eigen-solve.
  EXPECT_NEAR(double(r.lambda_min), 0.21966991411008924, 1e-14);
  EXPECT_GT(r.lambda_min, 0);
  EXPECT_EQ(r.determinant_sign, 1);
  EXPECT_FALSE(r.singular);
}

TEST(ConditionReport, OneConeIsFlaggedSingular) {
  const TwoS t(3);
  std::vector<Direction> one_cone;
  for (int k = 0; k < 16; ++k) one_cone.emplace_back(0.9L, 2 * pi * Real(k) / 16);
  const auto r = condition_report(DirectionScheme::from_directions(t, one_cone));
  EXPECT_TRUE(r.singular);
  EXPECT_FALSE(r.certified_positive_definite);
  EXPECT_EQ(r.determinant_sign, 0);
  EXPECT_LT(r.lambda_min, 1e-20L);
}

TEST(ConditionReport, RigidRotationPreservesSpectrum) {
  Rng rng(8);
  for (int n : {1, 3, 5}) {
    const auto scheme = standard_directions(TwoS(n));
    const auto axis = random_direction(rng).unit_vector();
    const auto rotated = scheme.rotated(axis, 1.234L);
    const auto a = condition_report(scheme);
    const auto b = condition_report(rotated);
    EXPECT_NEAR(double(a.lambda_min / b.lambda_min), 1.0, 1e-8);
    EXPECT_NEAR(double(a.lambda_max), double(b.lambda_max), 1e-12);
    const auto qa = build_quorum(scheme);
    const auto qb = build_quorum(rotated);
    const RVector ea = sorted(Eigen::SelfAdjointEigenSolver<RMatrix>(qa.gram()).eigenvalues());
    const RVector eb = sorted(Eigen::SelfAdjointEigenSolver<RMatrix>(qb.gram()).eigenvalues());
    EXPECT_LT(double((ea - eb).cwiseAbs().maxCoeff()), 1e-12);
  }
}

TEST(ConditionReport, PositiveDefiniteUpToTwoSTen) {
  for (int n = 1; n <= 10; ++n) {
    const auto r = condition_report(standard_directions(TwoS(n)));
    EXPECT_TRUE(r.certified_positive_definite) << "two_s=" << n;
    EXPECT_FALSE(r.singular) << "two_s=" << n;
    EXPECT_TRUE(std::isfinite(double(r.condition_number)));
  }
}

TEST(ConditionReport, Deterministic) {
  const auto a = condition_report(standard_directions(TwoS(6)));
  const auto b = condition_report(standard_directions(TwoS(6)));
  EXPECT_EQ(a.lambda_min, b.lambda_min);
  EXPECT_EQ(a.condition_number, b.condition_number);
}

TEST(Metric, RaiseLowerInverse) {
  Rng rng(4);
  std::normal_distribution<double> g;
  for (int n : {1, 2, 3, 4}) {
    const auto q = build_quorum(standard_directions(TwoS(n)));
    RVector x(Eigen::Index(q.size()));
    for (auto& v : x) v = g(rng);
    const SymbolVector up(x, Variance::upper);
    const SymbolVector low(x, Variance::lower);
    EXPECT_LT(double((metric_raise(q, metric_lower(q, up)).values() - x).cwiseAbs().maxCoeff()), 1e-9);
    EXPECT_LT(double((metric_lower(q, metric_raise(q, low)).values() - x).cwiseAbs().maxCoeff()), 1e-9);
  }
}

TEST(Metric, UnitUpperSymbolLowersToOnes) {
  const auto q = build_quorum(standard_directions(TwoS(3)));
  const SymbolVector unit_upper(q.dual_traces(), Variance::upper);
  const RVector lowered = metric_lower(q, unit_upper).values();
  EXPECT_LT(double((lowered - RVector::Ones(lowered.size())).cwiseAbs().maxCoeff()), 1e-9);
}

TEST(Metric, ZeroAndErrors) {
  const auto q = build_quorum(standard_directions(TwoS(2)));
  const SymbolVector zero_up(RVector::Zero(9), Variance::upper);
  EXPECT_EQ(metric_lower(q, zero_up).values().cwiseAbs().maxCoeff(), 0);
  EXPECT_EQ(metric_raise(q, SymbolVector(RVector::Zero(9), Variance::lower)).values().cwiseAbs().maxCoeff(), 0);
  EXPECT_THROW(metric_lower(q, SymbolVector(RVector::Zero(8), Variance::upper)), std::invalid_argument);
  EXPECT_THROW(metric_lower(q, SymbolVector(RVector::Zero(9), Variance::lower)), std::invalid_argument);
  EXPECT_THROW(metric_raise(q, zero_up), std::invalid_argument);
}

}  // namespace
