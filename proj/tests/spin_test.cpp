#include "evrep/random_states.hpp"
#include "evrep/spin.hpp"

#include <gtest/gtest.h>

namespace {

using namespace evrep;

CMatrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

TEST(TwoS, RejectsOutOfRange) {
  EXPECT_THROW(TwoS(0), std::invalid_argument);
  EXPECT_THROW(TwoS(-3), std::invalid_argument);
  EXPECT_THROW(TwoS(101), std::invalid_argument);
  const TwoS t(3);
  EXPECT_EQ(t.dim(), 4u);
  EXPECT_EQ(t.quorum_size(), 16u);
  EXPECT_DOUBLE_EQ(double(t.spin()), 1.5);
}

TEST(Direction, UnitVectorAndStereo) {
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto d = random_direction(rng);
    EXPECT_NEAR(double(d.unit_vector().norm()), 1.0, 1e-12);
    const Complex z = d.stereo();
    EXPECT_NEAR(double(std::abs(z)), double(std::tan(d.theta() / 2)), 1e-12);
  }
  EXPECT_THROW(Direction(pi, 0.3L).stereo(), std::domain_error);
  EXPECT_THROW(Direction(-0.1L, 0), std::invalid_argument);
  EXPECT_NEAR(double(Direction(1, -pi / 2).phi()), double(3 * pi / 2), 1e-15);
}

TEST(SpinOperators, SpinHalfIsHalfPauli) {
  const auto s = spin_operators(TwoS(1));
  const Complex i{0, 1};
  CMatrix px(2, 2), py(2, 2), pz(2, 2);
  px << 0, 1, 1, 0;
  py << 0, -i, i, 0;
  pz << 1, 0, 0, -1;
  EXPECT_LT(max_abs(s.x.matrix() - px / Real{2}), 1e-15L);
  EXPECT_LT(max_abs(s.y.matrix() - py / Real{2}), 1e-15L);
  EXPECT_LT(max_abs(s.z.matrix() - pz / Real{2}), 1e-15L);
}

TEST(SpinOperators, SpinOneWeights) {
  const auto s = spin_operators(TwoS(2));
  CMatrix expected = CMatrix::Zero(3, 3);
  expected(0, 0) = 1;
  expected(2, 2) = -1;
  EXPECT_LT(max_abs(s.z.matrix() - expected), 1e-15L);
}

TEST(SpinOperators, AlgebraClosesUpToTwentyTwoS) {
  const Complex i{0, 1};
  for (int n = 1; n <= 20; ++n) {
    const auto s = spin_operators(TwoS(n));
    EXPECT_LT(max_abs(commutator(s.x, s.y) - i * s.z.matrix()), 1e-12L) << "two_s=" << n;
    EXPECT_LT(max_abs(commutator(s.y, s.z) - i * s.x.matrix()), 1e-12L) << "two_s=" << n;
    EXPECT_LT(max_abs(commutator(s.z, s.x) - i * s.y.matrix()), 1e-12L) << "two_s=" << n;
  }
}

TEST(SpinOperators, CasimirIsScalar) {
  const TwoS t(5);
  const auto s = spin_operators(t);
  const CMatrix c = s.x.matrix() * s.x.matrix() + s.y.matrix() * s.y.matrix() + s.z.matrix() * s.z.matrix();
  const Real expect = t.spin() * (t.spin() + 1);
  EXPECT_LT(max_abs(c - expect * CMatrix::Identity(6, 6)), 1e-12L);
}

TEST(RotationOperator, ZeroAngleIsIdentity) {
  const auto u = rotation_operator(TwoS(4), Vec3(0, 0.6L, 0.8L), 0);
  EXPECT_LT(max_abs(u.matrix() - CMatrix::Identity(5, 5)), 1e-15L);
}

TEST(RotationOperator, SpinHalfAboutZ) {
  const Real alpha = 0.83L;
  const auto u = rotation_operator(TwoS(1), Vec3::UnitZ(), alpha);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = std::polar(Real{1}, -alpha / 2);
  expected(1, 1) = std::polar(Real{1}, alpha / 2);
  EXPECT_LT(max_abs(u.matrix() - expected), 1e-15L);
}

TEST(RotationOperator, SpinOnePiAboutYFlips) {
  // d^1_{-1,1}(pi) = 1: |1> goes to |-1> up to a phase.
  const auto u = rotation_operator(TwoS(2), Vec3::UnitY(), pi);
  CVector up = CVector::Zero(3);
  up(0) = 1;
  const CVector out = u.apply(StateVector(up)).amplitudes();
  EXPECT_NEAR(double(std::abs(out(2))), 1.0, 1e-14);
  EXPECT_NEAR(double(std::abs(out(0))), 0.0, 1e-14);
  EXPECT_NEAR(double(std::abs(out(1))), 0.0, 1e-14);
}

TEST(RotationOperator, UnitaryWithUnitDeterminant) {
  Rng rng(5);
  for (int n : {1, 4, 9}) {
    const auto axis = random_direction(rng).unit_vector();
    const auto u = rotation_operator(TwoS(n), axis, 2.1L);
    const auto d = Eigen::Index(n + 1);
    EXPECT_LT(max_abs(u.matrix() * u.matrix().adjoint() - CMatrix::Identity(d, d)), 1e-10L);
    EXPECT_NEAR(double(std::abs(u.matrix().determinant())), 1.0, 1e-10);
  }
}

TEST(RotationOperator, RejectsNonUnitAxis) {
  EXPECT_THROW(rotation_operator(TwoS(2), Vec3(1, 1, 0), 0.3L), std::invalid_argument);
}

TEST(CoherentState, NorthPoleIsHighestWeight) {
  const auto v = coherent_state(TwoS(6), Direction(0, 1.3L)).amplitudes();
  EXPECT_NEAR(double(std::abs(v(0) - Complex(1))), 0.0, 1e-15);
  EXPECT_LT(double(v.tail(6).norm()), 1e-15);
}

TEST(CoherentState, SpinHalfClosedForm) {
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto d = random_direction(rng);
    const auto v = coherent_state(TwoS(1), d).amplitudes();
    EXPECT_NEAR(double(std::abs(v(0) - Complex(std::cos(d.theta() / 2)))), 0.0, 1e-14);
    EXPECT_NEAR(double(std::abs(v(1) - std::polar(std::sin(d.theta() / 2), d.phi()))), 0.0, 1e-14);
  }
}

TEST(CoherentState, EigenvectorOfSpinAlongDirection) {
  Rng rng(17);
  for (int n = 1; n <= 20; ++n) {
    const TwoS t(n);
    const auto s = spin_operators(t);
    for (int k = 0; k < 5; ++k) {
      const auto d = random_direction(rng);
      const auto v = coherent_state(t, d);
      EXPECT_NEAR(double(v.norm()), 1.0, 1e-12);
      const CVector residual = s.along(d.unit_vector()).matrix() * v.amplitudes() - t.spin() * v.amplitudes();
      EXPECT_LT(double(residual.norm()), 1e-10) << "two_s=" << n;
    }
  }
}

TEST(CoherentState, SouthPoleUsesRotationPhase) {
  const TwoS t(3);
  const Real phi = 0.4L;
  const auto v = coherent_state(t, Direction(pi, phi)).amplitudes();
  EXPECT_NEAR(double(std::abs(v(3))), 1.0, 1e-14);
  // The closed-form amplitude sin^{2s}(theta/2) e^{i 2s phi} at theta = pi.
  EXPECT_NEAR(double(std::abs(v(3) - std::polar(Real{1}, 3 * phi))), 0.0, 1e-12);
}

TEST(CoherentState, MatchesRotationRoute) {
  Rng rng(23);
  for (int n : {1, 2, 5, 10, 20}) {
    const TwoS t(n);
    CVector top = CVector::Zero(n + 1);
    top(0) = 1;
    for (int k = 0; k < 10; ++k) {
      const auto d = random_direction(rng);
      const auto via_rotation = rotation_operator(t, tilt_axis(d.phi()), d.theta()).apply(StateVector(top));
      const auto via_expansion = coherent_state(t, d);
      EXPECT_LT(double((via_rotation.amplitudes() - via_expansion.amplitudes()).norm()), 1e-10) << "two_s=" << n;
    }
    // Just inside and at the switch-over to the rotation route.
    for (Real theta : {pi - 2 * south_pole_margin, pi - south_pole_margin / 2}) {
      const Direction d(theta, 2.2L);
      const auto via_rotation = rotation_operator(t, tilt_axis(d.phi()), d.theta()).apply(StateVector(top));
      EXPECT_LT(double((via_rotation.amplitudes() - coherent_state(t, d).amplitudes()).norm()), 1e-10);
    }
  }
}

TEST(CoherentState, LargeSpinBinomialsStayFinite) {
  const auto v = coherent_state(TwoS(90), Direction(1.1L, 0.2L));
  EXPECT_TRUE(v.amplitudes().allFinite());
  EXPECT_NEAR(double(v.norm()), 1.0, 1e-12);
  EXPECT_NEAR(double(sqrt_binomial(61, 30)), std::sqrt(double(232714176627630544ULL)), 1e-3);
}

TEST(Overlap, SelfAndAntipodal) {
  const TwoS t(4);
  const Direction d(0.7L, 1.9L);
  const auto a = coherent_state(t, d);
  EXPECT_NEAR(double(std::abs(overlap(a, a) - Complex(1))), 0.0, 1e-15);
  const auto b = coherent_state(t, Direction::from_unit_vector(-d.unit_vector()));
  EXPECT_NEAR(double(std::abs(overlap(a, b))), 0.0, 1e-12);
}

TEST(Overlap, SpinHalfRightAngle) {
  const auto a = coherent_state(TwoS(1), Direction(0, 0));
  const auto b = coherent_state(TwoS(1), Direction(pi / 2, 0.3L));
  EXPECT_NEAR(double(std::norm(overlap(a, b))), 0.5, 1e-15);
}

TEST(Overlap, OverlapLawRandomPairs) {
  Rng rng(31);
  for (int k = 0; k < 100; ++k) {
    const TwoS t(1 + k % 20);
    const auto da = random_direction(rng);
    const auto db = random_direction(rng);
    const Real law = std::pow((1 + da.unit_vector().dot(db.unit_vector())) / 2, Real(t.value()));
    const Real got = std::norm(overlap(coherent_state(t, da), coherent_state(t, db)));
    EXPECT_NEAR(double(got), double(law), 1e-10);
  }
}

TEST(Overlap, DimensionMismatchThrows) {
  EXPECT_THROW(overlap(coherent_state(TwoS(1), Direction(0, 0)), coherent_state(TwoS(2), Direction(0, 0))),
               std::invalid_argument);
}

TEST(ResolutionOfIdentity, AdequateGridIsExact) {
  EXPECT_LT(resolution_of_identity_residual(TwoS(1), 2), 1e-10L);
  EXPECT_LT(resolution_of_identity_residual(TwoS(4), 5), 1e-10L);
  EXPECT_LT(resolution_of_identity_residual(TwoS(20), 21), 1e-10L);
}

TEST(ResolutionOfIdentity, CoarseGridIsDetected) {
  EXPECT_GT(resolution_of_identity_residual(TwoS(4), 2), 1e-3L);
  EXPECT_THROW(resolution_of_identity_residual(TwoS(4), 0), std::invalid_argument);
}

TEST(HermitianOperator, RejectsNonHermitian) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 1) = 1;
  EXPECT_THROW(HermitianOperator{m}, std::invalid_argument);
  EXPECT_THROW(HermitianOperator{CMatrix::Zero(2, 3)}, std::invalid_argument);
}

TEST(HermitianCoordinates, IsometryProperty) {
  Rng rng(41);
  for (int n : {1, 3, 6}) {
    const auto a = random_hermitian(TwoS(n), rng);
    const auto b = random_hermitian(TwoS(n), rng);
    const RVector ca = hermitian_coordinates(a.matrix());
    const RVector cb = hermitian_coordinates(b.matrix());
    EXPECT_NEAR(double(ca.dot(cb)), double(trace_product(a, b)), 1e-12);
    EXPECT_LT(max_abs(from_hermitian_coordinates(ca, n + 1) - a.matrix()), 1e-15L);
  }
}

}  // namespace
