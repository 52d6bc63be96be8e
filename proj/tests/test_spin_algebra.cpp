#include <gtest/gtest.h>

#include <cmath>

#include "spincs/coherent_states.hpp"
#include "spincs/spin_algebra.hpp"

using namespace spincs;

namespace {

double max_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST(SpinValue, DimensionAndParity) {
  EXPECT_EQ(SpinValue(3).dimension(), 4);
  EXPECT_FALSE(SpinValue(3).is_integer_spin());
  EXPECT_TRUE(SpinValue(4).is_integer_spin());
  EXPECT_THROW(SpinValue(0), InvalidArgument);
  EXPECT_EQ(SpinValue::parse("3/2"), SpinValue(3));
  EXPECT_EQ(SpinValue::parse("1.5"), SpinValue(3));
  EXPECT_EQ(SpinValue::parse("2"), SpinValue(4));
  EXPECT_THROW(SpinValue::parse("1.3"), InvalidArgument);
  EXPECT_THROW(SpinValue::parse("3/4"), InvalidArgument);
  EXPECT_EQ(SpinValue(3).to_string(), "3/2");
  EXPECT_EQ(SpinValue(4).to_string(), "2");
}

TEST(AngularMomentum, SpinHalfIsHalfPauli) {
  const auto J = angular_momentum_matrices(SpinValue(1));
  ComplexMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << -1, 0, 0, 1;  // ascending m: -1/2 then +1/2
  // in ascending order sigma_y changes sign relative to the textbook ordering
  EXPECT_LT(max_diff(J.x, 0.5 * sx), 1e-15);
  EXPECT_LT(max_diff(J.y, -0.5 * sy), 1e-15);
  EXPECT_LT(max_diff(J.z, 0.5 * sz), 1e-15);
}

TEST(AngularMomentum, SpinThreeHalvesLadder) {
  const auto J = angular_momentum_matrices(SpinValue(3));
  const ComplexMatrix up = J.raising();
  // <m+1|J+|m> for m = -3/2, -1/2, 1/2
  EXPECT_NEAR(up(1, 0).real(), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(up(2, 1).real(), 2.0, 1e-14);
  EXPECT_NEAR(up(3, 2).real(), std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(J.z(0, 0).real(), -1.5, 0);
  EXPECT_NEAR(J.z(3, 3).real(), 1.5, 0);
}

TEST(AngularMomentum, Su2AndCasimirUpToTwelve) {
  for (int tj = 1; tj <= 12; ++tj) {
    SpinValue s(tj);
    const auto J = angular_momentum_matrices(s);
    EXPECT_LT(max_diff(J.x * J.y - J.y * J.x, kI * J.z), 1e-12) << tj;
    EXPECT_LT(max_diff(J.y * J.z - J.z * J.y, kI * J.x), 1e-12) << tj;
    EXPECT_LT(max_diff(J.z * J.x - J.x * J.z, kI * J.y), 1e-12) << tj;
    const double jj = s.j() * (s.j() + 1);
    EXPECT_LT(max_diff(J.squared(), jj * ComplexMatrix::Identity(s.dimension(), s.dimension())), 1e-12);
    EXPECT_TRUE(is_hermitian(J.x) && is_hermitian(J.y) && is_hermitian(J.z));
  }
}

TEST(UnitaryExponential, Examples) {
  const auto half = angular_momentum_matrices(SpinValue(1));
  const auto one = angular_momentum_matrices(SpinValue(2));
  EXPECT_LT(max_diff(unitary_exponential(ComplexMatrix::Zero(3, 3), 1.7), ComplexMatrix::Identity(3, 3)), 1e-15);
  EXPECT_LT(max_diff(unitary_exponential(half.z, kTwoPi), -ComplexMatrix::Identity(2, 2)), 1e-12);
  EXPECT_LT(max_diff(unitary_exponential(one.z, kTwoPi), ComplexMatrix::Identity(3, 3)), 1e-12);
}

TEST(UnitaryExponential, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 0, 1, 0, 0;
  EXPECT_THROW(unitary_exponential(m, 1.0), NonHermitianInput);
}

TEST(UnitaryExponential, UnitaryForRandomHermitian) {
  for (int tj = 1; tj <= 12; ++tj) {
    const int d = tj + 1;
    ComplexMatrix a = ComplexMatrix::Random(d, d);
    ComplexMatrix h = a + a.adjoint();
    EXPECT_TRUE(is_unitary(unitary_exponential(h, 3.3), 1e-12));
  }
}

TEST(Rotation, SpinHalfPiSwapsPoles) {
  SpinValue s(1);
  const StateVector out = rotation_operator(s, kPi, 0.0) * basis_state(s, -0.5);
  EXPECT_NEAR(std::abs(out(1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(out(0)), 0.0, 1e-14);
}

TEST(Rotation, IdentityAndComposition) {
  for (int tj = 1; tj <= 6; ++tj) {
    SpinValue s(tj);
    const int d = s.dimension();
    EXPECT_LT(max_diff(rotation_operator(s, 0.0, 0.8), ComplexMatrix::Identity(d, d)), 1e-14);
    const ComplexMatrix r = rotation_operator(s, 0.4, 1.3) * rotation_operator(s, 0.9, 1.3);
    EXPECT_LT(max_diff(r, rotation_operator(s, 1.3, 1.3)), 1e-12);
    EXPECT_TRUE(is_unitary(rotation_operator(s, 2.2, -0.4)));
  }
}

// R|j,-j> against the closed-form amplitudes, j = 3/2, (pi/2, 0):
// (1, -sqrt3, sqrt3, -1) / 2^{3/2}
TEST(Rotation, MatchesCoherentAmplitudes) {
  SpinValue s(3);
  const StateVector psi = rotation_operator(s, kPi / 2, 0.0) * basis_state(s, -1.5);
  const double a = 1.0 / std::pow(2.0, 1.5);
  const double expect[] = {a, -std::sqrt(3.0) * a, std::sqrt(3.0) * a, -a};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(psi(i).real(), expect[i], 1e-12);
    EXPECT_NEAR(psi(i).imag(), 0.0, 1e-12);
  }
}

TEST(Rotation, AxisIsOrthogonalToZ) {
  RotationAxis ax{0.7};
  EXPECT_NEAR(ax.direction().norm(), 1.0, 1e-15);
  EXPECT_EQ(ax.direction().z(), 0.0);
}

TEST(UnitaryOverlap, GlobalPhaseBlind) {
  SpinValue s(2);
  const auto u = rotation_operator(s, 0.3, 0.2);
  EXPECT_NEAR(unitary_overlap(u, std::exp(Complex(0, 1.1)) * u), 1.0, 1e-14);
  EXPECT_THROW(unitary_overlap(u, ComplexMatrix::Identity(2, 2)), DimensionMismatch);
}
