#pragma once

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>

#include "spincs/errors.hpp"

namespace spincs {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// Spin quantum number j stored as 2j so half-integers stay exact.
class SpinValue {
 public:
  explicit SpinValue(int two_j) : two_j_(two_j) {
    if (two_j < 1) throw InvalidArgument("spin: 2j must be >= 1, got " + std::to_string(two_j));
  }

  static SpinValue from_j(double j) {
    const double twice = 2.0 * j;
    const double rounded = std::round(twice);
    if (!std::isfinite(j) || std::abs(twice - rounded) > 1e-9)
      throw InvalidArgument("spin: j must be a positive integer or half-integer");
    return SpinValue(static_cast<int>(rounded));
  }

  // Accepts "3/2", "1.5" or "2".
  static SpinValue parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      int num = 0, den = 0;
      auto a = text.substr(0, slash), b = text.substr(slash + 1);
      auto ra = std::from_chars(a.data(), a.data() + a.size(), num);
      auto rb = std::from_chars(b.data(), b.data() + b.size(), den);
      if (ra.ec != std::errc{} || ra.ptr != a.data() + a.size() || rb.ec != std::errc{} ||
          rb.ptr != b.data() + b.size() || (den != 1 && den != 2))
        throw InvalidArgument("spin: cannot parse '" + std::string(text) + "'");
      return SpinValue(den == 2 ? num : 2 * num);
    }
    double j = 0.0;
    auto r = std::from_chars(text.data(), text.data() + text.size(), j);
    if (r.ec != std::errc{} || r.ptr != text.data() + text.size())
      throw InvalidArgument("spin: cannot parse '" + std::string(text) + "'");
    return from_j(j);
  }

  int two_j() const { return two_j_; }
  double j() const { return 0.5 * two_j_; }
  int dimension() const { return two_j_ + 1; }
  bool is_integer_spin() const { return two_j_ % 2 == 0; }

  // basis index i <-> m = -j + i
  double m(int index) const { return -j() + index; }
  int index(double m) const {
    const double i = m + j();
    const double r = std::round(i);
    if (std::abs(i - r) > 1e-9 || r < 0 || r > two_j_)
      throw InvalidArgument("spin: m out of range for j = " + to_string());
    return static_cast<int>(r);
  }

  std::string to_string() const {
    return two_j_ % 2 == 0 ? std::to_string(two_j_ / 2) : std::to_string(two_j_) + "/2";
  }

  friend bool operator==(SpinValue, SpinValue) = default;

 private:
  int two_j_;
};

struct AngularMomentum {
  ComplexMatrix x, y, z;

  ComplexMatrix raising() const { return x + kI * y; }
  ComplexMatrix lowering() const { return x - kI * y; }
  ComplexMatrix squared() const { return x * x + y * y + z * z; }
};

inline AngularMomentum angular_momentum_matrices(SpinValue spin) {
  const int d = spin.dimension();
  const double j = spin.j();
  ComplexMatrix up = ComplexMatrix::Zero(d, d);
  ComplexMatrix jz = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = spin.m(i);
    jz(i, i) = m;
    if (i + 1 < d) up(i + 1, i) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  ComplexMatrix down = up.adjoint();
  AngularMomentum out;
  out.x = 0.5 * (up + down);
  out.y = (up - down) / (2.0 * kI);
  out.z = jz;
  return out;
}

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const ComplexMatrix& h, double tol = 1e-10) {
  if (h.rows() != h.cols()) return false;
  return max_abs(h - h.adjoint()) <= tol * std::max(1.0, max_abs(h));
}

inline bool is_unitary(const ComplexMatrix& u, double tol = 1e-12) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

// exp(-i * scale * H) through the eigendecomposition of H.
inline ComplexMatrix unitary_exponential(const ComplexMatrix& h, double scale) {
  if (!is_hermitian(h, 1e-10)) throw NonHermitianInput("unitary_exponential: H is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const auto& v = es.eigenvectors();
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    phases(k) = std::exp(Complex(0.0, -scale * es.eigenvalues()(k)));
  return v * phases.asDiagonal() * v.adjoint();
}

// Rotation axis of R(theta, phi). The rotation turns |j,-j> towards the
// Bloch point n(theta, phi), so the effective axis is (-sin phi, cos phi, 0).
struct RotationAxis {
  double phi = 0.0;

  Eigen::Vector3d direction() const { return {-std::sin(phi), std::cos(phi), 0.0}; }
};

inline ComplexMatrix rotation_generator(const AngularMomentum& J, double phi) {
  return std::sin(phi) * J.x - std::cos(phi) * J.y;
}

// R(theta, phi) = exp(+i theta (Jx sin phi - Jy cos phi)); R|j,-j> is the coherent state.
inline ComplexMatrix rotation_operator(SpinValue spin, double theta, double phi) {
  const auto J = angular_momentum_matrices(spin);
  return unitary_exponential(rotation_generator(J, phi), -theta);
}

inline StateVector basis_state(SpinValue spin, double m) {
  StateVector v = StateVector::Zero(spin.dimension());
  v(spin.index(m)) = 1.0;
  return v;
}

struct BlochVector {
  double x = 0.0, y = 0.0, z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

// |Tr(U^dagger V)| / d, the global-phase-blind overlap of two propagators.
inline double unitary_overlap(const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw DimensionMismatch("unitary_overlap: dimension mismatch");
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

}  // namespace spincs
