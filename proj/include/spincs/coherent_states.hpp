#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "spincs/spin_algebra.hpp"

namespace spincs {

struct CoherentAngles {
  double theta = 0.0;
  double phi = 0.0;

  bool at_pole() const { return std::abs(std::sin(theta)) < 1e-12; }
};

inline double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Folds theta into [0, pi] (moving phi to the antipodal meridian when needed)
// and phi into [0, 2pi).
inline CoherentAngles normalized(CoherentAngles a) {
  double t = wrap_two_pi(a.theta);
  double p = a.phi;
  if (t > kPi) {
    t = kTwoPi - t;
    p += kPi;
  }
  return {t, wrap_two_pi(p)};
}

struct PointAtInfinity {
  friend bool operator==(PointAtInfinity, PointAtInfinity) = default;
};

class ZetaPoint {
 public:
  ZetaPoint() = default;
  explicit ZetaPoint(Complex z) : v_(z) {}
  static ZetaPoint infinity() {
    ZetaPoint p;
    p.v_ = PointAtInfinity{};
    return p;
  }

  bool is_infinite() const { return std::holds_alternative<PointAtInfinity>(v_); }
  Complex value() const {
    if (is_infinite()) throw InvalidArgument("zeta: point at infinity has no finite value");
    return std::get<Complex>(v_);
  }

 private:
  std::variant<Complex, PointAtInfinity> v_{Complex{0.0, 0.0}};
};

inline ZetaPoint zeta_from_angles(CoherentAngles angles) {
  const auto a = normalized(angles);
  if (std::cos(0.5 * a.theta) < 1e-12) return ZetaPoint::infinity();
  return ZetaPoint(-std::exp(Complex(0.0, -a.phi)) * std::tan(0.5 * a.theta));
}

inline CoherentAngles angles_from_zeta(const ZetaPoint& z) {
  if (z.is_infinite()) return {kPi, 0.0};
  const Complex v = z.value();
  if (v == Complex(0.0, 0.0)) return {0.0, 0.0};
  return {2.0 * std::atan(std::abs(v)), wrap_two_pi(-std::arg(-v))};
}

namespace detail {

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

inline int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

}  // namespace detail

// c_m = zeta^{j+m} (1+|zeta|^2)^{-j} sqrt(C(2j, j+m)), written with half-angle
// powers so that theta = pi needs no special case.
inline StateVector build_coherent_state(SpinValue spin, CoherentAngles angles) {
  const int n = spin.two_j();
  const double s = std::sin(0.5 * angles.theta);
  const double c = std::cos(0.5 * angles.theta);
  const Complex w = -std::exp(Complex(0.0, -angles.phi));
  StateVector v(n + 1);
  for (int k = 0; k <= n; ++k)
    v(k) = std::pow(w, k) * std::pow(s, k) * std::pow(c, n - k) * std::sqrt(detail::binomial(n, k));
  return v;
}

inline StateVector build_coherent_state(SpinValue spin, const ZetaPoint& z) {
  if (z.is_infinite()) return basis_state(spin, spin.j());
  const int n = spin.two_j();
  const Complex zeta = z.value();
  const double norm = std::pow(1.0 + std::norm(zeta), -0.5 * n);
  StateVector v(n + 1);
  for (int k = 0; k <= n; ++k) v(k) = std::pow(zeta, k) * norm * std::sqrt(detail::binomial(n, k));
  return v;
}

enum class DensityKind { UnitTrace, Traceless };

// Hermitian matrix tagged with the trace convention it was built under.
class DeviationMatrix {
 public:
  explicit DeviationMatrix(ComplexMatrix m, DensityKind kind = DensityKind::UnitTrace)
      : m_(std::move(m)), kind_(kind) {
    if (!is_hermitian(m_, 1e-10)) throw NonHermitianInput("deviation matrix must be Hermitian");
  }

  const ComplexMatrix& matrix() const { return m_; }
  DensityKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(m_.rows()); }
  Complex trace() const { return m_.trace(); }
  Complex at(SpinValue spin, double m, double mp) const { return m_(spin.index(m), spin.index(mp)); }

  // Identity-subtracted copy (rho - Tr(rho)/d).
  DeviationMatrix traceless() const {
    ComplexMatrix t = m_ - (m_.trace() / static_cast<double>(m_.rows())) *
                               ComplexMatrix::Identity(m_.rows(), m_.cols());
    return DeviationMatrix(std::move(t), DensityKind::Traceless);
  }

 private:
  ComplexMatrix m_;
  DensityKind kind_;
};

inline DeviationMatrix pure_density(const StateVector& psi) {
  return DeviationMatrix(psi * psi.adjoint(), DensityKind::UnitTrace);
}

inline DeviationMatrix density_matrix_elements(SpinValue spin, CoherentAngles angles) {
  const int n = spin.two_j();
  const double s = std::sin(0.5 * angles.theta);
  const double c = std::cos(0.5 * angles.theta);
  ComplexMatrix rho(n + 1, n + 1);
  // k = j + m, l = j + m'
  for (int k = 0; k <= n; ++k) {
    for (int l = 0; l <= n; ++l) {
      const double mag = std::pow(c, 2 * n - k - l) * std::pow(s, k + l) *
                         std::sqrt(detail::binomial(n, k) * detail::binomial(n, l));
      rho(k, l) = static_cast<double>(detail::parity_sign(k + l)) *
                  std::exp(Complex(0.0, (l - k) * angles.phi)) * mag;
    }
  }
  // the closed form is Hermitian up to rounding in exp(i x) vs exp(-i x)
  ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
  return DeviationMatrix(std::move(sym), DensityKind::UnitTrace);
}

inline double extract_theta(const DeviationMatrix& rho, SpinValue spin) {
  if (rho.dimension() != spin.dimension()) throw DimensionMismatch("extract_theta: dimension mismatch");
  const int d = spin.dimension();
  double top = rho.matrix()(d - 1, d - 1).real();  // m = +j
  double bottom = rho.matrix()(0, 0).real();       // m = -j
  if (top < -1e-8 || bottom < -1e-8) throw InconsistentState("extract_theta: negative corner element");
  top = std::max(top, 0.0);
  bottom = std::max(bottom, 0.0);
  const double e = 1.0 / (2.0 * spin.two_j());
  const double s = std::pow(top, e), c = std::pow(bottom, e);
  if (std::abs(s * s + c * c - 1.0) > 1e-6)
    throw InconsistentState("extract_theta: corner elements are not sin/cos powers of one angle");
  return 2.0 * std::atan2(s, c);
}

inline double extract_phi(const DeviationMatrix& rho, SpinValue spin, double theta) {
  if (rho.dimension() != spin.dimension()) throw DimensionMismatch("extract_phi: dimension mismatch");
  if (std::abs(std::sin(theta)) < 1e-9) throw DegeneratePole("extract_phi: phi is undefined at a pole");
  const int n = spin.two_j();
  const double s = std::sin(0.5 * theta), c = std::cos(0.5 * theta);
  const auto& m = rho.matrix();
  Complex a, b;
  double scale;
  if (spin.is_integer_spin()) {
    const int j = n / 2;
    const int i0 = spin.index(0.0);
    a = m(i0, i0 + 1);
    b = m(i0 + 1, i0);
    scale = std::sqrt(detail::factorial(j + 1) * detail::factorial(j - 1)) * detail::factorial(j) /
            (2.0 * detail::parity_sign(n + 1) * std::pow(c, n - 1) * std::pow(s, n + 1) *
             detail::factorial(n));
  } else {
    const int lo = spin.index(-0.5);
    a = m(lo, lo + 1);
    b = m(lo + 1, lo);
    const int jm = (n - 1) / 2, jp = (n + 1) / 2;  // j - 1/2, j + 1/2
    scale = detail::factorial(jm) * detail::factorial(jp) /
            (2.0 * detail::parity_sign(n) * std::pow(c, n) * std::pow(s, n) * detail::factorial(n));
  }
  const double cos_phi = ((a + b) * scale).real();
  const double sin_phi = ((a - b) * scale / kI).real();
  if (std::abs(cos_phi * cos_phi + sin_phi * sin_phi - 1.0) > 1e-6)
    throw InconsistentState("extract_phi: cos^2 + sin^2 != 1");
  return wrap_two_pi(std::atan2(sin_phi, cos_phi));
}

struct SpinExpectation {
  double x = 0.0, y = 0.0, z = 0.0;

  double magnitude() const { return std::sqrt(x * x + y * y + z * z); }
};

inline SpinExpectation spin_expectation(const StateVector& psi, const AngularMomentum& J) {
  return {psi.dot(J.x * psi).real(), psi.dot(J.y * psi).real(), psi.dot(J.z * psi).real()};
}

inline SpinExpectation spin_expectation(const StateVector& psi, SpinValue spin) {
  if (psi.size() != spin.dimension()) throw DimensionMismatch("spin_expectation: dimension mismatch");
  return spin_expectation(psi, angular_momentum_matrices(spin));
}

// n = -<J>/j, so that |j,-j> sits at the north pole (0,0,1).
inline BlochVector bloch_vector(const StateVector& psi, SpinValue spin) {
  const auto e = spin_expectation(psi, spin);
  const double j = spin.j();
  return {-e.x / j, -e.y / j, -e.z / j};
}

inline std::vector<CoherentAngles> husimi_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw InvalidArgument("husimi_grid: resolution must be positive");
  std::vector<CoherentAngles> grid;
  grid.reserve(static_cast<std::size_t>(n_theta + 1) * n_phi);
  for (int i = 0; i <= n_theta; ++i)
    for (int k = 0; k < n_phi; ++k) grid.push_back({kPi * i / n_theta, kTwoPi * k / n_phi});
  return grid;
}

inline std::vector<double> husimi_q(const StateVector& psi, SpinValue spin,
                                    const std::vector<CoherentAngles>& grid) {
  if (grid.empty()) throw InvalidArgument("husimi_q: empty grid");
  if (psi.size() != spin.dimension()) throw DimensionMismatch("husimi_q: dimension mismatch");
  std::vector<double> q;
  q.reserve(grid.size());
  for (const auto& a : grid) q.push_back(std::norm(build_coherent_state(spin, a).dot(psi)));
  return q;
}

inline double fidelity(const DeviationMatrix& a, const DeviationMatrix& b) {
  if (a.dimension() != b.dimension()) throw DimensionMismatch("fidelity: dimension mismatch");
  const auto& x = a.matrix();
  const auto& y = b.matrix();
  if (x.norm() <= 1e-14 || y.norm() <= 1e-14) throw ZeroMatrix("fidelity: zero matrix");
  const double xy = (x * y).trace().real();
  const double xx = (x * x).trace().real();
  const double yy = (y * y).trace().real();
  return xy / std::sqrt(xx * yy);
}

inline double state_overlap(const StateVector& a, const StateVector& b) { return std::norm(a.dot(b)); }

}  // namespace spincs
