#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "spincs/coherent_states.hpp"
#include "spincs/detail/parallel.hpp"
#include "spincs/spin_algebra.hpp"

namespace spincs {

// Rotating-frame frequencies, all in rad/s.
struct SystemParams {
  double omega_L = 0.0;
  double omega_RF = 0.0;
  double omega_Q = 0.0;
  double omega_1 = 0.0;
  double phi_s = 0.0;

  // 23Na in a lyotropic phase at 105.85 MHz, nu_Q = 15 kHz, 8 us pi pulse, on resonance.
  static SystemParams na23_lyotropic() {
    SystemParams p;
    p.omega_L = kTwoPi * 105.85e6;
    p.omega_RF = p.omega_L;
    p.omega_Q = kTwoPi * 15e3;
    p.omega_1 = kPi / 8e-6;
    return p;
  }

  SystemParams with_pi_pulse(double seconds) const {
    if (!(seconds > 0)) throw InvalidArgument("pi-pulse length must be positive");
    SystemParams p = *this;
    p.omega_1 = kPi / seconds;
    return p;
  }

  // The secular quadrupolar form assumes |omega_Q| << |omega_L|.
  std::optional<std::string> advisory() const {
    if (std::abs(omega_Q) > 0.01 * std::abs(omega_L))
      return "omega_Q is not small compared with omega_L; the first-order quadrupolar term may be inaccurate";
    return std::nullopt;
  }
};

// 3 Jz^2 - J^2, built diagonally so the j = 1/2 case is exactly zero.
inline ComplexMatrix quadrupolar_operator(SpinValue spin) {
  const int d = spin.dimension();
  const double jj = spin.j() * (spin.j() + 1.0);
  ComplexMatrix q = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) q(i, i) = 3.0 * spin.m(i) * spin.m(i) - jj;
  return q;
}

// -(wL - wRF) Iz + (wQ/6)(3Iz^2 - I^2) - w1 (Ix cos phi_s + Iy sin phi_s).
// The RF term carries the same -gamma B.I sign as the Zeeman term; with it a
// pulse of phase phi_s is exactly rotation_operator(theta, phi_s + pi/2).
inline ComplexMatrix hamiltonian(const SystemParams& p, SpinValue spin, bool rf_on) {
  const auto J = angular_momentum_matrices(spin);
  ComplexMatrix h = -(p.omega_L - p.omega_RF) * J.z + (p.omega_Q / 6.0) * quadrupolar_operator(spin);
  if (rf_on) h -= p.omega_1 * (std::cos(p.phi_s) * J.x + std::sin(p.phi_s) * J.y);
  return h;
}

inline ComplexMatrix ideal_pulse_propagator(SpinValue spin, double theta, double phi_s) {
  const auto J = angular_momentum_matrices(spin);
  return unitary_exponential(std::cos(phi_s) * J.x + std::sin(phi_s) * J.y, -theta);
}

inline ComplexMatrix free_evolution_propagator(const SystemParams& p, SpinValue spin, double t) {
  if (!(t >= 0)) throw InvalidArgument("free evolution time must be >= 0");
  const int d = spin.dimension();
  const double jj = spin.j() * (spin.j() + 1.0);
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    const double m = spin.m(i);
    const double arg = (p.omega_L - p.omega_RF) * t * m - (p.omega_Q * t / 6.0) * (3.0 * m * m - jj);
    u(i, i) = std::exp(Complex(0.0, arg));
  }
  return u;
}

inline ComplexMatrix finite_pulse_propagator(const SystemParams& p, SpinValue spin, double theta,
                                             double phi_s) {
  if (!(p.omega_1 > 0)) throw InvalidArgument("finite pulse needs omega_1 > 0");
  if (!(theta >= 0)) throw InvalidArgument("finite pulse angle must be >= 0");
  SystemParams q = p;
  q.phi_s = phi_s;
  return unitary_exponential(hamiltonian(q, spin, true), theta / p.omega_1);
}

namespace detail {

// P(pi/2, x) P(a, y) P(pi/2, -x): the outer pulses are fixed, only the middle
// one depends on the angle, so they are built once.
class CompositeRotor {
 public:
  explicit CompositeRotor(SpinValue spin)
      : x_(ideal_pulse_propagator(spin, kPi / 2, 0.0)), mx_(ideal_pulse_propagator(spin, kPi / 2, kPi)) {
    const auto J = angular_momentum_matrices(spin);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(J.y);
    v_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
  }

  ComplexMatrix operator()(double angle) const {
    Eigen::VectorXcd ph(lambda_.size());
    for (Eigen::Index k = 0; k < lambda_.size(); ++k) ph(k) = std::exp(Complex(0.0, angle * lambda_(k)));
    return x_ * (v_ * ph.asDiagonal() * v_.adjoint()) * mx_;
  }

 private:
  ComplexMatrix x_, mx_, v_;
  Eigen::VectorXd lambda_;
};

}  // namespace detail

// Matrix product read left to right, so the -x pulse fires first.
inline ComplexMatrix composite_z_rotation(SpinValue spin, double angle) {
  return detail::CompositeRotor(spin)(angle);
}

inline ComplexMatrix direct_z_rotation(SpinValue spin, double angle) {
  return unitary_exponential(angular_momentum_matrices(spin).z, angle);
}

enum class EventKind { IdealPulse, FinitePulse, Delay, CompositeZRot, DirectZRot };

struct PulseEvent {
  EventKind kind = EventKind::IdealPulse;
  double angle = 0.0;     // nutation or z-rotation angle, rad
  double phase = 0.0;     // phi_s, rad
  double duration = 0.0;  // s; 0 on a FinitePulse means "derive from omega_1"

  static PulseEvent ideal(double angle, double phase) { return {EventKind::IdealPulse, angle, phase, 0.0}; }
  static PulseEvent finite(double angle, double phase, double duration = 0.0) {
    return {EventKind::FinitePulse, angle, phase, duration};
  }
  static PulseEvent delay(double seconds) { return {EventKind::Delay, 0.0, 0.0, seconds}; }
  static PulseEvent composite_zrot(double angle) { return {EventKind::CompositeZRot, angle, 0.0, 0.0}; }
  static PulseEvent direct_zrot(double angle) { return {EventKind::DirectZRot, angle, 0.0, 0.0}; }

  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

// Named phases used by pulse sequences.
inline constexpr double kPhaseX = 0.0;
inline constexpr double kPhaseY = kPi / 2;
inline constexpr double kPhaseMinusX = kPi;
inline constexpr double kPhaseMinusY = 3 * kPi / 2;

// Fills in FinitePulse durations from omega_1 and rejects negative times.
inline std::vector<PulseEvent> resolve_program(std::vector<PulseEvent> events, const SystemParams& p) {
  for (auto& e : events) {
    if (!std::isfinite(e.angle) || !std::isfinite(e.phase) || !std::isfinite(e.duration))
      throw InvalidProgram("non-finite event field");
    switch (e.kind) {
      case EventKind::FinitePulse: {
        if (!(p.omega_1 > 0)) throw InvalidProgram("finite pulse needs omega_1 > 0");
        if (e.angle < 0) throw InvalidProgram("finite pulse with negative angle (negative duration)");
        const double t = e.angle / p.omega_1;
        if (e.duration == 0.0) {
          e.duration = t;
        } else if (std::abs(e.duration - t) > 1e-9 * std::max(t, 1e-12)) {
          throw InvalidProgram("finite pulse duration disagrees with angle / omega_1");
        }
        break;
      }
      case EventKind::Delay:
        if (e.duration < 0) throw InvalidProgram("negative delay");
        break;
      default:
        if (e.duration != 0.0) throw InvalidProgram("instantaneous event with nonzero duration");
    }
  }
  return events;
}

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<SpinExpectation> expectations;
};

inline ComplexMatrix event_propagator(const PulseEvent& e, const SystemParams& p, SpinValue spin) {
  switch (e.kind) {
    case EventKind::IdealPulse:
      return ideal_pulse_propagator(spin, e.angle, e.phase);
    case EventKind::FinitePulse: {
      SystemParams q = p;
      q.phi_s = e.phase;
      return unitary_exponential(hamiltonian(q, spin, true), e.duration);
    }
    case EventKind::Delay:
      return free_evolution_propagator(p, spin, e.duration);
    case EventKind::CompositeZRot:
      return composite_z_rotation(spin, e.angle);
    case EventKind::DirectZRot:
      return direct_z_rotation(spin, e.angle);
  }
  throw InvalidProgram("unknown event kind");
}

inline Trajectory simulate_program(const std::vector<PulseEvent>& program, const StateVector& initial,
                                   const SystemParams& p, SpinValue spin) {
  if (initial.size() != spin.dimension())
    throw DimensionMismatch("simulate_program: initial state has dimension " +
                            std::to_string(initial.size()) + ", expected " +
                            std::to_string(spin.dimension()));
  const auto events = resolve_program(program, p);
  const auto J = angular_momentum_matrices(spin);
  Trajectory tr;
  StateVector psi = initial;
  double t = 0.0;
  tr.times.push_back(t);
  tr.states.push_back(psi);
  tr.expectations.push_back(spin_expectation(psi, J));
  for (const auto& e : events) {
    psi = event_propagator(e, p, spin) * psi;
    if (e.kind == EventKind::FinitePulse || e.kind == EventKind::Delay) t += e.duration;
    tr.times.push_back(t);
    tr.states.push_back(psi);
    tr.expectations.push_back(spin_expectation(psi, J));
  }
  return tr;
}

// beta*hbar*omega_L, Z, and epsilon = beta*hbar*omega_L / Z.
struct ThermalModel {
  double beta_hbar_omega_L = 0.0;
  double partition_Z = 1.0;
  double epsilon = 0.0;

  static ThermalModel make(double beta_hbar_omega_L, double partition_Z) {
    if (!(partition_Z > 0)) throw InvalidArgument("partition function must be positive");
    if (!(beta_hbar_omega_L >= 0)) throw InvalidArgument("beta*hbar*omega_L must be >= 0");
    return {beta_hbar_omega_L, partition_Z, beta_hbar_omega_L / partition_Z};
  }

  // Z ~ Tr(1) = 2j+1 at room temperature.
  static ThermalModel high_temperature(SpinValue spin, double beta_hbar_omega_L) {
    return make(beta_hbar_omega_L, spin.dimension());
  }
};

inline DeviationMatrix pseudo_pure_density(const StateVector& psi, const ThermalModel& m) {
  const auto d = psi.size();
  ComplexMatrix rho = (1.0 / m.partition_Z - m.epsilon) * ComplexMatrix::Identity(d, d) +
                      m.epsilon * (psi * psi.adjoint());
  return DeviationMatrix(std::move(rho), DensityKind::UnitTrace);
}

// (rho - (1/Z - eps) 1) / eps
inline DeviationMatrix pseudo_pure_part(const DeviationMatrix& rho, const ThermalModel& m) {
  if (!(m.epsilon > 0)) throw InvalidArgument("pseudo_pure_part: epsilon must be > 0");
  const auto d = rho.dimension();
  ComplexMatrix dev = (rho.matrix() - (1.0 / m.partition_Z - m.epsilon) * ComplexMatrix::Identity(d, d)) /
                      m.epsilon;
  return DeviationMatrix(std::move(dev), DensityKind::UnitTrace);
}

// First-order high-temperature equilibrium (1 - beta hbar omega_L Iz) / Z.
inline DeviationMatrix thermal_density(SpinValue spin, const ThermalModel& m) {
  const int d = spin.dimension();
  ComplexMatrix rho = (ComplexMatrix::Identity(d, d) - m.beta_hbar_omega_L * angular_momentum_matrices(spin).z) /
                      m.partition_Z;
  return DeviationMatrix(std::move(rho), DensityKind::UnitTrace);
}

// Fidelity of two pure states as seen by tomography: traceless deviations.
inline double deviation_fidelity(const StateVector& a, const StateVector& b) {
  return fidelity(pure_density(a).traceless(), pure_density(b).traceless());
}

// ---- sweeps ----

enum class SweepKind { Polar, Azimuthal };
// Ideal: instantaneous pulses. Finite: finite preparation/rotation pulse, z
// rotation applied directly. FiniteComposite: every pulse finite, z rotation
// realized by the three-pulse composite (four finite pulses in total).
enum class SweepMode { Ideal, Finite, FiniteComposite };

inline const char* to_string(SweepMode m) {
  switch (m) {
    case SweepMode::Ideal: return "ideal";
    case SweepMode::Finite: return "finite";
    case SweepMode::FiniteComposite: return "finite_composite";
  }
  return "?";
}

inline const char* to_string(SweepKind k) { return k == SweepKind::Polar ? "polar" : "azimuthal"; }

struct SweepOptions {
  // hardware gap between consecutive finite pulses, s; 0 disables it
  double inter_pulse_delay = 0.0;
  bool parallel = true;
};

struct SweepPoint {
  int index = 0;
  double angle = 0.0;  // theta (polar) or phi_tau (azimuthal)
  SweepMode mode = SweepMode::Ideal;
  Trajectory trajectory;
  SpinExpectation expectation;  // final <Ix>, <Iy>, <Iz>
  double fidelity = 1.0;        // traceless-deviation fidelity against the ideal final state
};

inline std::vector<PulseEvent> sweep_program(SweepKind kind, SweepMode mode, double angle, double delay) {
  std::vector<PulseEvent> prog;
  const bool finite = mode != SweepMode::Ideal;
  auto pulse = [&](double a, double ph) {
    if (finite && delay > 0 && !prog.empty()) prog.push_back(PulseEvent::delay(delay));
    prog.push_back(finite ? PulseEvent::finite(a, ph) : PulseEvent::ideal(a, ph));
  };
  if (kind == SweepKind::Polar) {
    // rotation about phi = pi, i.e. a y pulse
    pulse(angle, kPhaseY);
    return prog;
  }
  pulse(kPi / 2, kPhaseY);
  if (mode == SweepMode::Finite) {
    prog.push_back(PulseEvent::direct_zrot(angle));
  } else {
    pulse(kPi / 2, kPhaseMinusX);
    pulse(angle, kPhaseY);
    pulse(kPi / 2, kPhaseX);
  }
  return prog;
}

inline std::vector<SweepPoint> run_sweep(SweepKind kind, SpinValue spin, const SystemParams& p, int n_steps,
                                         SweepOptions opt = {}) {
  if (n_steps < 2) throw InvalidArgument("sweep needs n_steps >= 2");
  const double span = kind == SweepKind::Polar ? kPi : kTwoPi;
  const StateVector initial = build_coherent_state(spin, CoherentAngles{0.0, 0.0});
  constexpr SweepMode modes[] = {SweepMode::Ideal, SweepMode::Finite, SweepMode::FiniteComposite};
  std::vector<SweepPoint> out(static_cast<std::size_t>(n_steps) * 3);
  detail::parallel_for(
      static_cast<std::size_t>(n_steps),
      [&](std::size_t k) {
        const double angle = span * static_cast<double>(k) / (n_steps - 1);
        std::optional<StateVector> ideal_final;
        for (int mi = 0; mi < 3; ++mi) {
          SweepPoint& pt = out[k * 3 + mi];
          pt.index = static_cast<int>(k);
          pt.angle = angle;
          pt.mode = modes[mi];
          pt.trajectory = simulate_program(sweep_program(kind, modes[mi], angle, opt.inter_pulse_delay),
                                           initial, p, spin);
          const StateVector& fin = pt.trajectory.states.back();
          pt.expectation = pt.trajectory.expectations.back();
          if (!ideal_final) ideal_final = fin;
          pt.fidelity = deviation_fidelity(fin, *ideal_final);
        }
      },
      opt.parallel);
  return out;
}

inline std::vector<SweepPoint> polar_sweep(SpinValue spin, const SystemParams& p, int n_steps,
                                           SweepOptions opt = {}) {
  return run_sweep(SweepKind::Polar, spin, p, n_steps, opt);
}

inline std::vector<SweepPoint> azimuthal_sweep(SpinValue spin, const SystemParams& p, int n_steps,
                                               SweepOptions opt = {}) {
  return run_sweep(SweepKind::Azimuthal, spin, p, n_steps, opt);
}

}  // namespace spincs
