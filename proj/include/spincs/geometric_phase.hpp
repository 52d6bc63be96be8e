#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "spincs/coherent_states.hpp"
#include "spincs/detail/parallel.hpp"
#include "spincs/nmr_dynamics.hpp"

namespace spincs {

struct CyclicPath {
  std::vector<StateVector> states;  // N+1 states, last ~ first up to phase
  std::vector<double> parameters;   // phi' values, same length
  // State whose overlap phase fixes the branch of the total phase. Without it
  // the first state is used, which only resolves the total phase mod 2pi
  // when the path comes close to being orthogonal to its start.
  std::optional<StateVector> lift_reference;
  // -integral <G> dphi' for paths generated by a known constant generator
  std::optional<double> exact_dynamic_phase;
};

struct GeometricPhaseResult {
  double total_phase = 0.0;
  double dynamic_phase = 0.0;
  double geometric_phase = 0.0;
  int n_steps = 0;
  double estimated_error = 0.0;
};

inline constexpr double kCyclicTolerance = 1e-8;
inline constexpr double kMinStepOverlap = 0.99;
inline constexpr double kBranchStep = kPi / 720;

namespace detail {

inline double wrap_pi(double a) { return std::remainder(a, kTwoPi); }

struct PhasePair {
  double total = 0.0;
  double dynamic = 0.0;
};

inline PhasePair accumulate_phases(const std::vector<StateVector>& s, const std::vector<std::size_t>& idx,
                                   const std::optional<StateVector>& ref) {
  const StateVector* r = &s[idx.front()];
  if (ref && std::abs(ref->dot(s[idx.front()])) > 1e-13) r = &*ref;
  PhasePair out;
  double prev = std::arg(r->dot(s[idx.front()]));
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const double cur = std::arg(r->dot(s[idx[k]]));
    out.total += wrap_pi(cur - prev);
    prev = cur;
    // Im log of the step overlap: the discrete -i<psi|d psi>, exactly
    // covariant under per-state phase changes
    out.dynamic += std::arg(s[idx[k - 1]].dot(s[idx[k]]));
  }
  return out;
}

}  // namespace detail

inline void validate_path(const CyclicPath& path) {
  const auto& s = path.states;
  if (s.size() < 101) throw InvalidArgument("cyclic path needs at least 100 steps");
  if (!path.parameters.empty() && path.parameters.size() != s.size())
    throw InvalidArgument("cyclic path: parameter list length differs from state list");
  const auto d = s.front().size();
  for (const auto& v : s) {
    if (v.size() != d) throw DimensionMismatch("cyclic path: mixed state dimensions");
    if (std::abs(v.norm() - 1.0) > 1e-10) throw InvalidArgument("cyclic path: state is not unit norm");
  }
  if (path.lift_reference && path.lift_reference->size() != d)
    throw DimensionMismatch("cyclic path: lift reference dimension");
  const double closing = std::abs(s.front().dot(s.back()));
  if (closing < 1.0 - kCyclicTolerance)
    throw NonCyclicPath("path is not cyclic: |<psi_0|psi_N>| = " + std::to_string(closing));
  for (std::size_t k = 0; k + 1 < s.size(); ++k)
    if (std::abs(s[k].dot(s[k + 1])) < kMinStepOverlap)
      throw StepTooCoarse("adjacent overlap below 0.99 at step " + std::to_string(k));
}

inline GeometricPhaseResult numeric_geometric_phase(const CyclicPath& path) {
  validate_path(path);
  const std::size_t n = path.states.size() - 1;
  std::vector<std::size_t> fine(n + 1), coarse;
  std::iota(fine.begin(), fine.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; k += 2) coarse.push_back(k);
  coarse.push_back(n);

  const auto f = detail::accumulate_phases(path.states, fine, path.lift_reference);
  const auto c = detail::accumulate_phases(path.states, coarse, path.lift_reference);
  GeometricPhaseResult r;
  r.total_phase = f.total;
  r.dynamic_phase = f.dynamic;
  r.geometric_phase = f.total - f.dynamic;
  r.n_steps = static_cast<int>(n);
  // second-order scheme: error(N) ~ (G_N/2 - G_N) / 3
  r.estimated_error = std::abs((c.total - c.dynamic) - r.geometric_phase) / 3.0;
  return r;
}

// ---- built-in paths ----

// SpinUp starts from the state with <J> = +j n(theta, phi), the labelling in
// which |j,+j> sits at theta = 0. SpinDown starts from build_coherent_state
// directly (|j,-j> at theta = 0).
enum class StartPole { SpinUp, SpinDown };

inline StateVector path_start_state(SpinValue spin, CoherentAngles a, StartPole pole) {
  if (pole == StartPole::SpinDown) return build_coherent_state(spin, a);
  return build_coherent_state(spin, CoherentAngles{kPi - a.theta, a.phi + kPi});
}

inline StateVector path_reference_state(SpinValue spin, StartPole pole) {
  return basis_state(spin, pole == StartPole::SpinUp ? spin.j() : -spin.j());
}

// -Iz + (3Iz^2 - I^2)/6
inline ComplexMatrix free_evolution_generator(SpinValue spin) {
  return -angular_momentum_matrices(spin).z + quadrupolar_operator(spin) / 6.0;
}

// (Iz^2 - (2I-1) Iz - (I^2+I)/3) / 2
inline ComplexMatrix single_mode_bec_generator(SpinValue spin) {
  const auto z = angular_momentum_matrices(spin).z;
  const double j = spin.j();
  const int d = spin.dimension();
  return 0.5 * (z * z - (2 * j - 1) * z - ((j * j + j) / 3.0) * ComplexMatrix::Identity(d, d));
}

inline ComplexMatrix two_mode_generator(SpinValue spin) { return angular_momentum_matrices(spin).z; }

inline CyclicPath path_from_generator(const ComplexMatrix& g, const StateVector& psi0, int n_steps,
                                      std::optional<StateVector> reference) {
  if (n_steps < 100) throw InvalidArgument("path needs n_steps >= 100");
  if (!is_hermitian(g)) throw NonHermitianInput("path generator must be Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  const ComplexMatrix& v = es.eigenvectors();
  const Eigen::VectorXcd b = v.adjoint() * psi0;
  CyclicPath path;
  path.states.reserve(n_steps + 1);
  path.parameters.reserve(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) {
    const double t = kTwoPi * k / n_steps;
    Eigen::VectorXcd c(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) c(i) = std::exp(Complex(0.0, -t * es.eigenvalues()(i))) * b(i);
    path.states.push_back(v * c);
    path.parameters.push_back(t);
  }
  path.lift_reference = std::move(reference);
  path.exact_dynamic_phase = -kTwoPi * psi0.dot(g * psi0).real();
  const double closing = std::abs(path.states.front().dot(path.states.back()));
  if (closing < 1.0 - kCyclicTolerance)
    throw NonCyclicPath("generator does not close the path: |<psi_0|psi_N>| = " + std::to_string(closing));
  return path;
}

inline CyclicPath free_evolution_path(SpinValue spin, CoherentAngles a, int n_steps,
                                      StartPole pole = StartPole::SpinUp) {
  return path_from_generator(free_evolution_generator(spin), path_start_state(spin, a, pole), n_steps,
                             path_reference_state(spin, pole));
}

inline CyclicPath single_mode_bec_path(SpinValue spin, CoherentAngles a, int n_steps,
                                       StartPole pole = StartPole::SpinUp) {
  return path_from_generator(single_mode_bec_generator(spin), path_start_state(spin, a, pole), n_steps,
                             path_reference_state(spin, pole));
}

// Two-mode BEC parameters in their NMR dress.
struct BecMapping {
  double omega_0 = 0.0;  // omega_RF - omega_L
  double q = 0.0;        // omega_Q / 2
  double G = 0.0;        // omega_1
  double phi = 0.0;      // phi_s

  static BecMapping from_nmr(const SystemParams& p) {
    return {p.omega_RF - p.omega_L, p.omega_Q / 2.0, p.omega_1, p.phi_s};
  }
};

enum class ZRealization { DirectZRot, CompositePulses };

inline CyclicPath two_mode_path(SpinValue spin, CoherentAngles a, int n_steps,
                                ZRealization realization = ZRealization::DirectZRot,
                                StartPole pole = StartPole::SpinUp, BecMapping mapping = {}) {
  if (mapping.q != 0.0 || mapping.G != 0.0)
    throw InvalidArgument("two-mode path is only implemented for q = 0 and G = 0");
  if (realization == ZRealization::DirectZRot)
    return path_from_generator(two_mode_generator(spin), path_start_state(spin, a, pole), n_steps,
                               path_reference_state(spin, pole));
  if (n_steps < 100) throw InvalidArgument("path needs n_steps >= 100");
  const StateVector psi0 = path_start_state(spin, a, pole);
  const detail::CompositeRotor rotor(spin);
  CyclicPath path;
  for (int k = 0; k <= n_steps; ++k) {
    const double t = kTwoPi * k / n_steps;
    path.states.push_back(rotor(t) * psi0);
    path.parameters.push_back(t);
  }
  path.lift_reference = path_reference_state(spin, pole);
  path.exact_dynamic_phase = -kTwoPi * psi0.dot(two_mode_generator(spin) * psi0).real();
  const double closing = std::abs(path.states.front().dot(path.states.back()));
  if (closing < 1.0 - kCyclicTolerance) throw NonCyclicPath("composite z path does not close");
  return path;
}

// ---- closed forms ----

namespace detail {
inline double checked_cos(double theta) {
  if (!(theta >= -1e-12 && theta <= kPi + 1e-12)) throw InvalidArgument("closed form needs theta in [0, pi]");
  return std::cos(theta);
}
}  // namespace detail

inline double closed_form_A(SpinValue spin, double theta) {
  const double c = detail::checked_cos(theta), i = spin.j();
  return kPi * i * ((i - 0.5) * c * c - 2.0 * c + 2.5 - i);
}

inline double closed_form_B(SpinValue spin, double theta) {
  const double c = detail::checked_cos(theta), i = spin.j();
  return (kPi * i * (2 * i - 1) / 2.0) * (3.0 + c) * (1.0 - c);
}

inline double closed_form_C(SpinValue spin, double theta) {
  const double c = detail::checked_cos(theta), i = spin.j();
  return -2.0 * kPi * i * (1.0 - c);
}

enum class PhaseCase { A, B, C };

inline const char* to_string(PhaseCase c) { return c == PhaseCase::A ? "A" : c == PhaseCase::B ? "B" : "C"; }

inline double closed_form(PhaseCase c, SpinValue spin, double theta) {
  switch (c) {
    case PhaseCase::A: return closed_form_A(spin, theta);
    case PhaseCase::B: return closed_form_B(spin, theta);
    case PhaseCase::C: return closed_form_C(spin, theta);
  }
  return 0.0;
}

struct PathOptions {
  StartPole pole = StartPole::SpinUp;
  ZRealization realization = ZRealization::DirectZRot;
  double phi = 0.0;
};

inline CyclicPath case_path(PhaseCase c, SpinValue spin, double theta, int n_steps, const PathOptions& o = {}) {
  const CoherentAngles a{theta, o.phi};
  switch (c) {
    case PhaseCase::A: return free_evolution_path(spin, a, n_steps, o.pole);
    case PhaseCase::B: return single_mode_bec_path(spin, a, n_steps, o.pole);
    case PhaseCase::C: return two_mode_path(spin, a, n_steps, o.realization, o.pole);
  }
  throw InvalidArgument("unknown phase case");
}

struct PhaseRow {
  PhaseCase which = PhaseCase::A;
  SpinValue spin{1};
  double theta = 0.0;
  double numeric = 0.0;
  double closed = 0.0;
  double abs_error = 0.0;
  int n_steps = 0;
  double estimated_error = 0.0;
  std::string failure;  // empty when the numeric phase was computed

  bool ok() const { return failure.empty(); }
};

namespace detail {

// Moves a raw phase onto the branch continuous in theta, walking from a known
// (theta0, value0) in sub-steps of at most max_step. Each sub-step has to move
// the phase by less than pi or the wrong branch gets picked.
inline std::optional<double> continue_branch(const std::function<double(double)>& raw_at, double theta0,
                                             double value0, double theta, double raw, double max_step) {
  auto nearest = [](double r, double v) { return r + kTwoPi * std::round((v - r) / kTwoPi); };
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(theta - theta0) / max_step)));
  double v = value0;
  for (int k = 1; k < n; ++k) {
    try {
      v = nearest(raw_at(theta0 + (theta - theta0) * k / n), v);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  return nearest(raw, v);
}

}  // namespace detail

// Numeric vs closed form over a theta grid. The branch of each numeric value
// is fixed by continuation from theta = 0, where every path is stationary.
inline std::vector<PhaseRow> phase_sweep(PhaseCase c, SpinValue spin, const std::vector<double>& thetas,
                                         int n_steps, const PathOptions& o = {}) {
  std::vector<PhaseRow> rows(thetas.size());
  std::vector<std::size_t> order(thetas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return thetas[a] < thetas[b]; });

  const int coarse_steps = std::max(100, n_steps / 10);
  auto raw_at = [&](double th) {
    return numeric_geometric_phase(case_path(c, spin, th, coarse_steps, o)).geometric_phase;
  };

  std::optional<std::pair<double, double>> anchor;
  try {
    anchor = std::make_pair(0.0, numeric_geometric_phase(case_path(c, spin, 0.0, n_steps, o)).geometric_phase);
  } catch (const Error&) {
  }

  for (auto idx : order) {
    PhaseRow& r = rows[idx];
    r.which = c;
    r.spin = spin;
    r.theta = thetas[idx];
    r.n_steps = n_steps;
    r.closed = closed_form(c, spin, r.theta);
    try {
      const auto res = numeric_geometric_phase(case_path(c, spin, r.theta, n_steps, o));
      r.estimated_error = res.estimated_error;
      r.numeric = res.geometric_phase;
      std::optional<double> lifted;
      if (anchor) lifted = detail::continue_branch(raw_at, anchor->first, anchor->second, r.theta, r.numeric, kBranchStep);
      if (!lifted) {
        // the value is only known modulo 2 pi
        r.failure = "phase branch not continuable from theta = 0 (non-cyclic paths in between)";
        r.abs_error = std::abs(r.numeric - r.closed);
        anchor.reset();
        continue;
      }
      r.numeric = *lifted;
      anchor = std::make_pair(r.theta, r.numeric);
      r.abs_error = std::abs(r.numeric - r.closed);
    } catch (const Error& e) {
      r.failure = e.what();
      r.numeric = std::nan("");
      r.abs_error = std::nan("");
    }
  }
  return rows;
}

}  // namespace spincs
