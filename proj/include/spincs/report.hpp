#pragma once

#include <string>
#include <vector>

#include "spincs/coherent_states.hpp"
#include "spincs/geometric_phase.hpp"
#include "spincs/nmr_dynamics.hpp"
#include "spincs/pulse_dsl.hpp"
#include "spincs/table.hpp"

// Tables behind the CLI subcommands.

namespace spincs {

inline std::string format_complex(Complex z) {
  const std::string re = format_clean(z.real());
  std::string im = format_clean(z.imag());
  if (im == "0") return re;
  std::string mag = im.front() == '-' ? im.substr(1) : im;
  if (mag == "1") mag.clear();
  if (re == "0") return (im.front() == '-' ? "-" : "") + mag + "i";
  return re + (im.front() == '-' ? "-" : "+") + mag + "i";
}

inline std::string format_zeta(const ZetaPoint& z) { return z.is_infinite() ? "∞" : format_complex(z.value()); }

inline std::string format_bloch(const BlochVector& n) {
  return "(" + format_clean(n.x) + "," + format_clean(n.y) + "," + format_clean(n.z) + ")";
}

inline std::string m_label(SpinValue spin, int index) {
  const int two_m = 2 * index - spin.two_j();
  if (two_m % 2 == 0) return std::to_string(two_m / 2);
  return std::to_string(two_m) + "/2";
}

inline Table state_table(SpinValue spin, CoherentAngles angles) {
  Table t{"state", {"key", "value"}, {}};
  auto put = [&](std::string k, std::string v) { t.rows.push_back({std::move(k), std::move(v)}); };
  const auto psi = build_coherent_state(spin, angles);
  const auto rho = density_matrix_elements(spin, angles);
  put("spin", spin.to_string());
  put("theta", format_number(angles.theta));
  put("phi", format_number(angles.phi));
  put("zeta", format_zeta(zeta_from_angles(angles)));
  put("n", format_bloch(bloch_vector(psi, spin)));
  const double th = extract_theta(rho, spin);
  put("theta_from_rho", format_clean(th));
  try {
    put("phi_from_rho", format_clean(extract_phi(rho, spin, th)));
  } catch (const DegeneratePole&) {
    put("phi_from_rho", "undefined");
  }
  for (int i = 0; i < spin.dimension(); ++i) put("amplitude[" + m_label(spin, i) + "]", format_complex(psi(i)));
  for (int i = 0; i < spin.dimension(); ++i)
    for (int k = 0; k < spin.dimension(); ++k)
      put("rho[" + m_label(spin, i) + "][" + m_label(spin, k) + "]", format_complex(rho.matrix()(i, k)));
  return t;
}

// The six labelled states of the comparison table: |0>, |-1>, |-i>, |1>, |i>, |inf>.
inline std::vector<CoherentAngles> table1_angles() {
  return {{0.0, 0.0}, {kPi / 2, 0.0}, {kPi / 2, 3 * kPi / 2}, {kPi / 2, kPi}, {kPi / 2, kPi / 2}, {kPi, 0.0}};
}

inline Table table1(SpinValue spin) {
  Table t{"table1", {"theta", "phi", "zeta", "n"}, {}};
  for (const auto& a : table1_angles()) {
    const auto psi = build_coherent_state(spin, a);
    t.rows.push_back({dsl::format_angle(a.theta), dsl::format_angle(a.phi), format_zeta(zeta_from_angles(a)),
                      format_bloch(bloch_vector(psi, spin))});
  }
  return t;
}

inline Table sweep_table(SweepKind kind, SpinValue spin, const std::vector<SweepPoint>& pts) {
  Table t{std::string("sweep_") + to_string(kind),
          {kind == SweepKind::Polar ? "theta" : "phi", "Ix", "Iy", "Iz", "Imag", "fidelity", "mode", "Ix_over_j",
           "Iy_over_j", "Iz_over_j", "Imag_over_j"},
          {}};
  const double j = spin.j();
  for (const auto& p : pts) {
    const auto& e = p.expectation;
    t.rows.push_back({p.angle, clean(e.x), clean(e.y), clean(e.z), e.magnitude(), p.fidelity,
                      std::string(to_string(p.mode)), clean(e.x / j), clean(e.y / j), clean(e.z / j),
                      e.magnitude() / j});
  }
  return t;
}

inline Table geomphase_table(const std::vector<PhaseRow>& rows) {
  Table t{"geomphase",
          {"case", "j", "theta", "numeric_phase", "closed_form", "abs_error", "n_steps", "estimated_error", "status"},
          {}};
  for (const auto& r : rows)
    t.rows.push_back({std::string(to_string(r.which)), r.spin.to_string(), r.theta, r.numeric, r.closed, r.abs_error,
                      static_cast<long long>(r.n_steps), r.estimated_error, r.ok() ? std::string("ok") : r.failure});
  return t;
}

inline Table trajectory_table(const Trajectory& tr, const std::vector<PulseEvent>& events, SpinValue spin) {
  Table t{"trajectory", {"step", "time", "event", "Ix", "Iy", "Iz", "Imag", "nx", "ny", "nz"}, {}};
  const double j = spin.j();
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const auto& e = tr.expectations[k];
    std::string label = k == 0 ? "initial" : format_event(events[k - 1]);
    t.rows.push_back({static_cast<long long>(k), tr.times[k], std::move(label), clean(e.x), clean(e.y),
                      clean(e.z), e.magnitude(), clean(-e.x / j), clean(-e.y / j), clean(-e.z / j)});
  }
  return t;
}

inline Table husimi_table(const std::vector<CoherentAngles>& grid, const std::vector<double>& q) {
  Table t{"husimi", {"theta", "phi", "q"}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i].theta, grid[i].phi, q[i]});
  return t;
}

}  // namespace spincs
