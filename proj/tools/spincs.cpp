// spincs: coherent states, pulse sweeps and geometric phases from the command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spincs/spincs.hpp"

namespace {

using namespace spincs;

struct Common {
  std::string spin = "3/2";
  double nu_q = 15e3;         // Hz
  double nu_1 = 62.5e3;       // Hz
  double pulse_length = 0.0;  // s, pi-pulse; overrides nu_1 when set
  double offset = 0.0;        // Hz, nu_L - nu_RF
  int steps = 0;
  std::string format = "csv";
  std::string out;
  unsigned long long seed = 1;
};

double angle_arg(const std::string& s) {
  auto v = dsl::parse_angle(s);
  if (!v) throw InvalidArgument("cannot parse angle '" + s + "'");
  return *v;
}

CoherentAngles state_arg(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidArgument("state must be 'theta,phi', got '" + s + "'");
  return {angle_arg(s.substr(0, comma)), angle_arg(s.substr(comma + 1))};
}

std::vector<double> angle_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(angle_arg(item));
  if (out.empty()) throw InvalidArgument("empty angle list");
  return out;
}

SystemParams params_from(const Common& c) {
  SystemParams p = SystemParams::na23_lyotropic();
  p.omega_Q = kTwoPi * c.nu_q;
  p.omega_1 = kTwoPi * c.nu_1;
  if (c.pulse_length > 0) p = p.with_pi_pulse(c.pulse_length);
  p.omega_RF = p.omega_L - kTwoPi * c.offset;
  if (auto w = p.advisory()) std::cerr << "warning: " << *w << "\n";
  return p;
}

void emit(const Table& t, const Common& c) {
  const std::string text = c.format == "json" ? to_json(t) : to_csv(t);
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + c.out + "'");
  f << text;
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot read program file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--spin", c.spin, "spin quantum number, e.g. 3/2")->capture_default_str();
  app->add_option("--omega-q", c.nu_q, "quadrupolar frequency nu_Q in Hz")->capture_default_str();
  app->add_option("--omega-1", c.nu_1, "RF nutation frequency nu_1 in Hz")->capture_default_str();
  app->add_option("--pulse-length", c.pulse_length, "pi-pulse length in s (sets nu_1)");
  app->add_option("--offset", c.offset, "resonance offset nu_L - nu_RF in Hz")->capture_default_str();
  app->add_option("--steps", c.steps, "number of sweep points / path steps");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app->add_option("--out", c.out, "write output to this file instead of stdout");
  app->add_option("--seed", c.seed, "seed for randomized programs")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin coherent states under quadrupolar NMR dynamics"};
  app.require_subcommand(1);
  Common c;

  auto* state = app.add_subcommand("state", "coherent state, zeta, Bloch vector and density matrix");
  add_common(state, c);
  std::string theta = "0", phi = "0";
  bool table = false;
  state->add_option("--theta", theta, "polar angle (accepts 0.5pi)")->capture_default_str();
  state->add_option("--phi", phi, "azimuthal angle")->capture_default_str();
  state->add_flag("--table", table, "print the six labelled states |0>, |-1>, |-i>, |1>, |i>, |inf>");

  auto* sweep = app.add_subcommand("sweep", "polar or azimuthal rotation sweep in three modes");
  add_common(sweep, c);
  std::string kind = "polar";
  double gap = 0.0;
  bool serial = false;
  sweep->add_option("kind", kind, "polar or azimuthal")->check(CLI::IsMember({"polar", "azimuthal"}));
  sweep->add_option("--delay", gap, "inter-pulse hardware delay in s (0 disables)")->capture_default_str();
  sweep->add_flag("--serial", serial, "evaluate points on one thread");

  auto* geo = app.add_subcommand("geomphase", "numeric vs closed-form geometric phase");
  add_common(geo, c);
  std::string which = "A", thetas, start = "up", realization = "direct", path_phi = "0";
  geo->add_option("case", which, "A (free evolution), B (single-mode), C (two-mode)")
      ->check(CLI::IsMember({"A", "B", "C"}));
  geo->add_option("--theta", thetas, "comma-separated theta values (default 19 points over [0, pi])");
  geo->add_option("--phi", path_phi, "azimuth of the initial state")->capture_default_str();
  geo->add_option("--start", start, "initial pole labelling: up (<J> = +j n) or down")
      ->check(CLI::IsMember({"up", "down"}))
      ->capture_default_str();
  geo->add_option("--realization", realization, "case C z rotation: direct or composite")
      ->check(CLI::IsMember({"direct", "composite"}))
      ->capture_default_str();

  auto* run = app.add_subcommand("run", "simulate a .pseq program");
  add_common(run, c);
  std::string program_file, initial = "0,0";
  int random_events = 0;
  run->add_option("program", program_file, "program file ('-' for stdin)");
  run->add_option("--state", initial, "initial coherent state 'theta,phi'")->capture_default_str();
  run->add_option("--random-events", random_events, "simulate a random program of this length (uses --seed)");
  bool print_program = false;
  run->add_flag("--print-program", print_program, "print the canonical program text instead of simulating");

  auto* hus = app.add_subcommand("husimi", "Husimi Q over a (theta, phi) grid");
  add_common(hus, c);
  std::string hstate = "0.5pi,0", resolution = "64x128";
  hus->add_option("--state", hstate, "coherent state 'theta,phi'")->capture_default_str();
  hus->add_option("--resolution", resolution, "NTHETAxNPHI")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const SpinValue spin = SpinValue::parse(c.spin);

    if (state->parsed()) {
      if (table)
        emit(table1(spin), c);
      else
        emit(state_table(spin, {angle_arg(theta), angle_arg(phi)}), c);
    } else if (sweep->parsed()) {
      const auto k = kind == "polar" ? SweepKind::Polar : SweepKind::Azimuthal;
      const int n = c.steps > 0 ? c.steps : (k == SweepKind::Polar ? 19 : 33);
      SweepOptions opt;
      opt.inter_pulse_delay = gap;
      opt.parallel = !serial;
      emit(sweep_table(k, spin, run_sweep(k, spin, params_from(c), n, opt)), c);
    } else if (geo->parsed()) {
      const auto pc = which == "A" ? PhaseCase::A : which == "B" ? PhaseCase::B : PhaseCase::C;
      std::vector<double> grid;
      if (thetas.empty()) {
        for (int k = 0; k <= 18; ++k) grid.push_back(kPi * k / 18);
      } else {
        grid = angle_list(thetas);
      }
      PathOptions o;
      o.pole = start == "up" ? StartPole::SpinUp : StartPole::SpinDown;
      o.realization = realization == "direct" ? ZRealization::DirectZRot : ZRealization::CompositePulses;
      o.phi = angle_arg(path_phi);
      const auto rows = phase_sweep(pc, spin, grid, c.steps > 0 ? c.steps : 20000, o);
      emit(geomphase_table(rows), c);
      for (const auto& r : rows)
        if (!r.ok()) {
          std::cerr << "error: theta = " << format_number(r.theta) << ": " << r.failure << "\n";
          return 1;
        }
    } else if (run->parsed()) {
      std::vector<PulseEvent> events;
      if (random_events > 0) {
        std::mt19937_64 rng(c.seed);
        events = random_program(rng, random_events);
      } else {
        if (program_file.empty()) throw InvalidArgument("run needs a program file or --random-events");
        SourceProgram src{read_file(program_file), program_file == "-" ? "<stdin>" : program_file};
        auto parsed = parse_program(src);
        for (const auto& d : parsed.diagnostics) std::cerr << format_diagnostic(d, src.provenance) << "\n";
        if (!parsed.ok()) return 1;
        events = std::move(parsed.events);
      }
      if (print_program) {
        std::cout << format_program(events).text;
        return 0;
      }
      const auto psi0 = build_coherent_state(spin, state_arg(initial));
      const auto params = params_from(c);
      const auto tr = simulate_program(events, psi0, params, spin);
      emit(trajectory_table(tr, resolve_program(events, params), spin), c);
    } else if (hus->parsed()) {
      const auto x = resolution.find('x');
      if (x == std::string::npos) throw InvalidArgument("resolution must look like 64x128");
      const int nt = std::stoi(resolution.substr(0, x)), np = std::stoi(resolution.substr(x + 1));
      const auto grid = husimi_grid(nt, np);
      const auto psi = build_coherent_state(spin, state_arg(hstate));
      emit(husimi_table(grid, husimi_q(psi, spin, grid)), c);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
