#include <gtest/gtest.h>

#include <algorithm>

#include "json.hpp"
#include "spincs/report.hpp"

using namespace spincs;

namespace {

std::string cell(const Table& t, std::size_t row, const std::string& col) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), col);
  return cell_text(t.rows.at(row).at(it - t.columns.begin()));
}

std::string value_of(const Table& t, const std::string& key) {
  for (const auto& r : t.rows)
    if (cell_text(r[0]) == key) return cell_text(r[1]);
  return "<missing>";
}

}  // namespace

TEST(Table1, LabelledStates) {
  const char* zeta[] = {"0", "-1", "-i", "1", "i", "∞"};
  const char* n[] = {"(0,0,1)", "(1,0,0)", "(0,-1,0)", "(-1,0,0)", "(0,1,0)", "(0,0,-1)"};
  for (int tj : {1, 3, 4, 7}) {
    const auto t = table1(SpinValue(tj));
    ASSERT_EQ(t.rows.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
      EXPECT_EQ(cell(t, i, "zeta"), zeta[i]) << i;
      EXPECT_EQ(cell(t, i, "n"), n[i]) << i;
    }
  }
  EXPECT_EQ(cell(table1(SpinValue(3)), 2, "phi"), "1.5pi");
}

TEST(StateTable, Keys) {
  const auto t = state_table(SpinValue(3), {kPi / 2, 3 * kPi / 2});
  EXPECT_EQ(value_of(t, "spin"), "3/2");
  EXPECT_EQ(value_of(t, "zeta"), "-i");
  EXPECT_EQ(value_of(t, "n"), "(0,-1,0)");
  EXPECT_EQ(value_of(t, "theta_from_rho"), format_number(kPi / 2));
  EXPECT_EQ(value_of(t, "phi_from_rho"), format_number(3 * kPi / 2));
  EXPECT_EQ(value_of(t, "amplitude[-3/2]"), format_number(1.0 / std::pow(2.0, 1.5)));
  EXPECT_EQ(value_of(t, "rho[-3/2][-3/2]"), "0.125");
  EXPECT_EQ(t.rows.size(), 7u + 4u + 16u);
  const auto pole = state_table(SpinValue(2), {0.0, 0.0});
  EXPECT_EQ(value_of(pole, "phi_from_rho"), "undefined");
  EXPECT_EQ(value_of(pole, "amplitude[-1]"), "1");
}

TEST(Output, NumberFormatting) {
  EXPECT_EQ(format_number(0.1 + 0.2), "0.3");
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(kPi), "3.14159265359");
  EXPECT_EQ(format_number(1e-20), "1e-20");
  EXPECT_EQ(format_clean(1e-20), "0");
  EXPECT_EQ(format_complex(Complex(0.5, -2)), "0.5-2i");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
}

TEST(Output, CsvAndJsonMirror) {
  const auto rows = phase_sweep(PhaseCase::C, SpinValue(3), {0.0, kPi / 2}, 2000);
  const auto t = geomphase_table(rows);
  const auto csv = to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "case,j,theta,numeric_phase,closed_form,abs_error,n_steps,estimated_error,status");
  EXPECT_EQ(csv, to_csv(geomphase_table(phase_sweep(PhaseCase::C, SpinValue(3), {0.0, kPi / 2}, 2000))));
  const auto j = nlohmann::json::parse(to_json(t));
  EXPECT_EQ(j["schema_version"], kSchemaVersion);
  EXPECT_EQ(j["kind"], "geomphase");
  ASSERT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][1]["j"], "3/2");
  EXPECT_EQ(j["rows"][1]["n_steps"], 2000);
  EXPECT_EQ(format_number(j["rows"][1]["numeric_phase"].get<double>()), cell(t, 1, "numeric_phase"));
}

TEST(Output, NonFiniteInJson) {
  Table t{"x", {"a"}, {{std::numeric_limits<double>::quiet_NaN()}}};
  EXPECT_EQ(to_csv(t), "a\nnan\n");
  EXPECT_TRUE(nlohmann::json::parse(to_json(t))["rows"][0]["a"].is_null());
}

TEST(Husimi, PeakAtStateDirection) {
  SpinValue s(3);
  const auto grid = husimi_grid(64, 128);
  const auto q = husimi_q(build_coherent_state(s, {kPi / 2, 0.0}), s, grid);
  const auto k = std::max_element(q.begin(), q.end()) - q.begin();
  EXPECT_NEAR(grid[k].theta, kPi / 2, 1e-12);
  EXPECT_NEAR(grid[k].phi, 0.0, 1e-12);
  EXPECT_NEAR(q[k], 1.0, 1e-12);
  const auto t = husimi_table(grid, q);
  EXPECT_EQ(t.rows.size(), 65u * 128u);
}

TEST(SweepTable, MagnitudeIsSpin) {
  SpinValue s(3);
  const auto pts = polar_sweep(s, SystemParams::na23_lyotropic(), 5);
  const auto t = sweep_table(SweepKind::Polar, s, pts);
  ASSERT_EQ(t.rows.size(), 15u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (cell(t, i, "mode") != "ideal") continue;
    EXPECT_EQ(cell(t, i, "Imag"), "1.5");
    EXPECT_EQ(cell(t, i, "Imag_over_j"), "1");
  }
  EXPECT_EQ(t.columns.front(), "theta");
}

TEST(TrajectoryTable, Labels) {
  SpinValue s(3);
  const std::vector<PulseEvent> prog = {PulseEvent::ideal(kPi / 2, kPhaseY)};
  const auto tr = simulate_program(prog, build_coherent_state(s, {0, 0}), SystemParams::na23_lyotropic(), s);
  const auto csv = to_csv(trajectory_table(tr, prog, s));
  EXPECT_EQ(csv,
            "step,time,event,Ix,Iy,Iz,Imag,nx,ny,nz\n"
            "0,0,initial,0,0,-1.5,1.5,0,0,1\n"
            "1,0,pulse 0.5pi y,1.5,0,0,1.5,-1,0,0\n");
}
