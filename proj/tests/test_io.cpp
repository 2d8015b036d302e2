#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "herdfield/error.hpp"
#include "herdfield/io.hpp"

using namespace herdfield;
using namespace herdfield::prescriptions;

namespace fs = std::filesystem;

namespace {

ModelParams at_alpha(double alpha) { return {0.1, 0.3, alpha, 0.9}; }

const Solution& solved_02() {
  static const Solution s = solve_mfe(at_alpha(0.2), Grid(1001));
  return s;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("herdfield_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(FormatReal, RoundTripsEveryDouble) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    EXPECT_EQ(std::strtod(format_real(x).c_str(), nullptr), x);
  }
  for (double x : {std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max(), -0.0, 0.1 + 0.2})
    EXPECT_EQ(std::strtod(format_real(x).c_str(), nullptr), x);
  EXPECT_EQ(format_real(0.05), "0.05");
  EXPECT_EQ(format_real(3.0 * 0.02), "0.06");
}

TEST(TextFiles, MissingFileIsAnIoError) {
  try {
    read_text("/nonexistent/dir/file.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/file.json"), std::string::npos);
  }
  EXPECT_THROW(write_text("/nonexistent/dir/file.json", "x"), Error);
}

TEST(EquilibriumJson, BitExactRoundTrip) {
  const Solution& s = solved_02();
  const std::string text = equilibrium_to_json(at_alpha(0.2), Selection::truthful_first, s.theta, s.values);
  const EquilibriumDocument doc = equilibrium_from_json(text);
  EXPECT_EQ(doc.params, at_alpha(0.2));
  EXPECT_EQ(doc.selection, Selection::truthful_first);
  EXPECT_EQ(doc.theta.grid, s.theta.grid);
  EXPECT_EQ(doc.theta.nodes, s.theta.nodes);
  EXPECT_EQ(doc.values.low, s.values.low);
  EXPECT_EQ(doc.values.high, s.values.high);
  EXPECT_EQ(equilibrium_to_json(doc.params, doc.selection, doc.theta, doc.values), text);
}

TEST(EquilibriumJson, FieldLayout) {
  EquilibriumTable theta{Grid(2)};
  ValueTable values{Grid(2)};
  values.low = {1.5, 2.5};
  const std::string text = equilibrium_to_json(at_alpha(0.2), Selection::herding_first, theta, values);
  EXPECT_LT(text.find("\"params\""), text.find("\"selection\""));
  EXPECT_LT(text.find("\"selection\""), text.find("\"grid\""));
  EXPECT_LT(text.find("\"grid\""), text.find("\"nodes\""));
  for (const char* key : {"\"n_points\"", "\"z1\"", "\"g_minus\"", "\"g_plus\"", "\"V_minus\"", "\"V_plus\"",
                          "\"multiplicity\"", "\"mixing\"", "\"herding-first\""})
    EXPECT_NE(text.find(key), std::string::npos) << key;
}

TEST(EquilibriumJson, MalformedDocumentsAreIoErrors) {
  const Solution& s = solved_02();
  std::string text = equilibrium_to_json(at_alpha(0.2), Selection::truthful_first, s.theta, s.values);
  for (const std::string& bad : {std::string("{"), std::string("[]"), std::string("{\"params\": 1}"),
                                 text.replace(text.find("\"n_points\": 1001"), 16, "\"n_points\": 1002")}) {
    try {
      equilibrium_from_json(bad);
      FAIL() << bad.substr(0, 40);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::io);
    }
  }
}

TEST(ReportJson, ThresholdRoundTrip) {
  ThresholdResult r;
  r.predicate = "herd-never";
  r.alpha_star = 0.40234375;
  r.bracket_lo = 0.3984375;
  r.bracket_hi = 0.40625;
  r.holds_at_hi = true;
  const ThresholdResult back = threshold_from_json(threshold_to_json(r));
  EXPECT_EQ(back.predicate, r.predicate);
  EXPECT_EQ(back.alpha_star, r.alpha_star);
  EXPECT_EQ(back.bracket_lo, r.bracket_lo);
  EXPECT_EQ(back.bracket_hi, r.bracket_hi);
  EXPECT_EQ(back.holds_at_lo, r.holds_at_lo);
  EXPECT_EQ(back.holds_at_hi, r.holds_at_hi);
}

TEST(ReportJson, SolveAndHerdingReportsNameTheirFields) {
  const std::string solve = solve_report_to_json(solved_02().report);
  for (const char* key : {"iterations", "final_sup_change", "bellman_residual", "nodes_with_multiplicity",
                          "nodes_with_mixing", "converged"})
    EXPECT_NE(solve.find(key), std::string::npos) << key;
  const Trajectory traj = simulate({0.05}, solved_02().theta, at_alpha(0.2), 50);
  const std::string herding = herding_report_to_json(detect_herding(traj, 1e-9));
  for (const char* key : {"herded", "onset", "herd_action"}) EXPECT_NE(herding.find(key), std::string::npos) << key;
}

TEST(Csv, ParseSplitsHeaderAndRows) {
  const CsvTable t = parse_csv("a,b\n1,2\n3,4\n");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"3", "4"}));
}

TEST(Csv, TrajectoryRoundTrip) {
  const Trajectory traj = simulate({0.37}, solved_02().theta, at_alpha(0.2), 80);
  const std::string text = trajectory_to_csv(traj);
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,z1,g_minus,g_plus,mu1");
  EXPECT_EQ(trajectory_from_csv(text), traj);
}

TEST(Csv, EmpiricalRoundTrip) {
  const Trajectory traj = simulate({0.6}, solved_02().theta, at_alpha(0.2), 20);
  const EmpiricalTrajectory e = finite_n_simulate(700, {0.6}, solved_02().theta, at_alpha(0.2), 20, 77);
  const std::string text = empirical_to_csv(traj, e);
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,z1,g_minus,g_plus,mu1,N,seed,z1_hat,mu1_hat");
  const EmpiricalTrajectory back = empirical_from_csv(text);
  EXPECT_EQ(back.population, 700u);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.z1_hat, e.z1_hat);
  EXPECT_EQ(back.mu1_hat, e.mu1_hat);
}

TEST(Csv, PhaseRoundTrip) {
  SweepSettings s;
  s.grid_points = 201;
  const std::vector<double> alphas{0.2, 0.9};
  const auto points = alpha_sweep(alphas, s);
  const std::string text = phase_to_csv(points);
  EXPECT_EQ(text.substr(0, text.find('\n')), "alpha,classification,z0=0.05,z0=0.25,z0=0.5,z0=0.75,z0=0.95");
  const auto rows = phase_from_csv(text);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].alpha, 0.2);
  EXPECT_EQ(rows[0].classification, PhaseClass::initial_condition_dependent);
  EXPECT_EQ(rows[0].outcomes, (std::vector<std::string>{"-1", "-1", "none", "1", "1"}));
  EXPECT_EQ(rows[1].classification, PhaseClass::herd_never);
  EXPECT_EQ(phase_to_csv(points), text);
}

TEST(Figures, CurvesFollowTheEquilibrium) {
  const Solution& s = solved_02();
  const FigureBundle f = make_figures(s.theta, s.values, at_alpha(0.2));
  ASSERT_EQ(f.z1.size(), 1001u);
  for (std::size_t i = 0; i < f.z1.size(); ++i) {
    const Prescription& g = s.theta.at(i);
    EXPECT_EQ(f.theta_low[i], g.g_minus);
    EXPECT_EQ(f.theta_high[i], g.g_plus);
    EXPECT_EQ(f.g[i], action_mean_field({f.z1[i]}, g).mu1);
    EXPECT_EQ(f.phi[i], propagate({f.z1[i]}, g, at_alpha(0.2)).z1);
    EXPECT_EQ(f.value_low[i], s.values.low[i]);
  }
}

TEST(Figures, StrongPreferenceActionCurveIsTheDiagonal) {
  const Solution s = solve_mfe(at_alpha(0.9), Grid(101));
  const FigureBundle f = make_figures(s.theta, s.values, at_alpha(0.9));
  for (std::size_t i = 0; i < f.z1.size(); ++i) EXPECT_EQ(f.g[i], f.z1[i]);
}

TEST(Figures, FilesRoundTrip) {
  const Solution& s = solved_02();
  const fs::path dir = scratch("figures");
  const FigureBundle f = emit_figures(s.theta, s.values, at_alpha(0.2), dir);
  const std::vector<const std::vector<double>*> curves{&f.phi, &f.g, &f.value_low, &f.value_high, &f.theta_low,
                                                       &f.theta_high};
  ASSERT_EQ(curves.size(), kFigureFiles.size());
  for (std::size_t k = 0; k < kFigureFiles.size(); ++k) {
    const auto [z, v] = figure_from_csv(read_text(dir / kFigureFiles[k]));
    EXPECT_EQ(z, f.z1) << kFigureFiles[k];
    EXPECT_EQ(v, *curves[k]) << kFigureFiles[k];
  }
  fs::remove_all(dir);
}
