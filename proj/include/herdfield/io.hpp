#pragma once

// File formats: the equilibrium JSON document, report JSON documents, and
// the trajectory / empirical / phase / figure CSV files, with loaders for
// each so that every emitted file can be read back.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "herdfield/solver.hpp"
#include "herdfield/sweep.hpp"
#include "herdfield/trajectory.hpp"

namespace herdfield {

/// Shortest decimal text that parses back to the same double.
std::string format_real(double value);

/// Whole-file helpers; failures throw Error(ErrorKind::io) naming the path.
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// ------------------------------------------------------------ equilibrium

struct EquilibriumDocument {
  ModelParams params;
  Selection selection = Selection::truthful_first;
  EquilibriumTable theta;
  ValueTable values;
};

/// {"params": {...}, "selection": ..., "grid": {"n_points": n},
///  "nodes": [{"z1", "g_minus", "g_plus", "V_minus", "V_plus",
///             "multiplicity", "mixing"}, ...]}
std::string equilibrium_to_json(const ModelParams& params, Selection selection,
                                const EquilibriumTable& theta, const ValueTable& values);

/// Throws Error(ErrorKind::io) on malformed documents.
EquilibriumDocument equilibrium_from_json(const std::string& text);

std::string solve_report_to_json(const SolveReport& report);
std::string herding_report_to_json(const HerdingReport& report);
std::string threshold_to_json(const ThresholdResult& result);
ThresholdResult threshold_from_json(const std::string& text);

// ------------------------------------------------------------ CSV

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Plain comma-separated text; no quoting (none of our fields need it).
CsvTable parse_csv(const std::string& text);

/// Columns t, z1, g_minus, g_plus, mu1.
std::string trajectory_to_csv(const Trajectory& traj);
Trajectory trajectory_from_csv(const std::string& text);

/// Columns t, z1, g_minus, g_plus, mu1, N, seed, z1_hat, mu1_hat; the
/// first five come from the deterministic trajectory of the same length.
std::string empirical_to_csv(const Trajectory& traj, const EmpiricalTrajectory& empirical);
EmpiricalTrajectory empirical_from_csv(const std::string& text);

/// Columns alpha, classification, then one "z0=<probe>" column per probe
/// holding the herd action (-1 or 1), "mixed", or "none".
std::string phase_to_csv(std::span<const PhasePoint> points);

struct PhaseRow {
  double alpha = 0.0;
  PhaseClass classification = PhaseClass::unclassified;
  std::vector<std::string> outcomes;
};
std::vector<PhaseRow> phase_from_csv(const std::string& text);

// ------------------------------------------------------------ figures

/// Curves over the grid, evaluated with gamma = theta[z] at each node.
struct FigureBundle {
  std::vector<double> z1;
  std::vector<double> phi;         // propagate(z, theta[z])
  std::vector<double> g;           // action_mean_field(z, theta[z])
  std::vector<double> value_low;   // V(z, -1)
  std::vector<double> value_high;  // V(z, +1)
  std::vector<double> theta_low;   // theta[z](1 | x = -1)
  std::vector<double> theta_high;  // theta[z](1 | x = +1)
};

FigureBundle make_figures(const EquilibriumTable& theta, const ValueTable& values,
                          const ModelParams& params);

/// File names written by write_figures, in bundle order.
inline const std::vector<std::string> kFigureFiles{
    "figure_phi.csv",        "figure_action_mean_field.csv", "figure_value_low.csv",
    "figure_value_high.csv", "figure_theta_low.csv",         "figure_theta_high.csv"};

/// One (z1, value) CSV per curve into `dir`.
void write_figures(const FigureBundle& bundle, const std::filesystem::path& dir);

FigureBundle emit_figures(const EquilibriumTable& theta, const ValueTable& values,
                          const ModelParams& params, const std::filesystem::path& dir);

/// Reads one figure CSV back as (z1, value) columns.
std::pair<std::vector<double>, std::vector<double>> figure_from_csv(const std::string& text);

}  // namespace herdfield
