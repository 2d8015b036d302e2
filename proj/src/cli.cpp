#include "herdfield/cli.hpp"

#include <filesystem>

#include "herdfield/io.hpp"

namespace herdfield {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return kExitConfig;
    case ErrorKind::convergence: return kExitNonConvergence;
    case ErrorKind::io: return kExitIo;
    case ErrorKind::solver: return kExitSolverFault;
  }
  return kExitUnexpected;
}

namespace {

fs::path prepare_out(const RunConfig& config) {
  const fs::path out(config.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + out.string() + "': " + ec.message());
  return out;
}

void summarize(std::ostream& log, const SolveReport& r) {
  log << "iterations " << r.iterations << ", sup change " << format_real(r.final_sup_change)
      << ", bellman residual " << format_real(r.bellman_residual) << ", multiplicity nodes "
      << r.nodes_with_multiplicity << ", mixing nodes " << r.nodes_with_mixing
      << (r.converged ? "" : " (NOT converged)") << "\n";
}

struct Solved {
  ModelParams params;
  EquilibriumTable theta;
  ValueTable values;
  bool converged = true;
};

Solved solve_or_load(const RunConfig& config, std::ostream& log) {
  if (!config.equilibrium.empty()) {
    EquilibriumDocument doc = equilibrium_from_json(read_text(config.equilibrium));
    return {doc.params, std::move(doc.theta), std::move(doc.values), true};
  }
  const ModelParams params = validate_params(config.params());
  Solution s = solve_mfe(params, Grid(config.grid), config.solver_options());
  summarize(log, s.report);
  return {params, std::move(s.theta), std::move(s.values), s.report.converged};
}

int run_solve(const RunConfig& config, std::ostream& log) {
  const fs::path out = prepare_out(config);
  const ModelParams params = validate_params(config.params());
  const SolverOptions options = config.solver_options();
  const Solution s = solve_mfe(params, Grid(config.grid), options);
  write_text(out / "equilibrium.json", equilibrium_to_json(params, options.selection, s.theta, s.values));
  write_text(out / "solve_report.json", solve_report_to_json(s.report));
  summarize(log, s.report);
  if (!s.report.converged) {
    log << "error: value iteration did not reach tol " << format_real(config.tol) << " in "
        << config.max_iter << " iterations\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

int run_simulate(const RunConfig& config, std::ostream& log) {
  const fs::path out = prepare_out(config);
  const Solved solved = solve_or_load(config, log);
  if (!solved.converged) {
    log << "error: equilibrium solve did not converge\n";
    return kExitNonConvergence;
  }
  const Trajectory traj = simulate({config.z0}, solved.theta, solved.params, config.horizon);
  const HerdingReport report = detect_herding(traj, config.herding_tol);
  write_text(out / "trajectory.csv", trajectory_to_csv(traj));
  write_text(out / "herding_report.json", herding_report_to_json(report));
  if (config.population > 0) {
    const EmpiricalTrajectory emp = finite_n_simulate(config.population, {config.z0}, solved.theta,
                                                      solved.params, config.horizon, config.seed);
    write_text(out / "empirical.csv", empirical_to_csv(traj, emp));
  }
  log << "herded " << (report.herded ? "yes" : "no");
  if (report.herded) {
    log << " from t = " << report.onset;
    if (report.herd_action) log << " on action " << sign(*report.herd_action);
  }
  log << "; limit z1 " << format_real(report.limit.z1) << ", mu1 " << format_real(report.limit.mu1)
      << (report.limit.converged ? "" : " (not converged)") << "\n";
  return kExitOk;
}

int run_sweep(const RunConfig& config, std::ostream& log) {
  const fs::path out = prepare_out(config);
  const std::vector<double> alphas = alpha_grid(config.sweep_start, config.sweep_stop, config.sweep_step);
  const std::vector<PhasePoint> points = alpha_sweep(alphas, config.sweep_settings());
  write_text(out / "phase.csv", phase_to_csv(points));
  bool unclassified = false;
  for (const PhasePoint& p : points) {
    log << format_real(p.alpha) << " " << to_string(p.classification);
    if (!p.error.empty()) log << " (" << p.error << ")";
    log << "\n";
    unclassified |= p.classification == PhaseClass::unclassified;
  }
  for (double a : monotonicity_anomalies(points))
    log << "warning: classification regresses at alpha " << format_real(a) << "\n";
  return unclassified ? kExitNonConvergence : kExitOk;
}

int run_threshold(const RunConfig& config, std::ostream& log) {
  const fs::path out = prepare_out(config);
  const ThresholdResult r = find_threshold(predicate_for(parse_phase_class(config.predicate)),
                                           config.threshold_lo, config.threshold_hi,
                                           config.threshold_tol, config.sweep_settings());
  write_text(out / "threshold.json", threshold_to_json(r));
  log << r.predicate << ": alpha* = " << format_real(r.alpha_star) << " in ["
      << format_real(r.bracket_lo) << ", " << format_real(r.bracket_hi) << "]\n";
  return kExitOk;
}

int run_figures(const RunConfig& config, std::ostream& log) {
  const EquilibriumDocument doc = equilibrium_from_json(read_text(config.equilibrium));
  const fs::path out = prepare_out(config);
  emit_figures(doc.theta, doc.values, doc.params, out);
  log << "wrote " << kFigureFiles.size() << " figure files to " << out.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(Command command, const RunConfig& config, std::ostream& log) {
  try {
    switch (command) {
      case Command::solve: return run_solve(config, log);
      case Command::simulate: return run_simulate(config, log);
      case Command::sweep: return run_sweep(config, log);
      case Command::threshold: return run_threshold(config, log);
      case Command::figures: return run_figures(config, log);
    }
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const InvalidParams& e) {
    log << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitUnexpected;
  }
  return kExitUnexpected;
}

}  // namespace herdfield
