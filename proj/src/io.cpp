#include "herdfield/io.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "herdfield/error.hpp"

namespace herdfield {

using json = nlohmann::ordered_json;

std::string format_real(double value) {
  std::string text;
  for (int digits = 1; digits <= 17; ++digits) {
    std::ostringstream out;
    out << std::setprecision(digits) << value;
    text = out.str();
    if (std::strtod(text.c_str(), nullptr) == value) break;
  }
  return text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::io, "read failed for '" + path.string() + "'");
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path.string() + "'");
}

namespace {

json params_json(const ModelParams& p) {
  return json{{"p1", p.p1}, {"p2", p.p2}, {"alpha", p.alpha}, {"delta", p.delta}};
}

double to_real(const std::string& field, const std::string& column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::io, "column '" + column + "': not a number: '" + field + "'");
  }
}

std::size_t to_count(const std::string& field, const std::string& column) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw Error(ErrorKind::io, "column '" + column + "': not an integer: '" + field + "'");
  }
}

void expect_header(const CsvTable& table, const std::vector<std::string>& header) {
  if (table.header.size() < header.size() ||
      !std::equal(header.begin(), header.end(), table.header.begin()))
    throw Error(ErrorKind::io, "unexpected CSV header");
  for (const auto& row : table.rows)
    if (row.size() != table.header.size()) throw Error(ErrorKind::io, "ragged CSV row");
}

std::string csv_row(std::initializer_list<std::string> fields) {
  std::string line;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) line += ',';
    line += f;
    first = false;
  }
  line += '\n';
  return line;
}

}  // namespace

std::string equilibrium_to_json(const ModelParams& params, Selection selection,
                                const EquilibriumTable& theta, const ValueTable& values) {
  if (!(theta.grid == values.grid))
    throw std::invalid_argument("equilibrium and value tables use different grids");
  json nodes = json::array();
  for (std::size_t i = 0; i < theta.grid.size(); ++i) {
    const NodeEquilibrium& node = theta.nodes[i];
    nodes.push_back(json{{"z1", theta.grid.node(i)},
                         {"g_minus", node.gamma.g_minus},
                         {"g_plus", node.gamma.g_plus},
                         {"V_minus", values.low[i]},
                         {"V_plus", values.high[i]},
                         {"multiplicity", node.multiple},
                         {"mixing", node.mixing}});
  }
  json doc{{"params", params_json(params)},
           {"selection", to_string(selection)},
           {"grid", {{"n_points", theta.grid.size()}}},
           {"nodes", std::move(nodes)}};
  return doc.dump(1) + "\n";
}

EquilibriumDocument equilibrium_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    const json& p = doc.at("params");
    ModelParams params{p.at("p1").get<double>(), p.at("p2").get<double>(),
                       p.at("alpha").get<double>(), p.at("delta").get<double>()};
    params = validate_params(params);
    const Grid grid(doc.at("grid").at("n_points").get<std::size_t>());
    const json& nodes = doc.at("nodes");
    if (nodes.size() != grid.size()) throw Error(ErrorKind::io, "node count does not match grid");

    EquilibriumDocument out{params, parse_selection(doc.at("selection").get<std::string>()),
                            EquilibriumTable(grid), ValueTable(grid)};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const json& n = nodes[i];
      if (n.at("z1").get<double>() != grid.node(i))
        throw Error(ErrorKind::io, "node " + std::to_string(i) + " is off the grid");
      NodeEquilibrium& eq = out.theta.nodes[i];
      eq.gamma = {n.at("g_minus").get<double>(), n.at("g_plus").get<double>()};
      eq.multiple = n.at("multiplicity").get<bool>();
      eq.mixing = n.at("mixing").get<bool>();
      out.values.low[i] = n.at("V_minus").get<double>();
      out.values.high[i] = n.at("V_plus").get<double>();
    }
    return out;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed equilibrium document: ") + e.what());
  }
}

std::string solve_report_to_json(const SolveReport& r) {
  json doc{{"iterations", r.iterations},
           {"final_sup_change", r.final_sup_change},
           {"bellman_residual", r.bellman_residual},
           {"nodes_with_multiplicity", r.nodes_with_multiplicity},
           {"nodes_with_mixing", r.nodes_with_mixing},
           {"converged", r.converged}};
  return doc.dump(1) + "\n";
}

std::string herding_report_to_json(const HerdingReport& r) {
  json doc{{"herded", r.herded},
           {"onset", r.onset},
           {"herd_action", r.herd_action ? json(sign(*r.herd_action)) : json(nullptr)},
           {"limit_z1", r.limit.z1},
           {"limit_mu1", r.limit.mu1},
           {"limit_residual", r.limit.residual},
           {"limit_converged", r.limit.converged}};
  return doc.dump(1) + "\n";
}

std::string threshold_to_json(const ThresholdResult& r) {
  json doc{{"predicate", r.predicate},
           {"alpha_star", r.alpha_star},
           {"bracket_lo", r.bracket_lo},
           {"bracket_hi", r.bracket_hi},
           {"holds_at_lo", r.holds_at_lo},
           {"holds_at_hi", r.holds_at_hi}};
  return doc.dump(1) + "\n";
}

ThresholdResult threshold_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    ThresholdResult r;
    r.predicate = doc.at("predicate").get<std::string>();
    r.alpha_star = doc.at("alpha_star").get<double>();
    r.bracket_lo = doc.at("bracket_lo").get<double>();
    r.bracket_hi = doc.at("bracket_hi").get<double>();
    r.holds_at_lo = doc.value("holds_at_lo", false);
    r.holds_at_hi = doc.value("holds_at_hi", false);
    return r;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed threshold document: ") + e.what());
  }
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream cells(line);
    while (std::getline(cells, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.emplace_back();
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw Error(ErrorKind::io, "empty CSV");
  return table;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = "t,z1,g_minus,g_plus,mu1\n";
  for (const TrajectoryStep& s : traj)
    out += csv_row({std::to_string(s.t), format_real(s.z.z1), format_real(s.gamma.g_minus),
                    format_real(s.gamma.g_plus), format_real(s.mu.mu1)});
  return out;
}

Trajectory trajectory_from_csv(const std::string& text) {
  const CsvTable table = parse_csv(text);
  expect_header(table, {"t", "z1", "g_minus", "g_plus", "mu1"});
  Trajectory traj;
  for (const auto& row : table.rows) {
    TrajectoryStep s;
    s.t = to_count(row[0], "t");
    s.z.z1 = to_real(row[1], "z1");
    s.gamma.g_minus = to_real(row[2], "g_minus");
    s.gamma.g_plus = to_real(row[3], "g_plus");
    s.mu.mu1 = to_real(row[4], "mu1");
    traj.push_back(s);
  }
  return traj;
}

std::string empirical_to_csv(const Trajectory& traj, const EmpiricalTrajectory& empirical) {
  if (traj.size() != empirical.z1_hat.size())
    throw std::invalid_argument("trajectory and empirical run differ in length");
  std::string out = "t,z1,g_minus,g_plus,mu1,N,seed,z1_hat,mu1_hat\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const TrajectoryStep& s = traj[k];
    out += csv_row({std::to_string(s.t), format_real(s.z.z1), format_real(s.gamma.g_minus),
                    format_real(s.gamma.g_plus), format_real(s.mu.mu1),
                    std::to_string(empirical.population), std::to_string(empirical.seed),
                    format_real(empirical.z1_hat[k]), format_real(empirical.mu1_hat[k])});
  }
  return out;
}

EmpiricalTrajectory empirical_from_csv(const std::string& text) {
  const CsvTable table = parse_csv(text);
  expect_header(table, {"t", "z1", "g_minus", "g_plus", "mu1", "N", "seed", "z1_hat", "mu1_hat"});
  EmpiricalTrajectory out;
  for (const auto& row : table.rows) {
    out.population = to_count(row[5], "N");
    out.seed = to_count(row[6], "seed");
    out.z1_hat.push_back(to_real(row[7], "z1_hat"));
    out.mu1_hat.push_back(to_real(row[8], "mu1_hat"));
  }
  return out;
}

namespace {

std::string probe_outcome(const ProbeOutcome& o) {
  if (!o.herded) return "none";
  if (!o.herd_action) return "mixed";
  return std::to_string(sign(*o.herd_action));
}

}  // namespace

std::string phase_to_csv(std::span<const PhasePoint> points) {
  std::vector<double> probes;
  for (const PhasePoint& p : points)
    if (!p.probes.empty()) {
      for (const ProbeOutcome& o : p.probes) probes.push_back(o.z0);
      break;
    }
  std::string out = "alpha,classification";
  for (double z0 : probes) out += ",z0=" + format_real(z0);
  out += '\n';
  for (const PhasePoint& p : points) {
    out += format_real(p.alpha) + "," + to_string(p.classification);
    for (std::size_t k = 0; k < probes.size(); ++k)
      out += "," + (k < p.probes.size() ? probe_outcome(p.probes[k]) : std::string("none"));
    out += '\n';
  }
  return out;
}

std::vector<PhaseRow> phase_from_csv(const std::string& text) {
  const CsvTable table = parse_csv(text);
  expect_header(table, {"alpha", "classification"});
  std::vector<PhaseRow> rows;
  for (const auto& row : table.rows) {
    PhaseRow r;
    r.alpha = to_real(row[0], "alpha");
    try {
      r.classification = parse_phase_class(row[1]);
    } catch (const std::exception& e) {
      throw Error(ErrorKind::io, e.what());
    }
    r.outcomes.assign(row.begin() + 2, row.end());
    rows.push_back(std::move(r));
  }
  return rows;
}

FigureBundle make_figures(const EquilibriumTable& theta, const ValueTable& values,
                          const ModelParams& params) {
  if (!(theta.grid == values.grid))
    throw std::invalid_argument("equilibrium and value tables use different grids");
  FigureBundle b;
  for (std::size_t i = 0; i < theta.grid.size(); ++i) {
    const TypeMeanField z{theta.grid.node(i)};
    const Prescription& gamma = theta.at(i);
    b.z1.push_back(z.z1);
    b.phi.push_back(propagate(z, gamma, params).z1);
    b.g.push_back(action_mean_field(z, gamma).mu1);
    b.value_low.push_back(values.low[i]);
    b.value_high.push_back(values.high[i]);
    b.theta_low.push_back(gamma.g_minus);
    b.theta_high.push_back(gamma.g_plus);
  }
  return b;
}

void write_figures(const FigureBundle& bundle, const std::filesystem::path& dir) {
  const std::vector<const std::vector<double>*> curves{&bundle.phi,       &bundle.g,
                                                       &bundle.value_low, &bundle.value_high,
                                                       &bundle.theta_low, &bundle.theta_high};
  for (std::size_t c = 0; c < curves.size(); ++c) {
    std::string out = "z1,value\n";
    for (std::size_t i = 0; i < bundle.z1.size(); ++i)
      out += csv_row({format_real(bundle.z1[i]), format_real((*curves[c])[i])});
    write_text(dir / kFigureFiles[c], out);
  }
}

FigureBundle emit_figures(const EquilibriumTable& theta, const ValueTable& values,
                          const ModelParams& params, const std::filesystem::path& dir) {
  FigureBundle bundle = make_figures(theta, values, params);
  write_figures(bundle, dir);
  return bundle;
}

std::pair<std::vector<double>, std::vector<double>> figure_from_csv(const std::string& text) {
  const CsvTable table = parse_csv(text);
  expect_header(table, {"z1", "value"});
  std::pair<std::vector<double>, std::vector<double>> out;
  for (const auto& row : table.rows) {
    out.first.push_back(to_real(row[0], "z1"));
    out.second.push_back(to_real(row[1], "value"));
  }
  return out;
}

}  // namespace herdfield
