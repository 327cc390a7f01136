#include "fpg/driver.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "fpg/problems.hpp"

namespace fpg {

namespace fs = std::filesystem;

namespace {

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void check_written(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("error writing '" + path.string() + "'");
}

}  // namespace

AdaptiveConfig make_adaptive_config(const RunConfig& config) {
  AdaptiveConfig a;
  a.problem = problem_registry(config.problem, config.eps);
  a.theta = config.theta;
  a.marking_fraction = config.marking_fraction;
  a.max_dof = config.max_dof;
  a.h_min = config.h_min;
  a.rtol_linear = config.rtol_linear;
  a.max_outer = config.max_outer;
  a.uniform_refinement = config.refinement == "uniform";
  a.record_timing = config.timing;
  a.validate();
  return a;
}

std::vector<double> initial_guess(const Mesh& mesh, const RunConfig& config) {
  std::vector<double> u(mesh.vertex_count(), 0.0);
  const bool hat = config.initial == "hat" || (config.initial == "auto" && config.problem == "paper-ex2");
  if (!hat) return u;
  std::size_t best = mesh.vertex_count();
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    if (mesh.boundary_vertex(i)) continue;
    const double d = std::hypot(mesh.vertex(i).x - 0.5, mesh.vertex(i).y - 0.5);
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  if (best < u.size()) u[best] = 1.0;
  return u;
}

void write_records_csv(std::ostream& out, std::span<const AdaptiveRecord> records) {
  out << "step,dof,eta_fem,eta_fp,osc,total,action,cg_iters,wall_ms\n";
  for (const auto& r : records) {
    out << r.step << ',' << r.dof << ',' << sci(r.eta_fem) << ',' << sci(r.eta_fp) << ','
        << sci(r.osc) << ',' << sci(r.total) << ',' << to_string(r.action) << ',' << r.cg_iters
        << ',' << sci(r.wall_ms) << '\n';
  }
}

std::vector<AdaptiveRecord> refinement_records(std::span<const AdaptiveRecord> records) {
  std::vector<AdaptiveRecord> out;
  for (const auto& r : records) {
    if (r.action == Action::Refine) out.push_back(r);
  }
  return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("loglog_slope: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += std::log10(x[i]);
    sy += std::log10(y[i]);
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log10(x[i]) - mx;
    sxy += dx * (std::log10(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

double decay_slope(std::span<const AdaptiveRecord> records, std::size_t count) {
  const auto refs = refinement_records(records);
  const std::size_t first = refs.size() > count ? refs.size() - count : 0;
  std::vector<double> dof, total;
  for (std::size_t i = first; i < refs.size(); ++i) {
    dof.push_back(static_cast<double>(refs[i].dof));
    total.push_back(refs[i].total);
  }
  return loglog_slope(dof, total);
}

std::string eps_label(double eps) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.0e", eps);
  // Keep full precision when the short form would lose information.
  if (std::strtod(buf, nullptr) != eps) std::snprintf(buf, sizeof(buf), "%.17g", eps);
  return buf;
}

SolveOutcome cmd_solve(const RunConfig& config, const fs::path& directory) {
  const AdaptiveConfig adaptive = make_adaptive_config(config);
  const Mesh initial = Mesh::build_initial(config.mesh);
  SolveOutcome outcome;
  outcome.directory = directory;
  outcome.result = run(adaptive, initial, initial_guess(initial, config));

  fs::create_directories(directory);
  {
    const auto path = directory / "records.csv";
    auto out = open_output(path);
    write_records_csv(out, outcome.result.records);
    check_written(out, path);
  }
  {
    const auto path = directory / "mesh.txt";
    auto out = open_output(path);
    write_mesh(out, outcome.result.mesh);
    check_written(out, path);
  }
  {
    const auto path = directory / "solution.txt";
    auto out = open_output(path);
    write_solution(out, outcome.result.u);
    check_written(out, path);
  }
  {
    const auto path = directory / "solution.vtk";
    auto out = open_output(path);
    write_vtk(out, outcome.result.mesh, outcome.result.u);
    check_written(out, path);
  }
  return outcome;
}

std::vector<SweepRow> cmd_sweep(const RunConfig& config) {
  if (config.eps_list.empty()) throw std::invalid_argument("sweep: empty eps list");
  const fs::path root(config.out);
  fs::create_directories(root);
  std::vector<SweepRow> rows;
  for (double eps : config.eps_list) {
    SweepRow row;
    row.eps = eps;
    RunConfig single = config;
    single.eps = eps;
    try {
      const auto outcome = cmd_solve(single, root / ("eps_" + eps_label(eps)));
      const auto& records = outcome.result.records;
      row.records = records;
      row.slope = decay_slope(records);
      row.final_total = records.empty() ? 0.0 : records.back().total;
      row.final_dof = records.empty() ? 0 : records.back().dof;
      row.ok = outcome.result.converged;
      if (!row.ok) row.error = "stopped by " + to_string(outcome.result.reason);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  const auto path = root / "summary.csv";
  auto out = open_output(path);
  out << "eps,slope,final_total,final_dof\n";
  for (const auto& r : rows) {
    out << sci(r.eps) << ',' << sci(r.slope) << ',' << sci(r.final_total) << ',' << r.final_dof << '\n';
  }
  check_written(out, path);
  return rows;
}

std::vector<ConvergenceRow> cmd_convergence(const RunConfig& config) {
  const AdaptiveConfig adaptive = make_adaptive_config(config);
  const ProblemSpec& problem = adaptive.problem;
  if (!problem.has_exact_solution()) {
    throw std::invalid_argument("convergence: problem '" + problem.name + "' has no exact solution");
  }
  const Mesh initial = Mesh::build_initial(config.mesh);
  std::vector<ConvergenceRow> rows;
  const auto observer = [&](const Mesh& mesh, std::span<const double> u_next, const AdaptiveRecord& rec) {
    if (rec.action != Action::Refine) return;
    ConvergenceRow row;
    row.dof = rec.dof;
    row.energy_error = energy_error(mesh, problem.eps, u_next, problem.exact, problem.exact_gradient);
    row.eta_fem = rec.eta_fem;
    row.eta_fp = rec.eta_fp;
    row.effectivity = row.energy_error > 0.0 ? rec.total / row.energy_error
                                             : std::numeric_limits<double>::infinity();
    // Bisecting only boundary edges adds no free vertex; keep the finer mesh.
    if (!rows.empty() && rows.back().dof == row.dof) {
      rows.back() = row;
    } else {
      rows.push_back(row);
    }
  };
  const auto result = run(adaptive, initial, initial_guess(initial, config), observer);
  if (!result.converged) {
    throw std::runtime_error("convergence: run stopped by " + to_string(result.reason));
  }

  const fs::path root(config.out);
  fs::create_directories(root);
  const auto path = root / "convergence.csv";
  auto out = open_output(path);
  out << "dof,energy_error,eta_fem,eta_fp,effectivity\n";
  for (const auto& r : rows) {
    out << r.dof << ',' << sci(r.energy_error) << ',' << sci(r.eta_fem) << ',' << sci(r.eta_fp)
        << ',' << sci(r.effectivity) << '\n';
  }
  check_written(out, path);
  return rows;
}

}  // namespace fpg
