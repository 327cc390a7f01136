#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fpg/adaptive.hpp"
#include "fpg/run_config.hpp"

// Run orchestration behind the fpg command line: single solves, eps sweeps and the
// manufactured-solution convergence study, plus their CSV outputs.

namespace fpg {

AdaptiveConfig make_adaptive_config(const RunConfig& config);

/// Initial iterate per config.initial ("auto" = centre hat for paper-ex2, zero otherwise).
/// The hat is 1 at the vertex closest to (1/2, 1/2) and 0 elsewhere.
std::vector<double> initial_guess(const Mesh& mesh, const RunConfig& config);

/// records.csv: step,dof,eta_fem,eta_fp,osc,total,action,cg_iters,wall_ms
void write_records_csv(std::ostream& out, std::span<const AdaptiveRecord> records);

/// The Refine records, in order.
std::vector<AdaptiveRecord> refinement_records(std::span<const AdaptiveRecord> records);

/// Least-squares slope of log10(y) against log10(x). NaN for fewer than two points.
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Slope of total vs dof over the last `count` Refine records.
double decay_slope(std::span<const AdaptiveRecord> records, std::size_t count = 5);

struct SolveOutcome {
  AdaptiveResult result;
  std::filesystem::path directory;
};

/// Runs one adaptive solve and writes records.csv, mesh.txt, solution.txt and solution.vtk
/// into directory (created if needed).
SolveOutcome cmd_solve(const RunConfig& config, const std::filesystem::path& directory);

struct SweepRow {
  double eps = 0.0;
  double slope = 0.0;
  double final_total = 0.0;
  std::size_t final_dof = 0;
  bool ok = false;
  std::string error;
  std::vector<AdaptiveRecord> records;
};

/// One solve per eps in config.eps_list, each into <out>/eps_<value>/, plus
/// <out>/summary.csv with eps,slope,final_total,final_dof. Failed runs are reported in
/// their row and do not abort the sweep.
std::vector<SweepRow> cmd_sweep(const RunConfig& config);

struct ConvergenceRow {
  std::size_t dof = 0;
  double energy_error = 0.0;
  double eta_fem = 0.0;
  double eta_fp = 0.0;
  double effectivity = 0.0;
};

/// Error-vs-dof table at the Refine records, one row per dof count (the last mesh with
/// that count), written to <out>/convergence.csv as
/// dof,energy_error,eta_fem,eta_fp,effectivity. Throws std::invalid_argument if the
/// problem has no exact solution.
std::vector<ConvergenceRow> cmd_convergence(const RunConfig& config);

/// Eps formatted for directory names, e.g. "1e-08".
std::string eps_label(double eps);

}  // namespace fpg
