// fpg: adaptive fixed-point Galerkin solver for -eps Laplace(u) = f(x, u) on the unit square.

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "fpg/driver.hpp"
#include "fpg/problems.hpp"

namespace {

struct Overrides {
  std::string config_file;
  std::optional<double> eps;
  std::optional<double> theta;
  std::optional<std::size_t> max_dof;
  std::optional<std::string> problem;
  std::optional<std::string> out;
  std::optional<std::string> mesh;
  std::optional<std::string> eps_list;
  std::optional<std::string> refinement;
  std::optional<double> marking;
  bool timing = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_file, "key = value configuration file");
  cmd->add_option("--eps", o.eps, "singular perturbation parameter");
  cmd->add_option("--theta", o.theta, "iterate/refine interplay parameter");
  cmd->add_option("--max-dof", o.max_dof, "stop once a mesh exceeds this many free vertices");
  cmd->add_option("--problem", o.problem, "problem name");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--mesh", o.mesh, "initial mesh: paper4 or uniform:N");
  cmd->add_option("--marking", o.marking, "Doerfler marking fraction");
  cmd->add_option("--refinement", o.refinement, "adaptive or uniform");
  cmd->add_flag("--timing", o.timing, "record wall-clock time per step");
}

fpg::RunConfig resolve(const Overrides& o) {
  fpg::RunConfig c;
  if (!o.config_file.empty()) c = fpg::load_config(o.config_file);
  if (o.eps) c.eps = *o.eps;
  if (o.theta) c.theta = *o.theta;
  if (o.max_dof) c.max_dof = *o.max_dof;
  if (o.problem) c.problem = *o.problem;
  if (o.out) c.out = *o.out;
  if (o.mesh) fpg::set_config_value(c, "mesh", *o.mesh);
  if (o.eps_list) fpg::set_config_value(c, "eps_list", *o.eps_list);
  if (o.refinement) fpg::set_config_value(c, "refinement", *o.refinement);
  if (o.marking) c.marking_fraction = *o.marking;
  if (o.timing) c.timing = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fully adaptive fixed-point Galerkin solver"};
  app.require_subcommand(1);

  Overrides solve_opts, sweep_opts, conv_opts;
  auto* solve = app.add_subcommand("solve", "single adaptive run");
  add_common(solve, solve_opts);
  auto* sweep = app.add_subcommand("sweep", "one run per eps, with fitted decay slopes");
  add_common(sweep, sweep_opts);
  sweep->add_option("--eps-list", sweep_opts.eps_list, "comma separated eps values");
  auto* conv = app.add_subcommand("convergence", "error vs dof against an exact solution");
  add_common(conv, conv_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      const auto config = resolve(solve_opts);
      const auto outcome = fpg::cmd_solve(config, config.out);
      const auto& recs = outcome.result.records;
      std::cout << "problem " << config.problem << ", eps " << config.eps << ": " << recs.size()
                << " steps, final dof " << (recs.empty() ? 0 : recs.back().dof) << ", total bound "
                << (recs.empty() ? 0.0 : recs.back().total) << " (" << fpg::to_string(outcome.result.reason)
                << ")\n";
      return outcome.result.converged ? 0 : 2;
    }
    if (sweep->parsed()) {
      const auto config = resolve(sweep_opts);
      const auto rows = fpg::cmd_sweep(config);
      bool all_ok = true;
      for (const auto& r : rows) {
        std::cout << "eps " << r.eps << ": slope " << r.slope << ", final total " << r.final_total
                  << ", final dof " << r.final_dof;
        if (!r.ok) std::cout << "  FAILED: " << r.error;
        std::cout << '\n';
        all_ok = all_ok && r.ok;
      }
      return all_ok ? 0 : 2;
    }
    if (conv->parsed()) {
      auto config = resolve(conv_opts);
      if (!conv_opts.problem && conv_opts.config_file.empty()) config.problem = "linear-manufactured";
      const auto rows = fpg::cmd_convergence(config);
      for (const auto& r : rows) {
        std::cout << "dof " << r.dof << "  error " << r.energy_error << "  effectivity " << r.effectivity
                  << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "fpg: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
