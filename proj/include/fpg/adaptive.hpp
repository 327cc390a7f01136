#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fpg/assembly.hpp"
#include "fpg/estimator.hpp"
#include "fpg/mesh.hpp"
#include "fpg/problem.hpp"

namespace fpg {

enum class Action { Iterate, Refine, Stop };

std::string to_string(Action action);

struct AdaptiveConfig {
  ProblemSpec problem;
  double theta = 0.5;
  /// Doerfler bulk fraction in (0, 1).
  double marking_fraction = 0.5;
  /// Stop once a mesh with more free vertices than this reaches the refinement condition.
  std::size_t max_dof = 20000;
  /// Optional: stop once the mesh size drops below h_min (0 disables).
  double h_min = 0.0;
  double rtol_linear = 1e-10;
  std::size_t max_outer = 10000;
  /// Refine every element instead of a Doerfler set.
  bool uniform_refinement = false;
  /// Stop when eta_fem + eta_fp falls below this.
  double bound_floor = 1e-12;
  /// Fill AdaptiveRecord::wall_ms. Off by default so record logs are reproducible.
  bool record_timing = false;

  /// Throws std::invalid_argument for theta <= 0, marking_fraction outside (0, 1), etc.
  void validate() const;
};

struct AdaptiveRecord {
  std::size_t step = 0;
  std::size_t dof = 0;
  double eta_fem = 0.0;
  double eta_fp = 0.0;
  double osc = 0.0;
  double total = 0.0;
  Action action = Action::Iterate;
  std::size_t cg_iters = 0;
  double wall_ms = 0.0;
};

enum class StopReason { DofBudget, MeshSize, BoundFloor, MaxOuter };

std::string to_string(StopReason reason);

struct StepResult {
  std::vector<double> u_next;
  std::size_t cg_iterations = 0;
};

/// Solves B u_next = B u_prev - t eps A u_prev + t b(u_prev) on the free vertices.
/// u_prev and u_next are nodal vectors; u_next is zero on the boundary.
StepResult fixed_point_step(const Mesh& mesh, const ProblemSpec& problem,
                            const SystemMatrices& matrices, std::span<const double> u_prev,
                            double step, double rtol_linear = 1e-10);

/// Refine iff eta_fp < theta * eta_fem.
Action decide_action(double eta_fp, double eta_fem, double theta);

/// Smallest set whose squared indicators sum to at least fraction * total: greedy on
/// descending values, ties to the lower index. Returned in selection order.
/// Throws std::invalid_argument for an empty input.
std::vector<int> dorfler_mark(std::span<const double> eta_T_squared, double fraction);

struct AdaptiveResult {
  std::vector<AdaptiveRecord> records;
  Mesh mesh;
  std::vector<double> u;
  StopReason reason = StopReason::MaxOuter;
  bool converged = false;
};

/// Called after every step with the mesh the step ran on, the new iterate and its record.
using StepObserver =
    std::function<void(const Mesh&, std::span<const double> u_next, const AdaptiveRecord&)>;

/// The iterate/refine loop. u0 must be a nodal vector on initial_mesh, zero on the boundary.
AdaptiveResult run(const AdaptiveConfig& config, const Mesh& initial_mesh,
                   std::vector<double> u0, const StepObserver& observer = {});

}  // namespace fpg
