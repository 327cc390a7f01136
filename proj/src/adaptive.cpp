#include "fpg/adaptive.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <stdexcept>

#include "fpg/contraction.hpp"
#include "fpg/errors.hpp"

namespace fpg {

std::string to_string(Action action) {
  switch (action) {
    case Action::Iterate: return "iterate";
    case Action::Refine: return "refine";
    case Action::Stop: return "stop";
  }
  return "unknown";
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::DofBudget: return "dof-budget";
    case StopReason::MeshSize: return "mesh-size";
    case StopReason::BoundFloor: return "bound-floor";
    case StopReason::MaxOuter: return "max-outer";
  }
  return "unknown";
}

void AdaptiveConfig::validate() const {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be positive");
  if (!(marking_fraction > 0.0 && marking_fraction < 1.0)) {
    throw std::invalid_argument("marking_fraction must lie in (0, 1)");
  }
  if (max_dof == 0) throw std::invalid_argument("max_dof must be positive");
  if (!(rtol_linear > 0.0 && rtol_linear < 1.0)) {
    throw std::invalid_argument("rtol_linear must lie in (0, 1)");
  }
  if (!(h_min >= 0.0)) throw std::invalid_argument("h_min must be non-negative");
  if (!(problem.eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!problem.f) throw std::invalid_argument("problem has no source function");
}

StepResult fixed_point_step(const Mesh& mesh, const ProblemSpec& problem,
                            const SystemMatrices& matrices, std::span<const double> u_prev,
                            double step, double rtol_linear) {
  if (u_prev.size() != mesh.vertex_count()) {
    throw DimensionError("fixed_point_step: iterate does not match the mesh");
  }
  if (matrices.B.size() != mesh.dof_count()) {
    throw DimensionError("fixed_point_step: matrices were assembled on another mesh");
  }
  const auto d_prev = to_dofs(mesh, u_prev);
  const auto Bu = matvec(matrices.B, d_prev);
  const auto Au = matvec(matrices.A, d_prev);
  const auto b = load_vector(mesh, problem, u_prev);
  std::vector<double> rhs(d_prev.size());
  const double diffusion = step * problem.eps;
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = Bu[i] - diffusion * Au[i] + step * b[i];

  StepResult out;
  if (rhs.empty()) {
    out.u_next.assign(mesh.vertex_count(), 0.0);
    return out;
  }
  const CgResult solve = cg_solve(matrices.B, rhs, rtol_linear, 0, Preconditioner::Jacobi, d_prev);
  out.u_next = from_dofs(mesh, solve.x);
  out.cg_iterations = solve.iterations;
  return out;
}

Action decide_action(double eta_fp, double eta_fem, double theta) {
  return eta_fp < theta * eta_fem ? Action::Refine : Action::Iterate;
}

std::vector<int> dorfler_mark(std::span<const double> eta_T_squared, double fraction) {
  if (eta_T_squared.empty()) throw std::invalid_argument("dorfler_mark: no elements");
  for (double v : eta_T_squared) {
    if (!(v >= 0.0)) throw std::invalid_argument("dorfler_mark: indicators must be non-negative");
  }
  std::vector<int> order(eta_T_squared.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return eta_T_squared[a] > eta_T_squared[b]; });
  double total = 0.0;
  for (double v : eta_T_squared) total += v;
  const double target = fraction * total;

  std::vector<int> marked;
  double sum = 0.0;
  for (int t : order) {
    if (sum >= target || eta_T_squared[t] == 0.0) break;
    marked.push_back(t);
    sum += eta_T_squared[t];
  }
  return marked;
}

AdaptiveResult run(const AdaptiveConfig& config, const Mesh& initial_mesh, std::vector<double> u0,
                   const StepObserver& observer) {
  config.validate();
  const ProblemSpec& problem = config.problem;
  if (u0.size() != initial_mesh.vertex_count()) {
    throw DimensionError("run: initial guess does not match the initial mesh");
  }
  for (std::size_t i = 0; i < u0.size(); ++i) {
    if (initial_mesh.boundary_vertex(i) && u0[i] != 0.0) {
      throw std::invalid_argument("run: initial guess must vanish on the boundary");
    }
  }
  const ContractionParams params = make_params(problem.c(), problem.L());

  AdaptiveResult result;
  result.mesh = initial_mesh;
  result.u = std::move(u0);
  SystemMatrices matrices = SystemMatrices::assemble(result.mesh, problem.eps);

  using clock = std::chrono::steady_clock;
  for (std::size_t n = 0;; ++n) {
    if (n >= config.max_outer) {
      result.reason = StopReason::MaxOuter;
      result.converged = false;
      break;
    }
    const auto started = clock::now();
    const Mesh& mesh = result.mesh;

    StepResult step = fixed_point_step(mesh, problem, matrices, result.u, params.t, config.rtol_linear);
    const auto f_h = l2_project_source(mesh, matrices.M_full, problem, result.u);
    FemEstimate fem = fem_estimator(mesh, problem, step.u_next, result.u, f_h, params.t);
    const double eta_fp =
        fp_indicator(matrices.B, to_dofs(mesh, step.u_next), to_dofs(mesh, result.u));

    AdaptiveRecord rec;
    rec.step = n;
    rec.dof = mesh.dof_count();
    rec.eta_fem = fem.eta_fem;
    rec.eta_fp = eta_fp;
    rec.osc = fem.osc;
    rec.total = total_bound(fem.eta_fem, eta_fp);
    rec.cg_iters = step.cg_iterations;
    rec.action = decide_action(eta_fp, fem.eta_fem, config.theta);

    bool stop = false;
    if (rec.total < config.bound_floor) {
      stop = true;
      result.reason = StopReason::BoundFloor;
    } else if (rec.action == Action::Refine && mesh.dof_count() > config.max_dof) {
      stop = true;
      result.reason = StopReason::DofBudget;
    } else if (rec.action == Action::Refine && config.h_min > 0.0 && mesh.mesh_size() < config.h_min) {
      stop = true;
      result.reason = StopReason::MeshSize;
    }
    if (stop) rec.action = Action::Stop;
    if (config.record_timing) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - started).count();
    }
    result.records.push_back(rec);
    if (observer) observer(mesh, step.u_next, rec);

    if (stop) {
      result.u = std::move(step.u_next);
      result.converged = true;
      break;
    }
    if (rec.action == Action::Iterate) {
      result.u = std::move(step.u_next);
      continue;
    }

    std::vector<int> marked;
    if (!config.uniform_refinement) marked = dorfler_mark(fem.eta_T, config.marking_fraction);
    if (marked.empty()) {
      // Only the oscillation term is non-zero; fall back to refining everything.
      marked.resize(mesh.triangle_count());
      std::iota(marked.begin(), marked.end(), 0);
    }
    Mesh fine = refine(mesh, marked);
    result.u = prolongate(step.u_next, fine);
    result.mesh = std::move(fine);
    matrices = SystemMatrices::assemble(result.mesh, problem.eps);
  }
  return result;
}

}  // namespace fpg
