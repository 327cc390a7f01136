#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fpg/mesh.hpp"
#include "fpg/problem.hpp"
#include "fpg/sparse.hpp"

// Residual a posteriori indicators for one damped fixed-point step u_prev -> u_next on a
// fixed mesh. The weights min(1, h / sqrt(eps)) keep the bound uniform as eps -> 0.

namespace fpg {

struct EstimatorBreakdown {
  /// Squared element indicators, one per triangle.
  std::vector<double> eta_T;
  double osc = 0.0;
  double eta_fem = 0.0;
  double eta_fp = 0.0;
  double total = 0.0;
};

/// Normal-derivative jump of a P1 function across an interior edge, taken as the sum of
/// the one-sided limits grad(w)(x + s n) . n over both outward normals, i.e.
/// grad(w|T_flat) . n_sharp + grad(w|T_sharp) . n_flat, where T_sharp = edge.tri[0].
/// Throws StructuralError for boundary edges.
double edge_jump(const Mesh& mesh, std::size_t edge, std::span<const double> w);

/// The same jump from the two one-sided gradients and the unit outward normal of T_sharp.
double gradient_jump(const Point& grad_sharp, const Point& grad_flat, const Point& normal_sharp);

/// Squared indicator of triangle t:
///   alpha_T^2 ||-(u_next - u_prev) + t f_h||_T^2
///   + 1/2 sum_{interior E of T} eps^{-1/2} alpha_E ||eps [[grad(u_next - u_prev) + t grad u_prev]]||_E^2.
/// The Laplacians of the strong residual vanish on P1 elements. The volume residual is P1,
/// so its norm is integrated exactly with the element mass matrix.
double element_indicator(const Mesh& mesh, std::size_t t, std::span<const double> u_next,
                         std::span<const double> u_prev, std::span<const double> f_h, double step,
                         double eps, const PecletWeights& weights);

struct FemEstimate {
  double eta_fem = 0.0;
  std::vector<double> eta_T;
  double osc = 0.0;
};

/// eta_fem = (t osc^2 + sum_T eta_T^2)^{1/2} with osc = ||f(u_prev) - f_h||.
/// f_h must be the projection of f(., u_prev).
FemEstimate fem_estimator(const Mesh& mesh, const ProblemSpec& problem,
                          std::span<const double> u_next, std::span<const double> u_prev,
                          std::span<const double> f_h, double step);

/// Energy norm of the increment, |||u_next - u_prev|||_eps, on dof vectors.
double fp_indicator(const SparseMatrixCSR& B, std::span<const double> u_next,
                    std::span<const double> u_prev);

/// eta_fem + eta_fp, the reported total bound (generic constant taken as 1).
double total_bound(double eta_fem, double eta_fp);

}  // namespace fpg
