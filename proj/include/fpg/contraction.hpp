#pragma once

#include <cstddef>
#include <vector>

// Closed-form evaluators for the damped fixed-point (Zarantonello) iteration
//   u <- u - t * J^{-1} F(u)
// of an L-Lipschitz, c-strongly monotone operator F, and the a priori / a posteriori
// bounds that follow from its contraction factor. No PDE knowledge lives here.

namespace fpg {

/// Step size, contraction factor and the constants they were derived from.
/// Construct through make_params so alpha is always consistent with (c, L, t).
struct ContractionParams {
  double c = 0.0;
  double L = 0.0;
  double t = 0.0;
  double alpha = 0.0;
};

/// t_opt = c / L^2. Throws std::domain_error unless 0 < c <= L.
double optimal_step(double c, double L);

/// sqrt(1 - 2ct + (Lt)^2). Throws std::domain_error unless 0 < c <= L and t in (0, 2c/L^2).
double contraction_factor(double c, double L, double t);

/// Parameters at the given step, or at t_opt when step is omitted (<= 0).
ContractionParams make_params(double c, double L, double step = 0.0);

/// alpha^n / (1 - alpha) * d01, with d01 = ||x_1 - x_0||.
double apriori_banach(double alpha, std::size_t n, double d01);

/// (alpha^n * d01 + eta_h) / (1 - alpha): error of the n-th discrete iterate when every
/// discrete step is within eta_h of its continuous counterpart.
double apriori_discrete(double alpha, std::size_t n, double d01, double eta_h);

/// L / (1 - alpha) * (alpha^n * d01 + eta_h): dual-norm bound on the residual F(u_h^n).
double residual_bound(double L, double alpha, std::size_t n, double d01, double eta_h);

/// e_0 = 0, e_{k+1} = alpha * e_k + eta_h for k < n. Returns all n + 1 entries.
std::vector<double> tracking_recursion(double alpha, double eta_h, std::size_t n);

/// (L/c)^2 * eta_h + (L/c)(1 + L/c) * ||u^{n+1} - u^n||.
double abstract_aposteriori(double c, double L, double eta_h, double increment_norm);

}  // namespace fpg
