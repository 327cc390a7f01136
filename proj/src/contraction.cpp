#include "fpg/contraction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fpg {

namespace {

void check_constants(double c, double L) {
  if (!(c > 0.0) || !(L > 0.0)) {
    throw std::domain_error("contraction constants must be positive (c=" + std::to_string(c) +
                            ", L=" + std::to_string(L) + ")");
  }
  if (c > L) {
    throw std::domain_error("monotonicity constant exceeds Lipschitz constant (c=" +
                            std::to_string(c) + " > L=" + std::to_string(L) + ")");
  }
}

void check_alpha(double alpha) {
  // alpha = 0 is reached for c = L at t_opt and is a perfectly good contraction.
  if (!(alpha >= 0.0) || !(alpha < 1.0)) {
    throw std::domain_error("contraction factor must lie in [0, 1), got " + std::to_string(alpha));
  }
}

void check_nonneg(double value, const char* name) {
  if (!(value >= 0.0)) throw std::domain_error(std::string(name) + " must be non-negative");
}

}  // namespace

double optimal_step(double c, double L) {
  check_constants(c, L);
  return c / (L * L);
}

double contraction_factor(double c, double L, double t) {
  check_constants(c, L);
  const double f = 1.0 - 2.0 * c * t + (L * t) * (L * t);
  if (!(t > 0.0) || !(f < 1.0)) {
    throw std::domain_error("step size " + std::to_string(t) + " outside (0, 2c/L^2) = (0, " +
                            std::to_string(2.0 * c / (L * L)) + ")");
  }
  // f >= 1 - (c/L)^2 >= 0 analytically; clamp rounding below zero at c = L.
  return std::sqrt(std::max(f, 0.0));
}

ContractionParams make_params(double c, double L, double step) {
  const double t = step > 0.0 ? step : optimal_step(c, L);
  return ContractionParams{c, L, t, contraction_factor(c, L, t)};
}

double apriori_banach(double alpha, std::size_t n, double d01) {
  check_alpha(alpha);
  check_nonneg(d01, "d01");
  return std::pow(alpha, static_cast<double>(n)) / (1.0 - alpha) * d01;
}

double apriori_discrete(double alpha, std::size_t n, double d01, double eta_h) {
  check_alpha(alpha);
  check_nonneg(d01, "d01");
  check_nonneg(eta_h, "eta_h");
  return (std::pow(alpha, static_cast<double>(n)) * d01 + eta_h) / (1.0 - alpha);
}

double residual_bound(double L, double alpha, std::size_t n, double d01, double eta_h) {
  if (!(L > 0.0)) throw std::domain_error("Lipschitz constant must be positive");
  return L * apriori_discrete(alpha, n, d01, eta_h);
}

std::vector<double> tracking_recursion(double alpha, double eta_h, std::size_t n) {
  check_alpha(alpha);
  check_nonneg(eta_h, "eta_h");
  std::vector<double> eps(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) eps[k + 1] = alpha * eps[k] + eta_h;
  return eps;
}

double abstract_aposteriori(double c, double L, double eta_h, double increment_norm) {
  check_constants(c, L);
  check_nonneg(eta_h, "eta_h");
  check_nonneg(increment_norm, "increment_norm");
  const double ratio = L / c;
  return ratio * ratio * eta_h + ratio * (1.0 + ratio) * increment_norm;
}

}  // namespace fpg
