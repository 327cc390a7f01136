#pragma once

#include <algorithm>
#include <functional>
#include <string>

#include "fpg/mesh.hpp"

namespace fpg {

/// -eps * Laplace(u) = f(x, u) in the unit square, u = 0 on the boundary.
struct ProblemSpec {
  using Source = std::function<double(const Point&, double)>;

  std::string name;
  double eps = 1.0;
  Source f;
  /// Partial derivative of f in u. Only used to check the constants, never by the solver.
  Source df_du;
  double L_f = 1.0;
  double c_f = 1.0;

  /// Optional exact solution and its gradient (manufactured problems).
  std::function<double(const Point&)> exact;
  std::function<Point(const Point&)> exact_gradient;

  /// Lipschitz and monotonicity constants of the weak operator in the eps-energy norm.
  double L() const { return std::max(1.0, L_f); }
  double c() const { return std::min(1.0, c_f); }
  bool has_exact_solution() const { return static_cast<bool>(exact) && static_cast<bool>(exact_gradient); }
};

}  // namespace fpg
