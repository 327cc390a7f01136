#pragma once

#include <string>
#include <vector>

#include "fpg/problem.hpp"

namespace fpg {

/// Compiled-in problems on the unit square:
///   paper-ex2            f(u) = (1 - u) / (1 + exp(-(u - 1)^2)),  L_f = 1.3, c_f = 1/2
///   linear-manufactured  f(x, u) = -u + (2 pi^2 eps + 1) sin(pi x) sin(pi y), exact solution known
///   linear-layer         f(u) = 1 - u
///   zero                 f = 0
/// Throws std::invalid_argument for unknown names.
ProblemSpec problem_registry(const std::string& name, double eps);

std::vector<std::string> problem_names();

}  // namespace fpg
