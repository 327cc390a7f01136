#include "fpg/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fpg {

ProblemSpec problem_registry(const std::string& name, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  ProblemSpec p;
  p.name = name;
  p.eps = eps;

  if (name == "paper-ex2") {
    p.f = [](const Point&, double u) {
      const double s = u - 1.0;
      return -s / (1.0 + std::exp(-s * s));
    };
    p.df_du = [](const Point&, double u) {
      const double s = u - 1.0;
      const double e = std::exp(-s * s);
      return -((1.0 + e) + 2.0 * s * s * e) / ((1.0 + e) * (1.0 + e));
    };
    p.L_f = 1.3;
    p.c_f = 0.5;
    return p;
  }
  if (name == "linear-manufactured") {
    constexpr double pi = std::numbers::pi;
    const double amplitude = 2.0 * pi * pi * eps + 1.0;
    p.f = [amplitude](const Point& x, double u) {
      return -u + amplitude * std::sin(pi * x.x) * std::sin(pi * x.y);
    };
    p.df_du = [](const Point&, double) { return -1.0; };
    p.exact = [](const Point& x) { return std::sin(pi * x.x) * std::sin(pi * x.y); };
    p.exact_gradient = [](const Point& x) {
      return Point{pi * std::cos(pi * x.x) * std::sin(pi * x.y),
                   pi * std::sin(pi * x.x) * std::cos(pi * x.y)};
    };
    p.L_f = 1.0;
    p.c_f = 1.0;
    return p;
  }
  if (name == "linear-layer") {
    p.f = [](const Point&, double u) { return 1.0 - u; };
    p.df_du = [](const Point&, double) { return -1.0; };
    p.L_f = 1.0;
    p.c_f = 1.0;
    return p;
  }
  if (name == "zero") {
    p.f = [](const Point&, double) { return 0.0; };
    p.df_du = [](const Point&, double) { return 0.0; };
    p.L_f = 1.0;
    p.c_f = 1.0;
    return p;
  }
  throw std::invalid_argument("unknown problem '" + name + "'");
}

std::vector<std::string> problem_names() {
  return {"paper-ex2", "linear-manufactured", "linear-layer", "zero"};
}

}  // namespace fpg
