#include "fpg/estimator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fpg/assembly.hpp"
#include "fpg/errors.hpp"
#include "fpg/parallel.hpp"

namespace fpg {

namespace {

template <typename Values>
Point element_gradient(const Mesh& mesh, std::size_t t, const Values& w) {
  const auto g = mesh.barycentric_gradients(t);
  const auto& tri = mesh.triangle(t);
  Point grad{0.0, 0.0};
  for (int i = 0; i < 3; ++i) {
    grad.x += w(tri[i]) * g[i].x;
    grad.y += w(tri[i]) * g[i].y;
  }
  return grad;
}

// Unit normal of the edge pointing out of triangle t.
Point outward_normal(const Mesh& mesh, std::size_t t, const MeshEdge& e) {
  const Point& a = mesh.vertex(e.v[0]);
  const Point& b = mesh.vertex(e.v[1]);
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  Point n{(b.y - a.y) / len, -(b.x - a.x) / len};
  int opposite = -1;
  for (int v : mesh.triangle(t)) {
    if (v != e.v[0] && v != e.v[1]) opposite = v;
  }
  const Point& c = mesh.vertex(opposite);
  if ((c.x - a.x) * n.x + (c.y - a.y) * n.y > 0.0) n = {-n.x, -n.y};
  return n;
}

template <typename Values>
double jump_of(const Mesh& mesh, std::size_t edge, const Values& w) {
  const MeshEdge& e = mesh.edge(edge);
  if (e.on_boundary()) {
    throw StructuralError("edge_jump: edge " + std::to_string(edge) + " lies on the boundary");
  }
  const auto sharp = static_cast<std::size_t>(e.tri[0]);
  const auto flat = static_cast<std::size_t>(e.tri[1]);
  return gradient_jump(element_gradient(mesh, sharp, w), element_gradient(mesh, flat, w),
                       outward_normal(mesh, sharp, e));
}

void check_same_size(const Mesh& mesh, std::span<const double> a, const char* who) {
  if (a.size() != mesh.vertex_count()) {
    throw DimensionError(std::string(who) + ": nodal vector size does not match the mesh");
  }
}

// Edge contribution before the 1/2 split between the two neighbours.
double edge_energy(double jump, double eps, double alpha_E, double h_E) {
  const double scaled = eps * jump;
  return alpha_E / std::sqrt(eps) * scaled * scaled * h_E;
}

}  // namespace

double gradient_jump(const Point& grad_sharp, const Point& grad_flat, const Point& normal_sharp) {
  // grad_flat is the limit approached along +n_sharp, grad_sharp along n_flat = -n_sharp.
  return (grad_flat.x * normal_sharp.x + grad_flat.y * normal_sharp.y) -
         (grad_sharp.x * normal_sharp.x + grad_sharp.y * normal_sharp.y);
}

double edge_jump(const Mesh& mesh, std::size_t edge, std::span<const double> w) {
  check_same_size(mesh, w, "edge_jump");
  return jump_of(mesh, edge, [&](int i) { return w[i]; });
}

double element_indicator(const Mesh& mesh, std::size_t t, std::span<const double> u_next,
                         std::span<const double> u_prev, std::span<const double> f_h, double step,
                         double eps, const PecletWeights& weights) {
  check_same_size(mesh, u_next, "element_indicator");
  check_same_size(mesh, u_prev, "element_indicator");
  check_same_size(mesh, f_h, "element_indicator");
  const auto& tri = mesh.triangle(t);

  std::array<double, 3> r{};
  for (int i = 0; i < 3; ++i) r[i] = -(u_next[tri[i]] - u_prev[tri[i]]) + step * f_h[tri[i]];
  const LocalMatrix m = local_mass(mesh.area(t));
  double volume = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) volume += r[i] * m[i][j] * r[j];
  }
  const double aT = weights.alpha_T[t];
  double eta2 = aT * aT * volume;

  const auto flux = [&](int i) { return (u_next[i] - u_prev[i]) + step * u_prev[i]; };
  for (int e : mesh.triangle_edges(t)) {
    if (mesh.boundary_edge(e)) continue;
    const double jump = jump_of(mesh, e, flux);
    eta2 += 0.5 * edge_energy(jump, eps, weights.alpha_E[e], mesh.edge_length(e));
  }
  return eta2;
}

FemEstimate fem_estimator(const Mesh& mesh, const ProblemSpec& problem,
                          std::span<const double> u_next, std::span<const double> u_prev,
                          std::span<const double> f_h, double step) {
  check_same_size(mesh, u_next, "fem_estimator");
  check_same_size(mesh, u_prev, "fem_estimator");
  check_same_size(mesh, f_h, "fem_estimator");
  const double eps = problem.eps;
  const PecletWeights weights = peclet_weights(mesh, eps);

  // Edge energies once per edge, then shared half/half by the neighbours.
  const auto flux = [&](int i) { return (u_next[i] - u_prev[i]) + step * u_prev[i]; };
  std::vector<double> edge_term(mesh.edge_count(), 0.0);
  parallel_for(mesh.edge_count(), [&](std::size_t e) {
    if (mesh.boundary_edge(e)) return;
    edge_term[e] = edge_energy(jump_of(mesh, e, flux), eps, weights.alpha_E[e], mesh.edge_length(e));
  });

  FemEstimate out;
  out.eta_T.assign(mesh.triangle_count(), 0.0);
  parallel_for(mesh.triangle_count(), [&](std::size_t t) {
    const auto& tri = mesh.triangle(t);
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i) r[i] = -(u_next[tri[i]] - u_prev[tri[i]]) + step * f_h[tri[i]];
    const LocalMatrix m = local_mass(mesh.area(t));
    double volume = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) volume += r[i] * m[i][j] * r[j];
    }
    const double aT = weights.alpha_T[t];
    double eta2 = aT * aT * volume;
    for (int e : mesh.triangle_edges(t)) eta2 += 0.5 * edge_term[e];
    out.eta_T[t] = eta2;
  });

  out.osc = oscillation(mesh, problem, u_prev, f_h);
  double sum = 0.0;
  for (double v : out.eta_T) sum += v;
  out.eta_fem = std::sqrt(step * out.osc * out.osc + sum);
  return out;
}

double fp_indicator(const SparseMatrixCSR& B, std::span<const double> u_next,
                    std::span<const double> u_prev) {
  if (u_next.size() != u_prev.size()) throw DimensionError("fp_indicator: size mismatch");
  std::vector<double> d(u_next.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = u_next[i] - u_prev[i];
  return energy_norm(B, d);
}

double total_bound(double eta_fem, double eta_fp) {
  if (!(eta_fem >= 0.0) || !(eta_fp >= 0.0)) {
    throw std::domain_error("total_bound: indicators must be non-negative");
  }
  return eta_fem + eta_fp;
}

}  // namespace fpg
