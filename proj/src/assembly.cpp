#include "fpg/assembly.hpp"

#include <cmath>
#include <string>

#include "fpg/errors.hpp"
#include "fpg/parallel.hpp"
#include "fpg/quadrature.hpp"

namespace fpg {

namespace {

using LocalVector = std::array<double, 3>;

void check_nodal(const Mesh& mesh, std::span<const double> u, const char* who) {
  if (u.size() != mesh.vertex_count()) {
    throw DimensionError(std::string(who) + ": nodal vector has " + std::to_string(u.size()) +
                         " entries, mesh has " + std::to_string(mesh.vertex_count()) + " vertices");
  }
}

Point map_point(const Mesh& mesh, const std::array<int, 3>& tri, const std::array<double, 3>& l) {
  const Point& a = mesh.vertex(tri[0]);
  const Point& b = mesh.vertex(tri[1]);
  const Point& c = mesh.vertex(tri[2]);
  return {l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y};
}

template <typename Local>
SparseMatrixCSR assemble_full(const Mesh& mesh, Local&& local) {
  std::vector<LocalMatrix> blocks(mesh.triangle_count());
  parallel_for(mesh.triangle_count(), [&](std::size_t t) { blocks[t] = local(t); });
  std::vector<SparseMatrixCSR::Triplet> triplets;
  triplets.reserve(9 * mesh.triangle_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) triplets.push_back({tri[i], tri[j], blocks[t][i][j]});
    }
  }
  return SparseMatrixCSR::from_triplets(mesh.vertex_count(), triplets);
}

}  // namespace

LocalMatrix local_stiffness(const Point& p0, const Point& p1, const Point& p2) {
  const double two_area = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
  const std::array<Point, 3> g{Point{(p1.y - p2.y) / two_area, (p2.x - p1.x) / two_area},
                               Point{(p2.y - p0.y) / two_area, (p0.x - p2.x) / two_area},
                               Point{(p0.y - p1.y) / two_area, (p1.x - p0.x) / two_area}};
  const double area = 0.5 * two_area;
  LocalMatrix k{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) k[i][j] = area * (g[i].x * g[j].x + g[i].y * g[j].y);
  }
  return k;
}

LocalMatrix local_mass(double area) {
  const double d = area / 6.0;
  const double o = area / 12.0;
  return {{{d, o, o}, {o, d, o}, {o, o, d}}};
}

SparseMatrixCSR assemble_stiffness(const Mesh& mesh) {
  return assemble_full(mesh, [&](std::size_t t) {
    const auto& tri = mesh.triangle(t);
    return local_stiffness(mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2]));
  });
}

SparseMatrixCSR assemble_mass(const Mesh& mesh) {
  return assemble_full(mesh, [&](std::size_t t) { return local_mass(mesh.area(t)); });
}

SparseMatrixCSR restrict_to_dofs(const Mesh& mesh, const SparseMatrixCSR& full) {
  if (full.size() != mesh.vertex_count()) {
    throw DimensionError("restrict_to_dofs: matrix is not vertex-sized");
  }
  return restrict_to(full, mesh.dof_of_vertex(), mesh.dof_count());
}

SparseMatrixCSR iteration_matrix(const SparseMatrixCSR& M, const SparseMatrixCSR& A, double eps) {
  if (M.size() != A.size()) {
    throw DimensionError("iteration_matrix: M is " + std::to_string(M.size()) + ", A is " +
                         std::to_string(A.size()));
  }
  return add_scaled(M, eps, A);
}

std::vector<double> to_dofs(const Mesh& mesh, std::span<const double> nodal) {
  check_nodal(mesh, nodal, "to_dofs");
  std::vector<double> d(mesh.dof_count());
  const auto vertex_of = mesh.vertex_of_dof();
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = nodal[vertex_of[k]];
  return d;
}

std::vector<double> from_dofs(const Mesh& mesh, std::span<const double> dofs) {
  if (dofs.size() != mesh.dof_count()) throw DimensionError("from_dofs: dof vector size mismatch");
  std::vector<double> u(mesh.vertex_count(), 0.0);
  const auto vertex_of = mesh.vertex_of_dof();
  for (std::size_t k = 0; k < dofs.size(); ++k) u[vertex_of[k]] = dofs[k];
  return u;
}

std::vector<double> integrate_against_hats(const Mesh& mesh, std::span<const double> u,
                                           const ElementIntegrand& integrand) {
  if (!u.empty()) check_nodal(mesh, u, "integrate_against_hats");
  std::vector<LocalVector> local(mesh.triangle_count());
  parallel_for(mesh.triangle_count(), [&](std::size_t t) {
    const auto& tri = mesh.triangle(t);
    const double area = mesh.area(t);
    LocalVector acc{0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < kDegree4Rule.weights.size(); ++q) {
      const auto& l = kDegree4Rule.points[q];
      const double uq = u.empty() ? 0.0 : l[0] * u[tri[0]] + l[1] * u[tri[1]] + l[2] * u[tri[2]];
      const double gq = integrand(t, map_point(mesh, tri, l), uq);
      const double w = kDegree4Rule.weights[q] * area * gq;
      for (int i = 0; i < 3; ++i) acc[i] += w * l[i];
    }
    local[t] = acc;
  });
  std::vector<double> b(mesh.vertex_count(), 0.0);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < 3; ++i) b[tri[i]] += local[t][i];
  }
  return b;
}

std::vector<double> load_vector(const Mesh& mesh, const ProblemSpec& problem,
                                std::span<const double> u) {
  check_nodal(mesh, u, "load_vector");
  const auto full = integrate_against_hats(
      mesh, u, [&](std::size_t, const Point& x, double uq) { return problem.f(x, uq); });
  return to_dofs(mesh, full);
}

std::vector<double> l2_project(const Mesh& mesh, const SparseMatrixCSR& M_full,
                               const std::function<double(const Point&)>& g) {
  if (M_full.size() != mesh.vertex_count()) {
    throw DimensionError("l2_project: mass matrix must include boundary vertices");
  }
  const auto rhs = integrate_against_hats(mesh, {}, [&](std::size_t, const Point& x, double) { return g(x); });
  return cg_solve(M_full, rhs, 1e-12).x;
}

std::vector<double> l2_project_source(const Mesh& mesh, const SparseMatrixCSR& M_full,
                                      const ProblemSpec& problem, std::span<const double> u) {
  check_nodal(mesh, u, "l2_project_source");
  if (M_full.size() != mesh.vertex_count()) {
    throw DimensionError("l2_project_source: mass matrix must include boundary vertices");
  }
  const auto rhs = integrate_against_hats(
      mesh, u, [&](std::size_t, const Point& x, double uq) { return problem.f(x, uq); });
  return cg_solve(M_full, rhs, 1e-12).x;
}

double oscillation(const Mesh& mesh, const ProblemSpec& problem, std::span<const double> u,
                   std::span<const double> f_h) {
  check_nodal(mesh, u, "oscillation");
  check_nodal(mesh, f_h, "oscillation");
  std::vector<double> local(mesh.triangle_count());
  parallel_for(mesh.triangle_count(), [&](std::size_t t) {
    const auto& tri = mesh.triangle(t);
    double acc = 0.0;
    for (std::size_t q = 0; q < kDegree4Rule.weights.size(); ++q) {
      const auto& l = kDegree4Rule.points[q];
      const double uq = l[0] * u[tri[0]] + l[1] * u[tri[1]] + l[2] * u[tri[2]];
      const double pq = l[0] * f_h[tri[0]] + l[1] * f_h[tri[1]] + l[2] * f_h[tri[2]];
      const double diff = problem.f(map_point(mesh, tri, l), uq) - pq;
      acc += kDegree4Rule.weights[q] * diff * diff;
    }
    local[t] = acc * mesh.area(t);
  });
  double sum = 0.0;
  for (double v : local) sum += v;
  return std::sqrt(sum);
}

double energy_norm(const SparseMatrixCSR& B, std::span<const double> d) {
  if (d.size() != B.size()) {
    throw DimensionError("energy_norm: vector has " + std::to_string(d.size()) + " entries, matrix is " +
                         std::to_string(B.size()));
  }
  const auto Bd = matvec(B, d);
  return std::sqrt(std::max(0.0, dot(d, Bd)));
}

double energy_error(const Mesh& mesh, double eps, std::span<const double> u_h,
                    const std::function<double(const Point&)>& exact,
                    const std::function<Point(const Point&)>& exact_gradient) {
  check_nodal(mesh, u_h, "energy_error");
  std::vector<double> local(mesh.triangle_count());
  parallel_for(mesh.triangle_count(), [&](std::size_t t) {
    const auto& tri = mesh.triangle(t);
    const auto g = mesh.barycentric_gradients(t);
    Point grad_h{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      grad_h.x += u_h[tri[i]] * g[i].x;
      grad_h.y += u_h[tri[i]] * g[i].y;
    }
    double acc = 0.0;
    for (std::size_t q = 0; q < kDegree4Rule.weights.size(); ++q) {
      const auto& l = kDegree4Rule.points[q];
      const Point x = map_point(mesh, tri, l);
      const double e = exact(x) - (l[0] * u_h[tri[0]] + l[1] * u_h[tri[1]] + l[2] * u_h[tri[2]]);
      const Point ge = exact_gradient(x);
      const double gx = ge.x - grad_h.x;
      const double gy = ge.y - grad_h.y;
      acc += kDegree4Rule.weights[q] * (e * e + eps * (gx * gx + gy * gy));
    }
    local[t] = acc * mesh.area(t);
  });
  double sum = 0.0;
  for (double v : local) sum += v;
  return std::sqrt(sum);
}

std::vector<double> interpolate(const Mesh& mesh, const std::function<double(const Point&)>& g) {
  std::vector<double> u(mesh.vertex_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = g(mesh.vertex(i));
  return u;
}

SystemMatrices SystemMatrices::assemble(const Mesh& mesh, double eps) {
  SystemMatrices s;
  s.M_full = assemble_mass(mesh);
  s.A_full = assemble_stiffness(mesh);
  s.M = restrict_to_dofs(mesh, s.M_full);
  s.A = restrict_to_dofs(mesh, s.A_full);
  s.B = iteration_matrix(s.M, s.A, eps);
  return s;
}

}  // namespace fpg
