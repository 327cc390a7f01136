#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fpg/mesh.hpp"
#include "fpg/problem.hpp"
#include "fpg/sparse.hpp"

// P1 finite elements on a Mesh.
//
// Nodal functions are plain vectors with one value per mesh vertex; members of the
// discrete space vanish at boundary vertices. Global matrices are assembled over all
// vertices ("full") and reduced to the free vertices with restrict_to_dofs().

namespace fpg {

using LocalMatrix = std::array<std::array<double, 3>, 3>;

/// Exact element stiffness: area * grad(phi_i) . grad(phi_j).
LocalMatrix local_stiffness(const Point& p0, const Point& p1, const Point& p2);

/// Consistent element mass: area / 12 * [[2,1,1],[1,2,1],[1,1,2]].
LocalMatrix local_mass(double area);

/// Full (boundary-included) stiffness matrix.
SparseMatrixCSR assemble_stiffness(const Mesh& mesh);

/// Full (boundary-included) consistent mass matrix.
SparseMatrixCSR assemble_mass(const Mesh& mesh);

/// Rows and columns of the free vertices, numbered by Mesh::dof_of_vertex().
SparseMatrixCSR restrict_to_dofs(const Mesh& mesh, const SparseMatrixCSR& full);

/// B = M + eps * A. Throws DimensionError if the sizes differ.
SparseMatrixCSR iteration_matrix(const SparseMatrixCSR& M, const SparseMatrixCSR& A, double eps);

/// Nodal values at free vertices.
std::vector<double> to_dofs(const Mesh& mesh, std::span<const double> nodal);
/// Scatter dof values to a nodal vector with zeros on the boundary.
std::vector<double> from_dofs(const Mesh& mesh, std::span<const double> dofs);

/// Value of the P1 function u at the quadrature points: integrand(triangle, x, u_h(x)).
using ElementIntegrand = std::function<double(std::size_t, const Point&, double)>;

/// (integral of g * phi_i) for every vertex i, degree-4 quadrature, where g is evaluated as
/// integrand(t, x, u(x)). Pass an empty u to evaluate with u_h = 0.
std::vector<double> integrate_against_hats(const Mesh& mesh, std::span<const double> u,
                                           const ElementIntegrand& integrand);

/// b(u)_i = integral of f(x, u_h) phi_i over free vertices i.
std::vector<double> load_vector(const Mesh& mesh, const ProblemSpec& problem,
                                std::span<const double> u);

/// L2 projection onto the full P1 space: solves M_full p = (integral g phi_i)_i.
std::vector<double> l2_project(const Mesh& mesh, const SparseMatrixCSR& M_full,
                               const std::function<double(const Point&)>& g);

/// Projection f_h of x -> f(x, u_h(x)).
std::vector<double> l2_project_source(const Mesh& mesh, const SparseMatrixCSR& M_full,
                                      const ProblemSpec& problem, std::span<const double> u);

/// || f(., u_h) - f_h ||_{0, Omega} by degree-4 quadrature.
double oscillation(const Mesh& mesh, const ProblemSpec& problem, std::span<const double> u,
                   std::span<const double> f_h);

/// sqrt(d^T B d).
double energy_norm(const SparseMatrixCSR& B, std::span<const double> d);

/// (||u - u_h||^2 + eps ||grad(u - u_h)||^2)^{1/2} by degree-4 quadrature.
double energy_error(const Mesh& mesh, double eps, std::span<const double> u_h,
                    const std::function<double(const Point&)>& exact,
                    const std::function<Point(const Point&)>& exact_gradient);

/// Nodal interpolant of g (boundary values kept as given by g).
std::vector<double> interpolate(const Mesh& mesh, const std::function<double(const Point&)>& g);

/// Matrices that depend only on the mesh (and eps for B).
struct SystemMatrices {
  SparseMatrixCSR M_full;
  SparseMatrixCSR A_full;
  SparseMatrixCSR M;
  SparseMatrixCSR A;
  SparseMatrixCSR B;

  static SystemMatrices assemble(const Mesh& mesh, double eps);
};

}  // namespace fpg
