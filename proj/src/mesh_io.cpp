#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fpg/errors.hpp"
#include "fpg/mesh.hpp"

namespace fpg {

void write_mesh(std::ostream& out, const Mesh& mesh) {
  const auto old_precision = out.precision(17);
  out << "vertices " << mesh.vertex_count() << " triangles " << mesh.triangle_count() << '\n';
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    const Point& p = mesh.vertex(i);
    out << p.x << ' ' << p.y << ' ' << (mesh.boundary_vertex(i) ? 1 : 0) << '\n';
  }
  for (const auto& tri : mesh.triangles()) {
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
  }
  out.precision(old_precision);
}

Mesh read_mesh(std::istream& in) {
  std::string w1, w2;
  std::size_t nv = 0, nt = 0;
  if (!(in >> w1 >> nv >> w2 >> nt) || w1 != "vertices" || w2 != "triangles") {
    throw std::runtime_error("read_mesh: expected header 'vertices N triangles M'");
  }
  std::vector<Point> vertices(nv);
  for (auto& p : vertices) {
    int flag = 0;
    if (!(in >> p.x >> p.y >> flag)) throw std::runtime_error("read_mesh: truncated vertex block");
  }
  std::vector<std::array<int, 3>> triangles(nt);
  for (auto& t : triangles) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw std::runtime_error("read_mesh: truncated triangle block");
  }
  // Stored order already carries the refinement edge.
  return Mesh::from_triangles(std::move(vertices), std::move(triangles), false);
}

void write_solution(std::ostream& out, std::span<const double> values) {
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ' ' << values[i] << '\n';
  out.precision(old_precision);
}

void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const double> values) {
  if (values.size() != mesh.vertex_count()) {
    throw DimensionError("write_vtk: value count does not match vertex count");
  }
  const auto old_precision = out.precision(17);
  out << "# vtk DataFile Version 3.0\nfpg solution\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const auto& p : mesh.vertices()) out << p.x << ' ' << p.y << " 0\n";
  out << "CELLS " << mesh.triangle_count() << ' ' << 4 * mesh.triangle_count() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.triangle_count() << '\n';
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) out << "5\n";
  out << "POINT_DATA " << mesh.vertex_count() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
  for (double v : values) out << v << '\n';
  out.precision(old_precision);
}

}  // namespace fpg
