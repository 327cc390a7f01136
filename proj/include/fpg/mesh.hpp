#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace fpg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Mesh edge with its one or two incident triangles. tri[1] == -1 on the boundary.
struct MeshEdge {
  std::array<int, 2> v{};
  std::array<int, 2> tri{-1, -1};

  bool on_boundary() const noexcept { return tri[1] < 0; }
};

/// Seed mesh of the unit square.
struct MeshKind {
  enum class Type { Paper4, Uniform };
  Type type = Type::Paper4;
  int n = 1;

  /// "paper4" or "uniform:N" (also "uniform(N)").
  static MeshKind parse(const std::string& text);
  std::string to_string() const;
  bool operator==(const MeshKind&) const = default;
};

/// Per-entity Peclet cutoffs min(1, h / sqrt(eps)).
/// alpha_E is indexed by edge id; entries for boundary edges are computed but never used.
struct PecletWeights {
  std::vector<double> alpha_T;
  std::vector<double> alpha_E;
};

/// Conforming triangulation, immutable once built.
///
/// Triangles are stored counter-clockwise as (a, b, c) with the refinement edge (a, b)
/// and c the newest vertex. Local edge k joins local vertices k and (k + 1) % 3, so local
/// edge 0 is always the refinement edge.
///
/// A mesh produced by refine() remembers where it came from: vertices
/// [0, parent_vertex_count()) are the coarse vertices at unchanged indices, every later
/// vertex is the midpoint of the coarse edge listed in new_vertex_parents(), and each
/// triangle records the coarse triangle containing it.
class Mesh {
 public:
  /// Builds edges and boundary flags. Negatively oriented triangles are flipped. With
  /// tag_longest_edge each triangle is rotated so its longest edge becomes the refinement
  /// edge; otherwise the given vertex order defines it.
  static Mesh from_triangles(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                             bool tag_longest_edge = true);

  static Mesh build_initial(const MeshKind& kind);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t triangle_count() const noexcept { return triangles_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::size_t interior_edge_count() const noexcept;
  /// Number of free (non-boundary) vertices, i.e. the dimension of the discrete space.
  std::size_t dof_count() const noexcept { return dof_count_; }

  std::span<const Point> vertices() const noexcept { return vertices_; }
  std::span<const std::array<int, 3>> triangles() const noexcept { return triangles_; }
  std::span<const MeshEdge> edges() const noexcept { return edges_; }
  const Point& vertex(std::size_t i) const { return vertices_[i]; }
  const std::array<int, 3>& triangle(std::size_t t) const { return triangles_[t]; }
  const MeshEdge& edge(std::size_t e) const { return edges_[e]; }
  /// Edge ids of the three local edges of triangle t.
  const std::array<int, 3>& triangle_edges(std::size_t t) const { return triangle_edges_[t]; }

  bool boundary_vertex(std::size_t i) const { return boundary_vertex_[i] != 0; }
  bool boundary_edge(std::size_t e) const { return edges_[e].on_boundary(); }
  /// True if any vertex of triangle t lies on the boundary.
  bool touches_boundary(std::size_t t) const;

  /// Vertex index -> dof index, -1 for boundary vertices. Dofs follow vertex order.
  std::span<const int> dof_of_vertex() const noexcept { return dof_of_vertex_; }
  std::span<const int> vertex_of_dof() const noexcept { return vertex_of_dof_; }

  double area(std::size_t t) const;
  double diameter(std::size_t t) const;
  double edge_length(std::size_t e) const;
  /// max over triangles of diameter().
  double mesh_size() const;
  double min_angle(std::size_t t) const;

  /// Gradients of the three barycentric coordinates of triangle t (constant on t).
  std::array<Point, 3> barycentric_gradients(std::size_t t) const;

  std::span<const int> generation() const noexcept { return generation_; }
  std::span<const int> parent_triangle() const noexcept { return parent_triangle_; }
  std::size_t parent_vertex_count() const noexcept { return parent_vertex_count_; }
  std::span<const std::array<int, 2>> new_vertex_parents() const noexcept {
    return new_vertex_parents_;
  }
  /// False for meshes built directly (no coarse ancestor).
  bool is_refined() const noexcept { return refined_; }

  /// True if every interior edge has two incident triangles, every boundary edge one,
  /// no edge is shared by more than two triangles and all triangles have positive area.
  bool is_conforming() const;

 private:
  void build_topology();

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<MeshEdge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<char> boundary_vertex_;
  std::vector<int> dof_of_vertex_;
  std::vector<int> vertex_of_dof_;
  std::size_t dof_count_ = 0;
  bool overshared_edge_ = false;

  std::vector<int> generation_;
  std::vector<int> parent_triangle_;
  std::size_t parent_vertex_count_ = 0;
  std::vector<std::array<int, 2>> new_vertex_parents_;
  bool refined_ = false;

  friend Mesh refine(const Mesh& mesh, std::span<const int> marked);
};

/// h_T per triangle and h_E per edge (edge id order, boundary edges included).
struct Diameters {
  std::vector<double> h_T;
  std::vector<double> h_E;
  double h = 0.0;
};

Diameters diameters(const Mesh& mesh);

/// Throws std::domain_error if eps <= 0.
PecletWeights peclet_weights(const Mesh& mesh, double eps);

/// Newest-vertex bisection of the marked triangles plus the conforming closure.
/// Out-of-range indices throw std::out_of_range. An empty set returns a copy whose
/// ancestry is the identity.
Mesh refine(const Mesh& mesh, std::span<const int> marked);

/// Every triangle marked.
Mesh refine_uniform(const Mesh& mesh);

/// Interpolates a coarse nodal function onto a mesh produced by refine(). Boundary values
/// are forced to zero. Throws StructuralError if fine does not descend from a mesh with
/// u_coarse.size() vertices.
std::vector<double> prolongate(std::span<const double> u_coarse, const Mesh& fine);

/// Plain-text export: "vertices N triangles M", N lines "x y boundary_flag",
/// M lines "i j k" (0-based).
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

/// "vertex_index value" per line.
void write_solution(std::ostream& out, std::span<const double> values);

/// Legacy VTK unstructured grid with the nodal values as point data.
void write_vtk(std::ostream& out, const Mesh& mesh, std::span<const double> values);

}  // namespace fpg
