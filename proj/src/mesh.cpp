#include "fpg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "fpg/errors.hpp"

namespace fpg {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

double distance(const Point& a, const Point& b) { return std::hypot(b.x - a.x, b.y - a.y); }

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

}  // namespace

MeshKind MeshKind::parse(const std::string& text) {
  if (text == "paper4") return MeshKind{Type::Paper4, 1};
  std::string digits;
  if (text.rfind("uniform:", 0) == 0) {
    digits = text.substr(8);
  } else if (text.rfind("uniform(", 0) == 0 && text.back() == ')') {
    digits = text.substr(8, text.size() - 9);
  } else {
    throw std::invalid_argument("unknown mesh kind '" + text + "' (expected paper4 or uniform:N)");
  }
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(digits, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != digits.size() || digits.empty() || n < 1) {
    throw std::invalid_argument("bad subdivision count in mesh kind '" + text + "'");
  }
  return MeshKind{Type::Uniform, n};
}

std::string MeshKind::to_string() const {
  return type == Type::Paper4 ? std::string("paper4") : "uniform:" + std::to_string(n);
}

Mesh Mesh::from_triangles(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
                          bool tag_longest_edge) {
  Mesh mesh;
  for (auto& tri : triangles) {
    for (int v : tri) {
      if (v < 0 || static_cast<std::size_t>(v) >= vertices.size()) {
        throw std::out_of_range("triangle references vertex " + std::to_string(v));
      }
    }
    if (signed_area(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]) < 0.0) {
      std::swap(tri[0], tri[1]);
    }
    if (tag_longest_edge) {
      int longest = 0;
      double best = -1.0;
      for (int k = 0; k < 3; ++k) {
        const double len = distance(vertices[tri[k]], vertices[tri[(k + 1) % 3]]);
        if (len > best * (1.0 + 1e-12)) {
          best = len;
          longest = k;
        }
      }
      std::rotate(tri.begin(), tri.begin() + longest, tri.end());
    }
  }
  mesh.vertices_ = std::move(vertices);
  mesh.triangles_ = std::move(triangles);
  mesh.generation_.assign(mesh.triangles_.size(), 0);
  mesh.parent_triangle_.assign(mesh.triangles_.size(), -1);
  mesh.parent_vertex_count_ = mesh.vertices_.size();
  mesh.build_topology();
  return mesh;
}

Mesh Mesh::build_initial(const MeshKind& kind) {
  if (kind.type == MeshKind::Type::Paper4) {
    // Four triangles meeting at the centre; the centre is the only free vertex.
    std::vector<Point> v{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.5, 0.5}};
    std::vector<std::array<int, 3>> t{{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
    return from_triangles(std::move(v), std::move(t));
  }
  const int n = kind.n;
  if (n < 1) throw std::invalid_argument("uniform mesh needs n >= 1");
  std::vector<Point> v;
  v.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      v.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> t;
  t.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      t.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      t.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return from_triangles(std::move(v), std::move(t));
}

void Mesh::build_topology() {
  edges_.clear();
  triangle_edges_.assign(triangles_.size(), {-1, -1, -1});
  overshared_edge_ = false;
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(triangles_.size() * 2);
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), static_cast<int>(edges_.size()));
      if (inserted) {
        MeshEdge e;
        e.v = {std::min(a, b), std::max(a, b)};
        e.tri = {static_cast<int>(t), -1};
        edges_.push_back(e);
      } else {
        MeshEdge& e = edges_[it->second];
        if (e.tri[1] >= 0) overshared_edge_ = true;
        e.tri[1] = static_cast<int>(t);
      }
      triangle_edges_[t][k] = it->second;
    }
  }

  boundary_vertex_.assign(vertices_.size(), 0);
  for (const auto& e : edges_) {
    if (e.on_boundary()) {
      boundary_vertex_[e.v[0]] = 1;
      boundary_vertex_[e.v[1]] = 1;
    }
  }
  dof_of_vertex_.assign(vertices_.size(), -1);
  vertex_of_dof_.clear();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!boundary_vertex_[i]) {
      dof_of_vertex_[i] = static_cast<int>(vertex_of_dof_.size());
      vertex_of_dof_.push_back(static_cast<int>(i));
    }
  }
  dof_count_ = vertex_of_dof_.size();
}

std::size_t Mesh::interior_edge_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [](const MeshEdge& e) { return !e.on_boundary(); }));
}

bool Mesh::touches_boundary(std::size_t t) const {
  const auto& tri = triangles_[t];
  return boundary_vertex_[tri[0]] || boundary_vertex_[tri[1]] || boundary_vertex_[tri[2]];
}

double Mesh::area(std::size_t t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Mesh::diameter(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  return std::max({distance(a, b), distance(b, c), distance(c, a)});
}

double Mesh::edge_length(std::size_t e) const {
  return distance(vertices_[edges_[e].v[0]], vertices_[edges_[e].v[1]]);
}

double Mesh::mesh_size() const {
  double h = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) h = std::max(h, diameter(t));
  return h;
}

double Mesh::min_angle(std::size_t t) const {
  const auto& tri = triangles_[t];
  double smallest = std::numbers::pi;
  for (int k = 0; k < 3; ++k) {
    const Point& p = vertices_[tri[k]];
    const Point& q = vertices_[tri[(k + 1) % 3]];
    const Point& r = vertices_[tri[(k + 2) % 3]];
    const double ux = q.x - p.x, uy = q.y - p.y;
    const double vx = r.x - p.x, vy = r.y - p.y;
    smallest = std::min(smallest, std::atan2(std::abs(ux * vy - uy * vx), ux * vx + uy * vy));
  }
  return smallest;
}

std::array<Point, 3> Mesh::barycentric_gradients(std::size_t t) const {
  const auto& tri = triangles_[t];
  const Point& p0 = vertices_[tri[0]];
  const Point& p1 = vertices_[tri[1]];
  const Point& p2 = vertices_[tri[2]];
  const double two_area = (p1.x - p0.x) * (p2.y - p0.y) - (p1.y - p0.y) * (p2.x - p0.x);
  return {Point{(p1.y - p2.y) / two_area, (p2.x - p1.x) / two_area},
          Point{(p2.y - p0.y) / two_area, (p0.x - p2.x) / two_area},
          Point{(p0.y - p1.y) / two_area, (p1.x - p0.x) / two_area}};
}

bool Mesh::is_conforming() const {
  if (overshared_edge_) return false;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    if (!(area(t) > 0.0)) return false;
  }
  // A hanging node shows up as a topological boundary vertex sitting inside another
  // boundary edge.
  std::vector<int> bverts;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (boundary_vertex_[i]) bverts.push_back(static_cast<int>(i));
  }
  for (const auto& e : edges_) {
    if (!e.on_boundary()) continue;
    const Point& a = vertices_[e.v[0]];
    const Point& b = vertices_[e.v[1]];
    const double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    for (int i : bverts) {
      if (i == e.v[0] || i == e.v[1]) continue;
      const Point& p = vertices_[i];
      const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
      if (std::abs(cross) > 1e-12 * len2) continue;
      const double s = ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2;
      if (s > 1e-12 && s < 1.0 - 1e-12) return false;
    }
  }
  return true;
}

Diameters diameters(const Mesh& mesh) {
  Diameters d;
  d.h_T.resize(mesh.triangle_count());
  d.h_E.resize(mesh.edge_count());
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    d.h_T[t] = mesh.diameter(t);
    d.h = std::max(d.h, d.h_T[t]);
  }
  for (std::size_t e = 0; e < mesh.edge_count(); ++e) d.h_E[e] = mesh.edge_length(e);
  return d;
}

PecletWeights peclet_weights(const Mesh& mesh, double eps) {
  if (!(eps > 0.0)) throw std::domain_error("peclet_weights: eps must be positive");
  const double scale = 1.0 / std::sqrt(eps);
  const Diameters d = diameters(mesh);
  PecletWeights w;
  w.alpha_T.resize(d.h_T.size());
  w.alpha_E.resize(d.h_E.size());
  for (std::size_t t = 0; t < d.h_T.size(); ++t) w.alpha_T[t] = std::min(1.0, scale * d.h_T[t]);
  for (std::size_t e = 0; e < d.h_E.size(); ++e) w.alpha_E[e] = std::min(1.0, scale * d.h_E[e]);
  return w;
}

Mesh refine(const Mesh& mesh, std::span<const int> marked) {
  const std::size_t n_edges = mesh.edge_count();
  std::vector<char> edge_marked(n_edges, 0);
  std::vector<int> work;
  for (int t : marked) {
    if (t < 0 || static_cast<std::size_t>(t) >= mesh.triangle_count()) {
      throw std::out_of_range("refine: triangle index " + std::to_string(t) + " out of range");
    }
    const int e = mesh.triangle_edges(t)[0];
    if (!edge_marked[e]) {
      edge_marked[e] = 1;
      work.push_back(e);
    }
  }
  // Closure: a triangle with any marked edge must also bisect its refinement edge.
  while (!work.empty()) {
    const int e = work.back();
    work.pop_back();
    for (int t : mesh.edge(e).tri) {
      if (t < 0) continue;
      const int ref = mesh.triangle_edges(t)[0];
      if (!edge_marked[ref]) {
        edge_marked[ref] = 1;
        work.push_back(ref);
      }
    }
  }

  std::vector<Point> vertices(mesh.vertices().begin(), mesh.vertices().end());
  std::vector<std::array<int, 2>> new_parents;
  std::vector<int> midpoint(n_edges, -1);
  for (std::size_t e = 0; e < n_edges; ++e) {
    if (!edge_marked[e]) continue;
    const auto& ed = mesh.edge(e);
    const Point& a = mesh.vertex(ed.v[0]);
    const Point& b = mesh.vertex(ed.v[1]);
    midpoint[e] = static_cast<int>(vertices.size());
    vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    new_parents.push_back(ed.v);
  }

  std::vector<std::array<int, 3>> triangles;
  std::vector<int> generation;
  std::vector<int> parent;
  triangles.reserve(mesh.triangle_count() + 2 * new_parents.size());
  auto emit = [&](std::array<int, 3> tri, int gen, int from) {
    triangles.push_back(tri);
    generation.push_back(gen);
    parent.push_back(from);
  };

  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto [a, b, c] = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    const int gen = mesh.generation()[t];
    const int from = static_cast<int>(t);
    if (!edge_marked[te[0]]) {
      emit({a, b, c}, gen, from);
      continue;
    }
    // (a, b, c) -> (c, a, m) with refinement edge ca = te[2], and (b, c, m) with bc = te[1].
    const int m = midpoint[te[0]];
    if (edge_marked[te[2]]) {
      const int m2 = midpoint[te[2]];
      emit({m, c, m2}, gen + 2, from);
      emit({a, m, m2}, gen + 2, from);
    } else {
      emit({c, a, m}, gen + 1, from);
    }
    if (edge_marked[te[1]]) {
      const int m1 = midpoint[te[1]];
      emit({m, b, m1}, gen + 2, from);
      emit({c, m, m1}, gen + 2, from);
    } else {
      emit({b, c, m}, gen + 1, from);
    }
  }

  Mesh fine;
  fine.vertices_ = std::move(vertices);
  fine.triangles_ = std::move(triangles);
  fine.generation_ = std::move(generation);
  fine.parent_triangle_ = std::move(parent);
  fine.parent_vertex_count_ = mesh.vertex_count();
  fine.new_vertex_parents_ = std::move(new_parents);
  fine.refined_ = true;
  fine.build_topology();
  return fine;
}

Mesh refine_uniform(const Mesh& mesh) {
  std::vector<int> all(mesh.triangle_count());
  for (std::size_t t = 0; t < all.size(); ++t) all[t] = static_cast<int>(t);
  return refine(mesh, all);
}

std::vector<double> prolongate(std::span<const double> u_coarse, const Mesh& fine) {
  if (!fine.is_refined()) {
    throw StructuralError("prolongate: target mesh was not produced by refine()");
  }
  if (u_coarse.size() != fine.parent_vertex_count()) {
    throw StructuralError("prolongate: coarse function has " + std::to_string(u_coarse.size()) +
                          " values but the fine mesh descends from a mesh with " +
                          std::to_string(fine.parent_vertex_count()) + " vertices");
  }
  std::vector<double> u(fine.vertex_count(), 0.0);
  std::copy(u_coarse.begin(), u_coarse.end(), u.begin());
  const auto parents = fine.new_vertex_parents();
  for (std::size_t k = 0; k < parents.size(); ++k) {
    u[u_coarse.size() + k] = 0.5 * (u_coarse[parents[k][0]] + u_coarse[parents[k][1]]);
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (fine.boundary_vertex(i)) u[i] = 0.0;
  }
  return u;
}

}  // namespace fpg
