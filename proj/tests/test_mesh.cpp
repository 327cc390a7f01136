#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fpg/assembly.hpp"
#include "fpg/errors.hpp"
#include "fpg/mesh.hpp"

using namespace fpg;

namespace {

bool on_square_boundary(const Point& p) {
  return p.x == 0.0 || p.x == 1.0 || p.y == 0.0 || p.y == 1.0;
}

// Independent of Mesh's own topology: count incidences of sorted vertex pairs.
bool conforming_unit_square(const Mesh& m) {
  std::map<std::pair<int, int>, int> count;
  double area = 0.0;
  for (std::size_t t = 0; t < m.triangle_count(); ++t) {
    const auto& tri = m.triangle(t);
    const Point &a = m.vertex(tri[0]), &b = m.vertex(tri[1]), &c = m.vertex(tri[2]);
    const double signed_area = 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
    if (!(signed_area > 0.0)) return false;
    area += signed_area;
    for (int k = 0; k < 3; ++k) {
      int i = tri[k], j = tri[(k + 1) % 3];
      if (i > j) std::swap(i, j);
      ++count[{i, j}];
    }
  }
  for (const auto& [e, n] : count) {
    if (n > 2) return false;
    const Point &a = m.vertex(e.first), &b = m.vertex(e.second);
    const bool along_side = (a.x == b.x && (a.x == 0.0 || a.x == 1.0)) ||
                            (a.y == b.y && (a.y == 0.0 || a.y == 1.0));
    if (n == 1 && !along_side) return false;
    if (n == 2 && along_side) return false;
  }
  return std::abs(area - 1.0) < 1e-13;
}

double min_angle(const Mesh& m) {
  double a = 10.0;
  for (std::size_t t = 0; t < m.triangle_count(); ++t) a = std::min(a, m.min_angle(t));
  return a;
}

}  // namespace

TEST_CASE("initial meshes") {
  const Mesh p4 = Mesh::build_initial(MeshKind::parse("paper4"));
  CHECK(p4.vertex_count() == 5);
  CHECK(p4.triangle_count() == 4);
  CHECK(p4.interior_edge_count() == 4);
  CHECK(p4.dof_count() == 1);
  CHECK(p4.is_conforming());
  CHECK(conforming_unit_square(p4));

  const Mesh u1 = Mesh::build_initial(MeshKind::parse("uniform:1"));
  CHECK(u1.vertex_count() == 4);
  CHECK(u1.triangle_count() == 2);
  CHECK(u1.interior_edge_count() == 1);
  CHECK(u1.dof_count() == 0);

  const Mesh u2 = Mesh::build_initial(MeshKind::parse("uniform(2)"));
  CHECK(u2.vertex_count() == 9);
  CHECK(u2.triangle_count() == 8);
  CHECK(u2.dof_count() == 1);
  CHECK(conforming_unit_square(u2));

  CHECK(MeshKind::parse("uniform:7").to_string() == "uniform:7");
  CHECK(MeshKind::parse(MeshKind{}.to_string()) == MeshKind{});
  CHECK_THROWS_AS(MeshKind::parse("hexagon"), std::invalid_argument);
  CHECK_THROWS_AS(MeshKind::parse("uniform:0"), std::invalid_argument);

  for (std::size_t i = 0; i < u2.vertex_count(); ++i) {
    CHECK(u2.boundary_vertex(i) == on_square_boundary(u2.vertex(i)));
  }
}

TEST_CASE("diameters") {
  const Mesh right = Mesh::from_triangles({{0, 0}, {1, 0}, {0, 1}}, {{{0, 1, 2}}});
  CHECK(diameters(right).h_T[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(right.area(0) == doctest::Approx(0.5).epsilon(1e-15));

  const Mesh p4 = Mesh::build_initial(MeshKind{});
  const auto d = diameters(p4);
  for (double h : d.h_T) CHECK(h == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(d.h == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t e = 0; e < p4.edge_count(); ++e) {
    const auto& edge = p4.edge(e);
    if (!edge.on_boundary()) CHECK(d.h_E[e] == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
  }
}

TEST_CASE("peclet weights") {
  const Mesh p4 = Mesh::build_initial(MeshKind{});
  const Mesh fine = refine_uniform(p4);  // h_T = 1/2 after one bisection round
  const auto w1 = peclet_weights(fine, 1.0);
  for (std::size_t t = 0; t < fine.triangle_count(); ++t) {
    CHECK(w1.alpha_T[t] == doctest::Approx(std::min(1.0, fine.diameter(t))).epsilon(1e-15));
  }
  const auto wsmall = peclet_weights(fine, 1e-8);
  for (double a : wsmall.alpha_T) CHECK(a == 1.0);
  for (double a : wsmall.alpha_E) CHECK(a == 1.0);

  // h_E = 1e-5 at eps = 1e-8 gives 0.1
  const Mesh tiny = Mesh::from_triangles({{0, 0}, {1e-5, 0}, {0, 1e-5}}, {{{0, 1, 2}}});
  const auto wt = peclet_weights(tiny, 1e-8);
  bool found = false;
  for (std::size_t e = 0; e < tiny.edge_count(); ++e) {
    if (std::abs(tiny.edge_length(e) - 1e-5) < 1e-20) {
      CHECK(wt.alpha_E[e] == doctest::Approx(0.1).epsilon(1e-12));
      found = true;
    }
  }
  CHECK(found);
  CHECK_THROWS_AS(peclet_weights(p4, 0.0), std::domain_error);
  CHECK_THROWS_AS(peclet_weights(p4, -1.0), std::domain_error);
}

TEST_CASE("refine examples") {
  const Mesh u1 = Mesh::build_initial(MeshKind{MeshKind::Type::Uniform, 1});
  const std::vector<int> both{0, 1};
  const Mesh r = refine(u1, both);
  CHECK(r.triangle_count() == 4);
  CHECK(r.vertex_count() == 5);
  CHECK(conforming_unit_square(r));

  const Mesh same = refine(u1, std::vector<int>{});
  CHECK(same.vertex_count() == u1.vertex_count());
  CHECK(same.triangle_count() == u1.triangle_count());
  for (std::size_t t = 0; t < u1.triangle_count(); ++t) CHECK(same.triangle(t) == u1.triangle(t));

  const Mesh p4 = Mesh::build_initial(MeshKind{});
  for (int t = 0; t < 4; ++t) {
    const Mesh one = refine(p4, std::vector<int>{t});
    CHECK(one.is_conforming());
    CHECK(conforming_unit_square(one));
    for (std::size_t e = 0; e < one.edge_count(); ++e) {
      const auto& edge = one.edge(e);
      CHECK(edge.tri[0] >= 0);
    }
  }
  CHECK_THROWS_AS(refine(p4, std::vector<int>{4}), std::out_of_range);
  CHECK_THROWS_AS(refine(p4, std::vector<int>{-1}), std::out_of_range);
}

TEST_CASE("random refinement keeps conformity, nestedness and areas") {
  std::mt19937 rng(7);
  Mesh m = Mesh::build_initial(MeshKind{});
  for (int round = 0; round < 14; ++round) {
    std::vector<int> marked;
    std::bernoulli_distribution pick(0.2);
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
      if (pick(rng)) marked.push_back(static_cast<int>(t));
    }
    if (marked.empty()) marked.push_back(0);
    Mesh fine = refine(m, marked);
    REQUIRE(fine.is_refined());
    CHECK(fine.is_conforming());
    CHECK(conforming_unit_square(fine));
    CHECK(fine.vertex_count() > m.vertex_count());
    for (std::size_t i = 0; i < fine.vertex_count(); ++i) {
      CHECK(fine.boundary_vertex(i) == on_square_boundary(fine.vertex(i)));
    }
    std::vector<double> child_area(m.triangle_count(), 0.0);
    const auto parents = fine.parent_triangle();
    for (std::size_t t = 0; t < fine.triangle_count(); ++t) child_area[parents[t]] += fine.area(t);
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
      CHECK(std::abs(child_area[t] - m.area(t)) <= 1e-14 * m.area(t));
    }
    // marked triangles are split
    for (int t : marked) {
      const auto n_children = std::count(parents.begin(), parents.end(), t);
      CHECK(n_children >= 2);
    }
    // each child lies inside its parent: barycentres test
    for (std::size_t t = 0; t < fine.triangle_count(); ++t) {
      const auto& ft = fine.triangle(t);
      Point g{0, 0};
      for (int v : ft) {
        g.x += fine.vertex(v).x / 3.0;
        g.y += fine.vertex(v).y / 3.0;
      }
      const auto& pt = m.triangle(parents[t]);
      const Point &a = m.vertex(pt[0]), &b = m.vertex(pt[1]), &c = m.vertex(pt[2]);
      auto side = [](const Point& p, const Point& q, const Point& r) {
        return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
      };
      CHECK(side(a, b, g) > 0.0);
      CHECK(side(b, c, g) > 0.0);
      CHECK(side(c, a, g) > 0.0);
    }
    m = std::move(fine);
  }
}

TEST_CASE("shape regularity under repeated bisection") {
  for (const char* kind : {"paper4", "uniform:3"}) {
    Mesh m = Mesh::build_initial(MeshKind::parse(kind));
    const double initial = min_angle(m);
    for (int round = 0; round < 12; ++round) m = refine_uniform(m);
    CHECK(min_angle(m) >= initial / 2.0);
    CHECK(m.is_conforming());
  }
  // adaptive, corner-focused refinement
  Mesh m = Mesh::build_initial(MeshKind{});
  const double initial = min_angle(m);
  for (int round = 0; round < 30; ++round) {
    std::vector<int> marked;
    for (std::size_t t = 0; t < m.triangle_count(); ++t) {
      if (m.touches_boundary(t) && m.diameter(t) > 1e-3) marked.push_back(static_cast<int>(t));
    }
    if (marked.empty()) break;
    m = refine(m, marked);
  }
  CHECK(min_angle(m) >= initial / 2.0);
  CHECK(conforming_unit_square(m));
}

TEST_CASE("prolongation") {
  const Mesh coarse = Mesh::build_initial(MeshKind{MeshKind::Type::Uniform, 2});
  const Mesh fine = refine_uniform(coarse);

  const std::vector<double> zero(coarse.vertex_count(), 0.0);
  for (double v : prolongate(zero, fine)) CHECK(v == 0.0);

  std::vector<double> hat(coarse.vertex_count(), 0.0);
  hat[4] = 1.0;  // centre of uniform(2)
  const auto ph = prolongate(hat, fine);
  const auto parents = fine.new_vertex_parents();
  std::size_t halves = 0;
  for (std::size_t k = 0; k < parents.size(); ++k) {
    const auto& p = parents[k];
    const double v = ph[fine.parent_vertex_count() + k];
    if (p[0] == 4 || p[1] == 4) {
      CHECK(v == 0.5);
      ++halves;
    } else {
      CHECK(v == 0.0);
    }
  }
  CHECK(halves > 0);
  for (std::size_t i = 0; i < coarse.vertex_count(); ++i) CHECK(ph[i] == hat[i]);

  const auto affine = [](const Point& p) { return 0.3 + 2.0 * p.x - 1.25 * p.y; };
  // midpoint values along a chain of local refinements
  Mesh m = Mesh::build_initial(MeshKind{});
  std::vector<double> u = interpolate(m, affine);
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    if (m.boundary_vertex(i)) u[i] = 0.0;
  }
  for (int round = 0; round < 4; ++round) {
    std::vector<int> marked{0};
    const Mesh f = refine(m, marked);
    const auto pu = prolongate(u, f);
    for (std::size_t k = 0; k < f.new_vertex_parents().size(); ++k) {
      const auto& p = f.new_vertex_parents()[k];
      const std::size_t i = f.parent_vertex_count() + k;
      if (f.boundary_vertex(i)) {
        CHECK(pu[i] == 0.0);
      } else {
        CHECK(pu[i] == 0.5 * (u[p[0]] + u[p[1]]));
      }
    }
    m = f;
    u = pu;
  }

  // affine data is reproduced exactly away from the boundary
  const Mesh c4 = Mesh::build_initial(MeshKind{MeshKind::Type::Uniform, 4});
  std::vector<double> a4 = interpolate(c4, affine);
  const Mesh f4 = refine_uniform(c4);
  const auto pa = prolongate(a4, f4);
  for (std::size_t i = 0; i < f4.vertex_count(); ++i) {
    if (!f4.boundary_vertex(i)) CHECK(std::abs(pa[i] - affine(f4.vertex(i))) < 1e-15);
  }

  CHECK_THROWS_AS(prolongate(zero, coarse), StructuralError);
  CHECK_THROWS_AS(prolongate(std::vector<double>(3, 0.0), fine), StructuralError);
}

TEST_CASE("prolongation preserves the energy norm") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (double eps : {1.0, 1e-3}) {
    Mesh coarse = refine_uniform(refine_uniform(Mesh::build_initial(MeshKind{})));
    std::vector<double> u(coarse.vertex_count(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!coarse.boundary_vertex(i)) u[i] = dist(rng);
    }
    std::vector<int> marked{0, 3, 5};
    const Mesh fine = refine(coarse, marked);
    const auto pu = prolongate(u, fine);
    const auto Bc = SystemMatrices::assemble(coarse, eps).B;
    const auto Bf = SystemMatrices::assemble(fine, eps).B;
    const double ec = energy_norm(Bc, to_dofs(coarse, u));
    const double ef = energy_norm(Bf, to_dofs(fine, pu));
    CHECK(std::abs(ec - ef) <= 1e-12 * ec);
  }
}

TEST_CASE("mesh io round trip") {
  Mesh m = Mesh::build_initial(MeshKind{});
  m = refine(m, std::vector<int>{1, 2});
  std::stringstream s;
  write_mesh(s, m);
  const std::string text = s.str();
  CHECK(text.rfind("vertices " + std::to_string(m.vertex_count()) + " triangles " +
                       std::to_string(m.triangle_count()) + "\n",
                   0) == 0);
  const Mesh back = read_mesh(s);
  REQUIRE(back.vertex_count() == m.vertex_count());
  REQUIRE(back.triangle_count() == m.triangle_count());
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    CHECK(back.vertex(i).x == m.vertex(i).x);
    CHECK(back.vertex(i).y == m.vertex(i).y);
    CHECK(back.boundary_vertex(i) == m.boundary_vertex(i));
  }
  for (std::size_t t = 0; t < m.triangle_count(); ++t) CHECK(back.triangle(t) == m.triangle(t));

  std::stringstream bad("vertices 3 triangles 1\n0 0 1\n1 0 1\n");
  CHECK_THROWS(read_mesh(bad));

  std::stringstream sol;
  write_solution(sol, std::vector<double>{0.0, 0.5});
  CHECK(sol.str().find("1 0.5") != std::string::npos);

  std::stringstream vtk;
  write_vtk(vtk, m, std::vector<double>(m.vertex_count(), 0.0));
  CHECK(vtk.str().find("POINT_DATA " + std::to_string(m.vertex_count())) != std::string::npos);
}
