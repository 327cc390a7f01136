#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fpg/adaptive.hpp"
#include "fpg/contraction.hpp"
#include "fpg/errors.hpp"
#include "fpg/problems.hpp"

using namespace fpg;

namespace {

Mesh uniform(int n) { return Mesh::build_initial(MeshKind{MeshKind::Type::Uniform, n}); }

std::vector<double> centre_hat(const Mesh& m) {
  std::vector<double> u(m.vertex_count(), 0.0);
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    if (m.vertex(i).x == 0.5 && m.vertex(i).y == 0.5) u[i] = 1.0;
  }
  return u;
}

AdaptiveConfig paper_config(double eps, std::size_t max_dof) {
  AdaptiveConfig c;
  c.problem = problem_registry("paper-ex2", eps);
  c.max_dof = max_dof;
  return c;
}

// Smallest subset size reaching the bulk, by exhaustive search.
std::size_t brute_force_min(const std::vector<double>& v, double fraction) {
  double total = 0.0;
  for (double x : v) total += x;
  const std::size_t n = v.size();
  std::size_t best = n + 1;
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    double s = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1U << i)) {
        s += v[i];
        ++k;
      }
    }
    if (s >= fraction * total) best = std::min(best, k);
  }
  return best;
}

}  // namespace

TEST_CASE("fixed-point step examples") {
  const Mesh m = uniform(4);
  const auto zero_problem = problem_registry("zero", 1.0);
  const auto sys1 = SystemMatrices::assemble(m, 1.0);
  const std::vector<double> z(m.vertex_count(), 0.0);
  for (double v : fixed_point_step(m, zero_problem, sys1, z, 1.0).u_next) CHECK(v == 0.0);

  // linear f = -u + g: Galerkin solution by one direct solve
  const Mesh f = refine_uniform(uniform(6));
  for (double eps : {1.0, 1e-3}) {
    const auto p = problem_registry("linear-manufactured", eps);
    const auto sys = SystemMatrices::assemble(f, eps);
    const std::vector<double> zf(f.vertex_count(), 0.0);
    const auto uG = from_dofs(f, cg_solve(sys.B, load_vector(f, p, zf), 1e-14).x);
    const auto params = make_params(p.c(), p.L());

    std::vector<double> u(f.vertex_count(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!f.boundary_vertex(i)) u[i] = std::cos(3.0 * static_cast<double>(i));
    }
    auto err = [&](const std::vector<double>& w) {
      std::vector<double> d(w.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = w[i] - uG[i];
      return energy_norm(sys.B, to_dofs(f, d));
    };
    const auto next = fixed_point_step(f, p, sys, u, params.t, 1e-13);
    CHECK(err(next.u_next) <= (params.alpha + 0.01) * err(u));

    // a damped step still contracts with its own factor
    const double t = 0.5;
    const double alpha = contraction_factor(p.c(), p.L(), t);
    std::vector<double> w = u;
    for (int k = 0; k < 5; ++k) {
      const auto s = fixed_point_step(f, p, sys, w, t, 1e-13);
      CHECK(err(s.u_next) <= (alpha + 0.01) * err(w));
      w = s.u_next;
    }
    // converged iterate is stationary
    for (int k = 0; k < 60; ++k) w = fixed_point_step(f, p, sys, w, t, 1e-13).u_next;
    const auto again = fixed_point_step(f, p, sys, w, t, 1e-13).u_next;
    std::vector<double> upd(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) upd[i] = again[i] - w[i];
    CHECK(norm2(upd) <= 1e-9);

    // stationarity at the discrete solution
    const auto st = fixed_point_step(f, p, sys, uG, params.t, 1e-10).u_next;
    std::vector<double> diff(uG.size());
    for (std::size_t i = 0; i < uG.size(); ++i) diff[i] = st[i] - uG[i];
    CHECK(norm2(diff) <= 10.0 * 1e-10 * norm2(uG));
    for (std::size_t i = 0; i < st.size(); ++i) {
      if (f.boundary_vertex(i)) CHECK(st[i] == 0.0);
    }
  }
  CHECK_THROWS_AS(fixed_point_step(m, zero_problem, sys1, std::vector<double>(3, 0.0), 1.0), DimensionError);
  CHECK_THROWS_AS(fixed_point_step(uniform(3), zero_problem, sys1, std::vector<double>(16, 0.0), 1.0),
                  DimensionError);
}

TEST_CASE("decide action") {
  CHECK(decide_action(0.1, 1.0, 0.5) == Action::Refine);
  CHECK(decide_action(1.0, 1.0, 0.5) == Action::Iterate);
  CHECK(decide_action(0.5, 1.0, 0.5) == Action::Iterate);
  CHECK(decide_action(0.0, 0.0, 0.5) == Action::Iterate);
  CHECK(to_string(Action::Refine) == "refine");
  CHECK(to_string(Action::Iterate) == "iterate");
  CHECK(to_string(Action::Stop) == "stop");
}

TEST_CASE("doerfler marking") {
  const std::vector<double> sq{16, 9, 4, 1};
  CHECK(dorfler_mark(sq, 0.5) == std::vector<int>{0});
  CHECK(brute_force_min(sq, 0.5) == 1);

  const std::vector<double> with_zero{0.0, 2.0, 0.0, 1.0};
  CHECK(dorfler_mark(with_zero, 0.999999) == std::vector<int>{1, 3});

  const std::vector<double> equal{1, 1, 1, 1};
  CHECK(dorfler_mark(equal, 0.5) == std::vector<int>{0, 1});

  const std::vector<double> ties{1, 3, 3, 2};
  CHECK(dorfler_mark(ties, 0.4) == std::vector<int>{1, 2});

  CHECK_THROWS_AS(dorfler_mark(std::vector<double>{}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(dorfler_mark(std::vector<double>{1.0, -1.0}, 0.5), std::invalid_argument);

  std::mt19937 rng(12);
  std::uniform_int_distribution<int> size(1, 10);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(static_cast<std::size_t>(size(rng)));
    for (auto& x : v) x = value(rng);
    const double theta = frac(rng);
    const auto marked = dorfler_mark(v, theta);
    CHECK(marked.size() == brute_force_min(v, theta));
    double total = 0.0, s = 0.0;
    for (double x : v) total += x;
    for (int i : marked) s += v[i];
    CHECK(s >= theta * total);
  }
}

TEST_CASE("config validation") {
  AdaptiveConfig c = paper_config(1e-3, 100);
  CHECK_NOTHROW(c.validate());
  c.theta = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = paper_config(1e-3, 100);
  c.marking_fraction = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = paper_config(1e-3, 100);
  c.max_dof = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = paper_config(1e-3, 100);
  c.rtol_linear = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  const Mesh m = Mesh::build_initial(MeshKind{});
  std::vector<double> bad(m.vertex_count(), 0.0);
  bad[0] = 1.0;
  CHECK_THROWS_AS(run(paper_config(1e-3, 100), m, bad), std::invalid_argument);
  CHECK_THROWS_AS(run(paper_config(1e-3, 100), m, std::vector<double>(2, 0.0)), DimensionError);
}

TEST_CASE("degenerate run") {
  AdaptiveConfig c;
  c.problem = problem_registry("zero", 1e-7);
  const Mesh m = Mesh::build_initial(MeshKind{});
  const auto r = run(c, m, std::vector<double>(m.vertex_count(), 0.0));
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].eta_fp == 0.0);
  CHECK(r.records[0].eta_fem == 0.0);
  CHECK(r.records[0].total == 0.0);
  CHECK(r.records[0].action == Action::Stop);
  CHECK(r.reason == StopReason::BoundFloor);
  CHECK(r.converged);
}

TEST_CASE("run invariants") {
  for (double eps : {1.0, 1e-4, 1e-7}) {
    const AdaptiveConfig c = paper_config(eps, 1500);
    const Mesh m = Mesh::build_initial(MeshKind{});

    std::vector<std::size_t> vertices_seen;
    bool boundary_ok = true;
    const auto observer = [&](const Mesh& mesh, std::span<const double> u, const AdaptiveRecord&) {
      vertices_seen.push_back(mesh.vertex_count());
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (mesh.boundary_vertex(i) && u[i] != 0.0) boundary_ok = false;
      }
    };
    const auto r = run(c, m, centre_hat(m), observer);
    CHECK(boundary_ok);
    CHECK(r.converged);
    CHECK(r.reason == StopReason::DofBudget);
    CHECK(r.mesh.dof_count() > c.max_dof);
    for (std::size_t i = 0; i < r.u.size(); ++i) {
      if (r.mesh.boundary_vertex(i)) CHECK(r.u[i] == 0.0);
    }

    std::size_t refines = 0, iterates = 0;
    for (std::size_t k = 0; k < r.records.size(); ++k) {
      const auto& rec = r.records[k];
      CHECK(rec.step == k);
      CHECK(rec.wall_ms == 0.0);
      CHECK(rec.total == doctest::Approx(rec.eta_fem + rec.eta_fp).epsilon(1e-15));
      if (k > 0) CHECK(rec.dof >= r.records[k - 1].dof);
      if (rec.action == Action::Refine) {
        ++refines;
        CHECK(rec.eta_fp < c.theta * rec.eta_fem);
        REQUIRE(k + 1 < vertices_seen.size());
        CHECK(vertices_seen[k + 1] > vertices_seen[k]);
      } else if (rec.action == Action::Iterate) {
        ++iterates;
        CHECK_FALSE(rec.eta_fp < c.theta * rec.eta_fem);
        REQUIRE(k + 1 < vertices_seen.size());
        CHECK(vertices_seen[k + 1] == vertices_seen[k]);
      } else {
        CHECK(k + 1 == r.records.size());
        CHECK(rec.eta_fp < c.theta * rec.eta_fem);
      }
      if (eps <= 1e-4) CHECK(rec.cg_iters <= 200);
    }
    CHECK(refines >= 5);
    CHECK(iterates >= 1);

    const auto again = run(c, m, centre_hat(m));
    REQUIRE(again.records.size() == r.records.size());
    for (std::size_t k = 0; k < r.records.size(); ++k) {
      CHECK(again.records[k].total == r.records[k].total);
      CHECK(again.records[k].eta_fp == r.records[k].eta_fp);
      CHECK(again.records[k].dof == r.records[k].dof);
      CHECK(again.records[k].action == r.records[k].action);
    }
    CHECK(again.u == r.u);
  }
}

TEST_CASE("other stopping rules") {
  const Mesh m = Mesh::build_initial(MeshKind{});
  AdaptiveConfig c = paper_config(1e-2, 100000);
  c.max_outer = 7;
  const auto capped = run(c, m, centre_hat(m));
  CHECK(capped.records.size() == 7);
  CHECK_FALSE(capped.converged);
  CHECK(capped.reason == StopReason::MaxOuter);

  c = paper_config(1e-2, 100000);
  c.h_min = 0.2;
  const auto coarse = run(c, m, centre_hat(m));
  CHECK(coarse.converged);
  CHECK(coarse.reason == StopReason::MeshSize);
  CHECK(coarse.mesh.mesh_size() < 0.2);
  CHECK(coarse.records.back().action == Action::Stop);

  c = paper_config(1e-2, 200);
  c.uniform_refinement = true;
  std::size_t last_triangles = 0;
  const auto uni = run(c, m, centre_hat(m), [&](const Mesh& mesh, std::span<const double>, const AdaptiveRecord& rec) {
    if (rec.action == Action::Refine) last_triangles = mesh.triangle_count();
  });
  CHECK(uni.converged);
  CHECK(uni.mesh.triangle_count() >= 2 * last_triangles);
  CHECK(to_string(StopReason::DofBudget) == "dof-budget");
}
