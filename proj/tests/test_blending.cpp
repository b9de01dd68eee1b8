#include <doctest.h>

#include <functional>

#include "cargen/blending.hpp"
#include "cargen/error.hpp"
#include "cargen/fixtures.hpp"
#include "cargen/mesh_ops.hpp"
#include "dense_blend.hpp"

using namespace cargen;
using namespace testing;

namespace {

VertexScalarField heights_by(const TriMesh& m, const std::function<double(const Vec3&)>& h) {
  VertexScalarField out(m.num_vertices());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = h(m.vertices()[v]);
  return out;
}

}  // namespace

TEST_CASE("operators match dense hat-function assembly") {
  const Annulus a = make_annulus();
  const TriMesh& m = a.disk;
  const Eigen::MatrixXd l = Eigen::MatrixXd(cotangent_stiffness(m));
  const Eigen::MatrixXd ld = dense_stiffness(m);
  CHECK((l - ld).lpNorm<Eigen::Infinity>() < 1e-12 * ld.lpNorm<Eigen::Infinity>());
  CHECK((lumped_mass(m) - dense_mass(m)).lpNorm<Eigen::Infinity>() < 1e-12);
  const Eigen::MatrixXd k = Eigen::MatrixXd(bilaplacian(m));
  const Eigen::MatrixXd kd = dense_bilaplacian(m);
  CHECK((k - kd).lpNorm<Eigen::Infinity>() < 1e-10 * kd.lpNorm<Eigen::Infinity>());
  // Constants are in the kernel.
  CHECK((l * Eigen::VectorXd::Ones(l.rows())).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("problem assembly on an annulus") {
  const Annulus a = make_annulus();
  const auto h = heights_by(a.disk, [](const Vec3&) { return 1.0; });
  const BlendProblem p = assemble_blend_problem(a.all, a.inner, h);
  CHECK(p.ring.size() == a.all.size() - a.inner.size());
  CHECK(p.ring.boundary_loops().size() == 2);
  REQUIRE(p.upper_bound.has_value());
  CHECK(*p.upper_bound == 1.0);
  std::set<int> inner, outer;
  for (const auto& c : p.inner) inner.insert(c.vertex);
  for (const auto& c : p.outer) {
    outer.insert(c.vertex);
    CHECK(c.value == 0.0);
    CHECK(a.disk.vertex(c.vertex).norm() == doctest::Approx(10.0));
  }
  for (int v : inner) CHECK_FALSE(outer.count(v));
  // Every ring boundary vertex carries exactly one constraint.
  for (int v : p.ring.boundary_vertices()) CHECK(inner.count(v) + outer.count(v) == 1);
  CHECK_FALSE(assemble_blend_problem(a.all, a.inner, h, false).upper_bound.has_value());
}

TEST_CASE("unbounded solve equals the dense oracle") {
  const Annulus a = make_annulus();
  for (const auto& fn : std::vector<std::function<double(const Vec3&)>>{
           [](const Vec3&) { return 1.0; },
           [](const Vec3& p) { return 1.0 + 0.3 * p.x() / 10.0 + 0.2 * std::sin(p.y()); }}) {
    const BlendProblem p = assemble_blend_problem(a.all, a.inner, heights_by(a.disk, fn), false);
    const BlendSolution s = solve_biharmonic(p);
    REQUIRE(s.vertex == p.ring_mesh.source_vertex);
    const auto fixed = local_constraints(p);
    const Eigen::VectorXd oracle = dense_solve(dense_bilaplacian(p.ring_mesh.mesh), fixed);
    CHECK(rel_diff(as_vector(s.weight), oracle) < 1e-8);
    for (const auto& [i, v] : fixed) CHECK(std::abs(s.weight[static_cast<std::size_t>(i)] - v) <= 1e-9);
    CHECK(s.report.active_bounds == 0);
    CHECK(s.report.residual < 1e-10);
  }
}

TEST_CASE("constant inner height stays within [0, h] without bounds") {
  const Annulus a = make_annulus();
  const BlendProblem p = assemble_blend_problem(a.all, a.inner, heights_by(a.disk, [](const Vec3&) { return 0.8; }), false);
  const BlendSolution s = solve_biharmonic(p);
  for (double w : s.weight) {
    CHECK(w >= -1e-9);
    CHECK(w <= 0.8 + 1e-9);
  }
}

TEST_CASE("bounded solve satisfies KKT and matches the dense oracle on its active set") {
  const Annulus a = make_annulus(4.0);
  const auto h = heights_by(a.disk, lobed_height);
  const BlendProblem p = assemble_blend_problem(a.all, a.inner, h, true);
  REQUIRE(p.upper_bound.has_value());
  const double ub = *p.upper_bound;
  const BlendSolution s = solve_biharmonic(p);
  const BlendSolution loose = solve_biharmonic(assemble_blend_problem(a.all, a.inner, h, false));
  const double lo = *std::min_element(loose.weight.begin(), loose.weight.end());
  const double hi = *std::max_element(loose.weight.begin(), loose.weight.end());
  MESSAGE("unbounded range [" << lo << ", " << hi << "], active bounds " << s.report.active_bounds);
  CHECK((lo < 0.0 || hi > ub));
  CHECK(s.report.active_bounds > 0);

  const auto fixed = local_constraints(p);
  for (double w : s.weight) {
    CHECK(w >= 0.0);
    CHECK(w <= ub);
  }
  for (const auto& [i, v] : fixed) CHECK(std::abs(s.weight[static_cast<std::size_t>(i)] - v) <= 1e-9);

  const Eigen::MatrixXd k = dense_bilaplacian(p.ring_mesh.mesh);
  const Eigen::VectorXd w = as_vector(s.weight);
  const KktReport r = kkt(k, w, fixed, ub);
  CHECK(r.max_free_gradient < 1e-8);
  CHECK(r.worst_bound_violation < 1e-8);
  const auto& active = r.active;
  CHECK(rel_diff(w, dense_solve(k, active)) < 1e-8);
}

TEST_CASE("linearity, zero data and minimal energy") {
  const Annulus a = make_annulus();
  const auto h = heights_by(a.disk, [](const Vec3& p) { return 1.0 + 0.25 * std::cos(p.x()); });
  const BlendProblem p = assemble_blend_problem(a.all, a.inner, h, false);
  const BlendSolution s = solve_biharmonic(p);

  VertexScalarField h3 = h;
  for (double& x : h3) x *= 3.0;
  const BlendSolution s3 = solve_biharmonic(assemble_blend_problem(a.all, a.inner, h3, false));
  CHECK(rel_diff(as_vector(s3.weight), 3.0 * as_vector(s.weight)) < 1e-9);

  const BlendSolution z = solve_biharmonic(
      assemble_blend_problem(a.all, a.inner, VertexScalarField(a.disk.num_vertices(), 0.0), true));
  for (double w : z.weight) CHECK(w == 0.0);

  const double e0 = blend_energy(p, s.weight);
  const auto fixed = local_constraints(p);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 0.05);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w = s.weight;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (!fixed.count(static_cast<int>(i))) w[i] += n(rng);
    CHECK(blend_energy(p, w) >= e0);
  }
}

TEST_CASE("invalid problems") {
  const Annulus a = make_annulus();
  const auto h = heights_by(a.disk, [](const Vec3&) { return 1.0; });
  SUBCASE("negative height") {
    auto bad = h;
    for (int v : a.inner.vertices()) bad[static_cast<std::size_t>(v)] = -1.0;
    CHECK_THROWS_AS(assemble_blend_problem(a.all, a.inner, bad), InputError);
  }
  SUBCASE("no ring") { CHECK_THROWS_AS(assemble_blend_problem(a.all, a.all, h), GeometryError); }
  SUBCASE("vertex in both constraint sets") {
    BlendProblem p = assemble_blend_problem(a.all, a.inner, h);
    p.inner.push_back({p.outer.front().vertex, 1.0});
    CHECK_THROWS_AS(p.validate(), GeometryError);
    CHECK_THROWS_AS(solve_biharmonic(p), GeometryError);
  }
  SUBCASE("ring boundary vertex without constraint") {
    BlendProblem p = assemble_blend_problem(a.all, a.inner, h);
    p.outer.pop_back();
    CHECK_THROWS(p.validate());
  }
  SUBCASE("subset outside the region") {
    const FaceSelection half(a.disk, {0, 1, 2});
    CHECK_THROWS(assemble_blend_problem(half, a.inner, h));
  }
}

TEST_CASE("applying weights") {
  const Annulus a = make_annulus();
  const auto normals = vertex_normals(a.disk);
  const BlendProblem p = assemble_blend_problem(a.all, a.inner, heights_by(a.disk, [](const Vec3&) { return 0.0; }));
  BlendSolution s = solve_biharmonic(p);
  const TriMesh flat = apply_blend(a.disk, p.ring, s, normals);
  for (std::size_t i = 0; i < flat.num_vertices(); ++i) CHECK(flat.vertices()[i].z() == 0.0);

  for (double& w : s.weight) w = 0.7;
  const TriMesh lifted = apply_blend(a.disk, p.ring, s, normals);
  const TriMesh copy = extract_submesh(p.ring).mesh;
  REQUIRE(lifted.num_vertices() == copy.num_vertices());
  for (std::size_t i = 0; i < lifted.num_vertices(); ++i) {
    CHECK(lifted.vertices()[i].z() == 0.7);
    CHECK(lifted.vertices()[i].head<2>() == copy.vertices()[i].head<2>());
  }
  const auto field = s.scatter(a.disk.num_vertices());
  for (int v : a.inner.vertices())
    if (std::find(s.vertex.begin(), s.vertex.end(), v) == s.vertex.end()) CHECK(field[static_cast<std::size_t>(v)] == 0.0);
}
