#include <doctest.h>

#include <numeric>

#include "cargen/curvature.hpp"
#include "cargen/error.hpp"
#include "cargen/fixtures.hpp"
#include "support.hpp"

using namespace cargen;

namespace {

double variance(const std::vector<double>& x) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double s = 0;
  for (double v : x) s += (v - mean) * (v - mean);
  return s / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("k-ring on a grid") {
  const TriMesh g = testing::flat_grid(10, 10, 1.0);
  const int center = 5 * 11 + 5;
  const auto r0 = k_ring(g, center, 0);
  CHECK(r0 == std::vector<int>{center});
  const auto r1 = k_ring(g, center, 1);
  CHECK(r1.front() == center);
  CHECK(r1.size() == 7);  // valence 6 in this triangulation
  const auto r2 = k_ring(g, center, 2);
  CHECK(r2.size() == 19);
}

TEST_CASE("sphere curvature is 1/r") {
  const TriMesh s = make_icosphere(10.0, 4);
  const CurvatureField f = principal_curvatures(s, 2);
  REQUIRE(f.kappa_min.size() == s.num_vertices());
  for (std::size_t v = 0; v < s.num_vertices(); ++v) {
    CHECK(f.kappa_min[v] <= f.kappa_max[v]);
    CHECK(f.kappa_min[v] == doctest::Approx(0.1).epsilon(0.05));
    CHECK(f.kappa_max[v] == doctest::Approx(0.1).epsilon(0.05));
  }
  const auto h = mean_curvature(f);
  for (double x : h) CHECK(x == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("inverted sphere is concave") {
  const TriMesh s = make_icosphere(10.0, 3);
  std::vector<Face> flipped;
  for (const Face& t : s.faces()) flipped.push_back({t[0], t[2], t[1]});
  const CurvatureField f = principal_curvatures(TriMesh(s.vertices(), flipped), 2);
  for (double k : f.kappa_max) CHECK(k == doctest::Approx(-0.1).epsilon(0.05));
}

TEST_CASE("plane has zero curvature") {
  const TriMesh g = testing::flat_grid(12, 12, 0.5);
  const CurvatureField f = principal_curvatures(g, 2);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    CHECK(std::abs(f.kappa_min[v]) < 1e-6);
    CHECK(std::abs(f.kappa_max[v]) < 1e-6);
  }
}

TEST_CASE("cylinder interior curvatures") {
  const TriMesh c = make_cylinder(5.0, 12.0, 48, 126, false);
  const CurvatureField f = principal_curvatures(c, 3);
  int checked = 0;
  for (int v = 0; v < static_cast<int>(c.num_vertices()); ++v) {
    if (std::abs(c.vertex(v).z()) > 4.0) continue;
    ++checked;
    CHECK(f.kappa_max[static_cast<std::size_t>(v)] == doctest::Approx(0.2).epsilon(0.1));
    CHECK(std::abs(f.kappa_min[static_cast<std::size_t>(v)]) < 0.01);
  }
  CHECK(checked > 1000);
}

TEST_CASE("scale covariance and rigid invariance") {
  const TriMesh s = make_icosphere(10.0, 3);
  const CurvatureField base = principal_curvatures(s, 2);
  const CurvatureField scaled = principal_curvatures(testing::transformed(s, Eigen::Matrix3d::Identity(), Vec3::Zero(), 2.5), 2);
  const CurvatureField moved = principal_curvatures(testing::transformed(s, testing::some_rotation(), Vec3(4, -3, 9)), 2);
  for (std::size_t v = 0; v < s.num_vertices(); ++v) {
    CHECK(scaled.kappa_max[v] * 2.5 == doctest::Approx(base.kappa_max[v]).epsilon(1e-6));
    CHECK(scaled.kappa_min[v] * 2.5 == doctest::Approx(base.kappa_min[v]).epsilon(1e-6));
    CHECK(moved.kappa_max[v] == doctest::Approx(base.kappa_max[v]).epsilon(1e-7));
    CHECK(moved.kappa_min[v] == doctest::Approx(base.kappa_min[v]).epsilon(1e-7));
  }
}

TEST_CASE("larger neighborhoods damp noise") {
  const TriMesh s = make_icosphere(10.0, 5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 0.5);  // amplitude 0.05 r
  std::vector<Vec3> noisy;
  for (const Vec3& p : s.vertices()) noisy.push_back(p * (1.0 + u(rng) / 10.0));
  const TriMesh n(std::move(noisy), s.faces());
  const double v10 = variance(mean_curvature(principal_curvatures(n, 10)));
  const double v20 = variance(mean_curvature(principal_curvatures(n, 20)));
  CHECK(v20 < v10);
}

TEST_CASE("sparse neighborhoods are enlarged, hopeless ones fail") {
  const TriMesh g = testing::flat_grid(4, 4, 1.0);
  const CurvatureField f = principal_curvatures(g, 1);
  CHECK_FALSE(f.enlarged.empty());
  CHECK(std::find(f.enlarged.begin(), f.enlarged.end(), 0) != f.enlarged.end());

  const TriMesh tri({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
  CHECK_THROWS_AS(principal_curvatures(tri, 1), GeometryError);
  CHECK_THROWS_AS(principal_curvatures(g, 0), InputError);
}

TEST_CASE("face curvature averages the chosen measure") {
  const TriMesh m({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
  CurvatureField f;
  f.kappa_min = {0.0, 0.1, 0.2};
  f.kappa_max = {0.0, 0.1, 0.2};
  CHECK(face_curvature(m, f, CurvatureMeasure::mean)[0] == doctest::Approx(0.1));
  f.kappa_min = {-0.1, -0.1, -0.1};
  f.kappa_max = {0.1, 0.1, 0.1};
  CHECK(mean_curvature(f) == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(face_curvature(m, f, CurvatureMeasure::max)[0] == doctest::Approx(0.1));
  CHECK(face_curvature(m, f, CurvatureMeasure::min)[0] == doctest::Approx(-0.1));

  const TriMesh s = make_icosphere(10.0, 2);
  const CurvatureField sf = principal_curvatures(s, 2);
  const auto h = mean_curvature(sf);
  const auto fc = face_curvature(s, sf, CurvatureMeasure::mean);
  for (int i = 0; i < static_cast<int>(s.num_faces()); ++i) {
    const Face& t = s.face(i);
    const double expect = (h[static_cast<std::size_t>(t[0])] + h[static_cast<std::size_t>(t[1])] + h[static_cast<std::size_t>(t[2])]) / 3.0;
    CHECK(fc[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("measure names") {
  CHECK(parse_curvature_measure("mean") == CurvatureMeasure::mean);
  CHECK(to_string(CurvatureMeasure::max) == "max");
  CHECK_THROWS_AS(parse_curvature_measure("gauss"), InputError);
}
