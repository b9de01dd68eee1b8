#include <doctest.h>

#include "cargen/error.hpp"
#include "cargen/fixtures.hpp"
#include "cargen/spatial_index.hpp"
#include "support.hpp"

using namespace cargen;

TEST_CASE("empty point set is rejected") {
  const std::vector<Vec3> none;
  CHECK_THROWS_AS(VertexIndex3D{none}, InputError);
}

TEST_CASE("single point") {
  const std::vector<Vec3> one{{1, 2, 3}};
  const VertexIndex3D idx(one);
  CHECK(idx.nearest_distance({1, 2, 3}) == 0.0);
  CHECK(idx.nearest_distance({1, 2, 8}) == 5.0);
  CHECK(idx.nearest({-4, 2, 3}).point == 0);
}

TEST_CASE("cube corners") {
  std::vector<Vec3> corners;
  for (int i = 0; i < 8; ++i) corners.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  const VertexIndex3D idx(corners);
  CHECK(idx.size() == 8);
  for (const Vec3& c : corners) CHECK(idx.nearest_distance(c) == 0.0);
  const Vec3 q(0, 0, 5);
  CHECK(idx.nearest_distance(q) == testing::exhaustive_nearest(corners, q));
  CHECK(idx.nearest_distance(q) == 4.0);
}

TEST_CASE("random queries equal the exhaustive minimum") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-20, 20);
  std::vector<Vec3> pts(10000);
  for (Vec3& p : pts) p = Vec3(u(rng), u(rng), u(rng));
  for (std::size_t leaf : {1u, 4u, 16u, 64u}) {
    const VertexIndex3D idx(pts, leaf);
    for (int i = 0; i < 1000; ++i) {
      const Vec3 q(1.5 * u(rng), 1.5 * u(rng), 1.5 * u(rng));
      const auto hit = idx.nearest(q);
      const double expect = testing::exhaustive_nearest(pts, q);
      CHECK(hit.distance == expect);
      CHECK((pts[static_cast<std::size_t>(hit.point)] - q).norm() == expect);
    }
  }
}

TEST_CASE("duplicate and collinear points") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 200; ++i) pts.emplace_back(i % 7, 0, 0);
  const VertexIndex3D idx(pts);
  for (double x = -2; x < 9; x += 0.37) {
    const Vec3 q(x, 0.5, -0.25);
    CHECK(idx.nearest_distance(q) == testing::exhaustive_nearest(pts, q));
  }
}

TEST_CASE("mesh vertex cloud spot checks") {
  const TriMesh bone = make_icosphere(25.0, 6);
  const VertexIndex3D idx = build_index(bone);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 200; ++i) {
    const Vec3 q(u(rng), u(rng), u(rng));
    CHECK(idx.nearest_distance(q) == testing::exhaustive_nearest(bone.vertices(), q));
  }
}

TEST_CASE("rigid motion leaves distances unchanged") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<Vec3> pts(2000);
  for (Vec3& p : pts) p = Vec3(u(rng), u(rng), u(rng));
  const Eigen::Matrix3d r = testing::some_rotation();
  const Vec3 t(3, -7, 11);
  std::vector<Vec3> moved;
  for (const Vec3& p : pts) moved.push_back(r * p + t);
  const VertexIndex3D a(pts), b(moved);
  for (int i = 0; i < 300; ++i) {
    const Vec3 q(u(rng), u(rng), u(rng));
    const double da = a.nearest_distance(q), db = b.nearest_distance(r * q + t);
    CHECK(std::abs(da - db) <= 1e-9 * std::max(1.0, da));
  }
}
