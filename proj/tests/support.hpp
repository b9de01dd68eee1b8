#pragma once

// Brute-force reference computations shared by the tests. They deliberately
// avoid the library's acceleration structures and topology tables.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cargen/mesh.hpp"

namespace testing {

using cargen::Face;
using cargen::TriMesh;
using cargen::Vec3;

inline double exhaustive_nearest(std::span<const Vec3> points, const Vec3& q) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3& p : points) best = std::min(best, (q - p).norm());
  return best;
}

inline Vec3 barycenter(const TriMesh& m, int f) {
  const Face& t = m.face(f);
  return (m.vertex(t[0]) + m.vertex(t[1]) + m.vertex(t[2])) / 3.0;
}

inline double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double t = std::clamp((p - a).dot(d) / d.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * d)).norm();
}

/// Plane projection when it lands inside the triangle, else the nearest edge.
inline double point_triangle_distance(const Vec3& p, const TriMesh& m, int f) {
  const Face& t = m.face(f);
  const Vec3 &a = m.vertex(t[0]), &b = m.vertex(t[1]), &c = m.vertex(t[2]);
  const Vec3 n = (b - a).cross(c - a);
  const Vec3 q = p - n * ((p - a).dot(n) / n.squaredNorm());
  const bool inside = (b - a).cross(q - a).dot(n) >= 0 && (c - b).cross(q - b).dot(n) >= 0 &&
                      (a - c).cross(q - c).dot(n) >= 0;
  if (inside) return (p - q).norm();
  return std::min({point_segment_distance(p, a, b), point_segment_distance(p, b, c), point_segment_distance(p, c, a)});
}

inline std::vector<int> exhaustive_distance_filter(const TriMesh& primary, const TriMesh& secondary, double delta) {
  std::vector<int> out;
  for (int f = 0; f < static_cast<int>(primary.num_faces()); ++f) {
    if (exhaustive_nearest(secondary.vertices(), barycenter(primary, f)) <= delta) out.push_back(f);
  }
  return out;
}

/// Edge -> incident faces, keyed by sorted vertex pair.
inline std::map<std::pair<int, int>, std::vector<int>> edge_map(const TriMesh& m) {
  std::map<std::pair<int, int>, std::vector<int>> edges;
  for (int f = 0; f < static_cast<int>(m.num_faces()); ++f) {
    const Face& t = m.face(f);
    for (int k = 0; k < 3; ++k) {
      const int a = t[static_cast<std::size_t>(k)], b = t[static_cast<std::size_t>((k + 1) % 3)];
      edges[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  }
  return edges;
}

/// Faces sharing an edge with f, computed from the edge map.
inline std::vector<std::vector<int>> face_adjacency(const TriMesh& m) {
  std::vector<std::vector<int>> adj(m.num_faces());
  for (const auto& [e, fs] : edge_map(m)) {
    for (int a : fs)
      for (int b : fs)
        if (a != b) adj[static_cast<std::size_t>(a)].push_back(b);
  }
  return adj;
}

/// Number of sides of f whose other face is outside `in` (or absent).
inline int open_sides(const TriMesh& m, const std::map<std::pair<int, int>, std::vector<int>>& edges,
                      const std::vector<char>& in, int f) {
  int n = 0;
  const Face& t = m.face(f);
  for (int k = 0; k < 3; ++k) {
    const int a = t[static_cast<std::size_t>(k)], b = t[static_cast<std::size_t>((k + 1) % 3)];
    const auto& fs = edges.at({std::min(a, b), std::max(a, b)});
    bool shared = false;
    for (int g : fs)
      if (g != f && in[static_cast<std::size_t>(g)]) shared = true;
    if (!shared) ++n;
  }
  return n;
}

/// Flood fill from `seed` through edge-adjacent faces accepted by `admit`.
template <class Admit>
std::vector<char> flood_fill(const TriMesh& m, const std::vector<char>& seed, Admit&& admit) {
  const auto adj = face_adjacency(m);
  std::vector<char> in = seed;
  std::vector<int> stack;
  for (std::size_t f = 0; f < in.size(); ++f)
    if (in[f]) stack.push_back(static_cast<int>(f));
  while (!stack.empty()) {
    const int f = stack.back();
    stack.pop_back();
    for (int g : adj[static_cast<std::size_t>(f)]) {
      if (!in[static_cast<std::size_t>(g)] && admit(g)) {
        in[static_cast<std::size_t>(g)] = 1;
        stack.push_back(g);
      }
    }
  }
  return in;
}

inline std::vector<int> mask_to_list(const std::vector<char>& mask) {
  std::vector<int> out;
  for (std::size_t f = 0; f < mask.size(); ++f)
    if (mask[f]) out.push_back(static_cast<int>(f));
  return out;
}

/// Row-major grid of (nx+1) x (ny+1) vertices in the z = 0 plane, two faces per cell.
inline TriMesh flat_grid(int nx, int ny, double step) {
  std::vector<Vec3> v;
  std::vector<Face> f;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) v.emplace_back(i * step, j * step, 0.0);
  const auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriMesh(std::move(v), std::move(f));
}

inline TriMesh transformed(const TriMesh& m, const Eigen::Matrix3d& r, const Vec3& t, double scale = 1.0) {
  std::vector<Vec3> v;
  v.reserve(m.num_vertices());
  for (const Vec3& p : m.vertices()) v.push_back(scale * (r * p) + t);
  return TriMesh(std::move(v), m.faces());
}

inline Eigen::Matrix3d some_rotation() {
  return (Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized()) * Eigen::AngleAxisd(-1.1, Vec3::UnitZ()))
      .toRotationMatrix();
}

/// Per-test scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cargen_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
