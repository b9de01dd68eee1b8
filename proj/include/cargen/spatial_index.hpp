#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cargen/mesh.hpp"

namespace cargen {

/// Exact nearest-point queries against a fixed point cloud (kd-tree with
/// structure-of-arrays leaf buckets scanned by the SIMD kernels).
///
/// Distances are point-to-vertex. Results equal the exhaustive minimum over
/// the indexed points bit-for-bit. Immutable after construction; concurrent
/// queries are safe.
class VertexIndex3D {
 public:
  struct Hit {
    double distance;
    int point;  // index into the original point list
  };

  /// Throws InputError on an empty point set.
  explicit VertexIndex3D(std::span<const Vec3> points, std::size_t leaf_size = 16);

  std::size_t size() const noexcept { return xs_.size(); }

  double nearest_distance(const Vec3& query) const { return nearest(query).distance; }
  Hit nearest(const Vec3& query) const;

 private:
  struct Node {
    // Leaves have axis == -1 and cover [begin, end) of the reordered arrays.
    int axis = -1;
    double split = 0.0;
    int left = -1;
    int right = -1;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
  };

  int build(std::vector<int>& order, std::uint32_t begin, std::uint32_t end, std::span<const Vec3> points);
  void search(int node, const double q[3], double& best_d2, std::uint32_t& best_slot) const;

  std::size_t leaf_size_;
  std::vector<Node> nodes_;
  std::vector<double> xs_, ys_, zs_;
  std::vector<int> original_;  // slot -> original point index
};

/// Convenience: index over a mesh's vertices.
inline VertexIndex3D build_index(const TriMesh& mesh) { return VertexIndex3D(mesh.vertices()); }

}  // namespace cargen
