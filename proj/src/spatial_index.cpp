#include "cargen/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cargen/error.hpp"
#include "cargen/simd.hpp"

namespace cargen {

VertexIndex3D::VertexIndex3D(std::span<const Vec3> points, std::size_t leaf_size)
    : leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (points.empty()) throw InputError("cannot build a spatial index over an empty point set");
  std::vector<int> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  nodes_.reserve(2 * points.size() / leaf_size_ + 1);
  build(order, 0, static_cast<std::uint32_t>(points.size()), points);

  xs_.resize(points.size());
  ys_.resize(points.size());
  zs_.resize(points.size());
  original_ = order;
  for (std::size_t s = 0; s < order.size(); ++s) {
    const Vec3& p = points[static_cast<std::size_t>(order[s])];
    xs_[s] = p.x();
    ys_[s] = p.y();
    zs_[s] = p.z();
  }
}

int VertexIndex3D::build(std::vector<int>& order, std::uint32_t begin, std::uint32_t end,
                         std::span<const Vec3> points) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  nodes_[static_cast<std::size_t>(id)].begin = begin;
  nodes_[static_cast<std::size_t>(id)].end = end;
  if (end - begin <= leaf_size_) return id;

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    const Vec3& p = points[static_cast<std::size_t>(order[i])];
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (!(hi[axis] > lo[axis])) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  auto first = order.begin() + begin;
  std::nth_element(first, order.begin() + mid, order.begin() + end, [&](int a, int b) {
    return points[static_cast<std::size_t>(a)][axis] < points[static_cast<std::size_t>(b)][axis];
  });
  const double split = points[static_cast<std::size_t>(order[mid])][axis];

  const int left = build(order, begin, mid, points);
  const int right = build(order, mid, end, points);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void VertexIndex3D::search(int node_id, const double q[3], double& best_d2, std::uint32_t& best_slot) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_id)];
  if (node.axis < 0) {
    const std::size_t n = node.end - node.begin;
    const simd::Nearest hit =
        simd::kernels().nearest(xs_.data() + node.begin, ys_.data() + node.begin, zs_.data() + node.begin, n,
                                q[0], q[1], q[2]);
    if (hit.squared_distance < best_d2) {
      best_d2 = hit.squared_distance;
      best_slot = node.begin + hit.index;
    }
    return;
  }
  // Left holds coordinates <= split, right >= split. The far side cannot hold a
  // point closer than |diff|, and rounding is monotone, so pruning on
  // diff^2 >= best keeps the result exact.
  const double diff = q[node.axis] - node.split;
  const int near = diff < 0.0 ? node.left : node.right;
  const int far = diff < 0.0 ? node.right : node.left;
  search(near, q, best_d2, best_slot);
  if (diff * diff < best_d2) search(far, q, best_d2, best_slot);
}

VertexIndex3D::Hit VertexIndex3D::nearest(const Vec3& query) const {
  const double q[3] = {query.x(), query.y(), query.z()};
  double best_d2 = std::numeric_limits<double>::infinity();
  std::uint32_t best_slot = 0;
  search(0, q, best_d2, best_slot);
  return {std::sqrt(best_d2), original_[best_slot]};
}

}  // namespace cargen
