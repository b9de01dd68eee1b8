#include "cargen/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "cargen/error.hpp"
#include "cargen/mesh_ops.hpp"
#include "parallel.hpp"

namespace cargen {

double CartilageModel::total_seconds() const {
  double total = 0.0;
  for (const StageTiming& t : timings) total += t.seconds;
  return total;
}

ThicknessStats mean_thickness(const FaceSelection& region, std::span<const double> offsets) {
  if (region.empty()) return {};
  const TriMesh& mesh = region.mesh();
  if (offsets.size() != mesh.num_vertices()) throw InputError("offsets do not cover the mesh");
  std::vector<double> weight(mesh.num_vertices(), 0.0);
  for (int f : region.faces()) {
    const double third = mesh.face_area(f) / 3.0;
    for (int v : mesh.face(f)) weight[static_cast<std::size_t>(v)] += third;
  }
  double wsum = 0.0, mean = 0.0;
  for (int v : region.vertices()) {
    wsum += weight[static_cast<std::size_t>(v)];
    mean += weight[static_cast<std::size_t>(v)] * offsets[static_cast<std::size_t>(v)];
  }
  mean /= wsum;
  double var = 0.0;
  for (int v : region.vertices()) {
    const double d = offsets[static_cast<std::size_t>(v)] - mean;
    var += weight[static_cast<std::size_t>(v)] * d * d;
  }
  return {mean, std::sqrt(var / wsum)};
}

ThicknessStats mean_thickness(const CartilageModel& model) {
  return mean_thickness(model.bone_attached, model.offsets);
}

double coverage_area(const FaceSelection& region) { return region.empty() ? 0.0 : region.area(); }

SphereFit fit_sphere(std::span<const Vec3> points) {
  if (points.size() < 4) throw GeometryError("sphere fit needs at least four points");
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  double scale = 0.0;
  for (const Vec3& p : points) scale = std::max(scale, (p - centroid).norm());
  if (!(scale > 0.0)) throw GeometryError("sphere fit points coincide");

  // |q|^2 = 2 c.q + k in centered, scaled coordinates; k = r^2 - |c|^2.
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd A(n, 4);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 q = (points[static_cast<std::size_t>(i)] - centroid) / scale;
    A.row(i) << 2.0 * q.x(), 2.0 * q.y(), 2.0 * q.z(), 1.0;
    b[i] = q.squaredNorm();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < 4) throw GeometryError("sphere fit is degenerate (points are coplanar or collinear)");
  const Eigen::Vector4d x = qr.solve(b);
  const Vec3 c = x.head<3>();
  const double r2 = x[3] + c.squaredNorm();
  if (!(r2 > 0.0) || !std::isfinite(r2)) throw GeometryError("sphere fit is degenerate");
  return {centroid + c * scale, std::sqrt(r2) * scale};
}

double coverage_percentage(const FaceSelection& pelvic_attached, const FaceSelection& femoral_attached) {
  if (pelvic_attached.empty()) return 0.0;
  std::vector<Vec3> pts;
  pts.reserve(femoral_attached.vertices().size());
  for (int v : femoral_attached.vertices()) pts.push_back(femoral_attached.mesh().vertex(v));
  const SphereFit fit = fit_sphere(pts);
  return pelvic_attached.area() / (4.0 * std::numbers::pi * fit.radius * fit.radius);
}

namespace {

// Closest point on triangle abc to p (Ericson, Real-Time Collision Detection 5.1.5).
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

// Uniform grid over the triangles of several meshes, answering "is any face
// within r of p" exactly. Cells are at least r wide, so a query visits at most
// 3x3x3 cells.
class TriangleGrid {
 public:
  TriangleGrid(std::span<const TriMesh* const> meshes, double radius) : radius_(radius) {
    double edge_sum = 0.0;
    std::size_t edges = 0;
    lo_ = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo_;
    for (const TriMesh* m : meshes) {
      for (const Face& t : m->faces()) {
        const Vec3 &a = m->vertex(t[0]), &b = m->vertex(t[1]), &c = m->vertex(t[2]);
        tris_.push_back({a, b, c});
        edge_sum += (b - a).norm() + (c - b).norm() + (a - c).norm();
        edges += 3;
        lo_ = lo_.cwiseMin(a).cwiseMin(b).cwiseMin(c);
        hi = hi.cwiseMax(a).cwiseMax(b).cwiseMax(c);
      }
    }
    if (tris_.empty()) return;
    cell_ = std::max({radius, edge_sum / static_cast<double>(edges), 1e-9 * (hi - lo_).norm(), 1e-12});
    for (int k = 0; k < 3; ++k) dims_[k] = static_cast<std::int64_t>(std::floor((hi[k] - lo_[k]) / cell_)) + 1;

    std::vector<std::pair<std::int64_t, int>> entries;
    for (std::size_t i = 0; i < tris_.size(); ++i) {
      const auto& t = tris_[i];
      const auto a = coords(t[0].cwiseMin(t[1]).cwiseMin(t[2]));
      const auto b = coords(t[0].cwiseMax(t[1]).cwiseMax(t[2]));
      for (std::int64_t x = a[0]; x <= b[0]; ++x)
        for (std::int64_t y = a[1]; y <= b[1]; ++y)
          for (std::int64_t z = a[2]; z <= b[2]; ++z) entries.emplace_back(key(x, y, z), static_cast<int>(i));
    }
    std::sort(entries.begin(), entries.end());
    keys_.reserve(entries.size());
    items_.reserve(entries.size());
    for (const auto& [k, i] : entries) {
      keys_.push_back(k);
      items_.push_back(i);
    }
  }

  bool within(const Vec3& p) const {
    if (tris_.empty()) return false;
    const auto a = coords(p - Vec3::Constant(radius_));
    const auto b = coords(p + Vec3::Constant(radius_));
    const double r2 = radius_ * radius_;
    for (std::int64_t x = a[0]; x <= b[0]; ++x)
      for (std::int64_t y = a[1]; y <= b[1]; ++y)
        for (std::int64_t z = a[2]; z <= b[2]; ++z) {
          const std::int64_t k = key(x, y, z);
          const auto first = std::lower_bound(keys_.begin(), keys_.end(), k);
          for (auto it = first; it != keys_.end() && *it == k; ++it) {
            const auto& t = tris_[static_cast<std::size_t>(items_[static_cast<std::size_t>(it - keys_.begin())])];
            if ((closest_on_triangle(p, t[0], t[1], t[2]) - p).squaredNorm() <= r2) return true;
          }
        }
    return false;
  }

 private:
  std::array<std::int64_t, 3> coords(const Vec3& p) const {
    std::array<std::int64_t, 3> c{};
    for (int k = 0; k < 3; ++k) {
      const double f = std::floor((p[k] - lo_[k]) / cell_);
      c[static_cast<std::size_t>(k)] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::clamp(f, -1.0, 1e15)), 0,
                                                                dims_[static_cast<std::size_t>(k)] - 1);
    }
    return c;
  }
  std::int64_t key(std::int64_t x, std::int64_t y, std::int64_t z) const { return (z * dims_[1] + y) * dims_[0] + x; }

  double radius_;
  double cell_ = 1.0;
  Vec3 lo_;
  std::array<std::int64_t, 3> dims_{1, 1, 1};
  std::vector<std::array<Vec3, 3>> tris_;
  std::vector<std::int64_t> keys_;
  std::vector<int> items_;
};

}  // namespace

double contact_area(std::span<const TriMesh* const> surfaces, std::span<const TriMesh* const> opposing, double epsilon) {
  if (!(epsilon >= 0.0)) throw InputError("contact epsilon must be non-negative");
  const TriangleGrid grid(opposing, epsilon);
  double total = 0.0;
  for (const TriMesh* s : surfaces) {
    std::vector<double> area(s->num_faces(), 0.0);
    detail::parallel_for(s->num_faces(), 4096, [&](std::size_t begin, std::size_t end) {
      for (std::size_t f = begin; f < end; ++f) {
        const int fi = static_cast<int>(f);
        if (grid.within(face_barycenter(*s, fi))) area[f] = s->face_area(fi);
      }
    });
    for (double a : area) total += a;
  }
  return total;
}

double contact_area(const TriMesh& a, const TriMesh& b, double epsilon) {
  const TriMesh* pa[] = {&a};
  const TriMesh* pb[] = {&b};
  return contact_area(pa, pb, epsilon);
}

std::vector<const TriMesh*> articulating_surfaces(const CartilageModel& model) {
  std::vector<const TriMesh*> out;
  if (!model.extrusion.surface.empty()) out.push_back(&model.extrusion.surface);
  if (!model.blended_ring.empty()) out.push_back(&model.blended_ring);
  return out;
}

double contact_area(const CartilageModel& a, const CartilageModel& b, double epsilon) {
  return contact_area(articulating_surfaces(a), articulating_surfaces(b), epsilon);
}

namespace {

void accumulate_gaps(const ExtrusionResult& from, const ExtrusionResult& to, CongruenceStats& stats, double& sum) {
  const TriMesh& target = to.surface;
  std::vector<char> border(target.num_vertices(), 0);
  for (int v : FaceSelection::all(target).boundary_vertices()) border[static_cast<std::size_t>(v)] = 1;
  const VertexIndex3D index(target.vertices());
  for (std::size_t i = 0; i < from.surface.num_vertices(); ++i) {
    const VertexIndex3D::Hit hit = index.nearest(from.surface.vertex(static_cast<int>(i)));
    if (border[static_cast<std::size_t>(hit.point)]) continue;
    ++stats.pairs;
    sum += hit.distance;
    stats.max_gap = std::max(stats.max_gap, hit.distance);
    const double local_gap = 2.0 * from.heights[static_cast<std::size_t>(from.source_vertex[i])];
    if (local_gap > 0.0) stats.max_relative_gap = std::max(stats.max_relative_gap, hit.distance / local_gap);
  }
}

}  // namespace

CongruenceStats congruence(const ExtrusionResult& a, const ExtrusionResult& b) {
  CongruenceStats stats;
  if (a.surface.empty() || b.surface.empty()) return stats;
  double sum = 0.0;
  accumulate_gaps(a, b, stats, sum);
  accumulate_gaps(b, a, stats, sum);
  if (stats.pairs > 0) stats.mean_gap = sum / static_cast<double>(stats.pairs);
  return stats;
}

CartilageMetrics model_metrics(const CartilageModel& model) {
  CartilageMetrics m;
  const ThicknessStats t = mean_thickness(model);
  m.mean_thickness = t.mean;
  m.thickness_sd = t.sd;
  m.coverage_area = coverage_area(model.bone_attached);
  return m;
}

}  // namespace cargen
