#include "cargen/curvature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "cargen/error.hpp"
#include "cargen/mesh_ops.hpp"
#include "parallel.hpp"

namespace cargen {

std::string_view to_string(CurvatureMeasure m) {
  switch (m) {
    case CurvatureMeasure::mean: return "mean";
    case CurvatureMeasure::max: return "max";
    case CurvatureMeasure::min: return "min";
  }
  return "mean";
}

CurvatureMeasure parse_curvature_measure(std::string_view name) {
  if (name == "mean") return CurvatureMeasure::mean;
  if (name == "max") return CurvatureMeasure::max;
  if (name == "min") return CurvatureMeasure::min;
  throw InputError("unknown curvature measure '" + std::string(name) + "' (expected mean, max or min)");
}

namespace {

// Breadth-first ring collection with reusable visit stamps.
class RingCollector {
 public:
  explicit RingCollector(const TriMesh& mesh) : mesh_(mesh), stamp_(mesh.num_vertices(), 0) {}

  const std::vector<int>& collect(int center, int rings) {
    ++epoch_;
    out_.clear();
    out_.push_back(center);
    stamp_[static_cast<std::size_t>(center)] = epoch_;
    std::size_t ring_begin = 0;
    for (int r = 0; r < rings; ++r) {
      const std::size_t ring_end = out_.size();
      for (std::size_t i = ring_begin; i < ring_end; ++i) {
        for (int w : mesh_.vertex_neighbors(out_[i])) {
          if (stamp_[static_cast<std::size_t>(w)] != epoch_) {
            stamp_[static_cast<std::size_t>(w)] = epoch_;
            out_.push_back(w);
          }
        }
      }
      if (out_.size() == ring_end) break;
      ring_begin = ring_end;
    }
    return out_;
  }

 private:
  const TriMesh& mesh_;
  std::vector<unsigned> stamp_;
  unsigned epoch_ = 0;
  std::vector<int> out_;
};

struct Principal {
  double kmin, kmax;
};

// Fits z = a x^2 + b xy + c y^2 + d x + e y + f in the tangent frame of `center`
// and returns the principal curvatures of the fitted graph at the origin.
bool fit_quadric(const TriMesh& mesh, int center, const Vec3& normal, const std::vector<int>& samples,
                 Principal& out) {
  if (samples.size() < 6) return false;
  Vec3 u = std::abs(normal.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  u = (u - normal * normal.dot(u)).normalized();
  const Vec3 w = normal.cross(u);
  const Vec3& origin = mesh.vertex(center);

  double scale = 0.0;
  for (int v : samples) {
    const Vec3 d = mesh.vertex(v) - origin;
    scale = std::max(scale, std::hypot(d.dot(u), d.dot(w)));
  }
  if (!(scale > 0.0)) return false;
  const double inv = 1.0 / scale;

  Eigen::Matrix<double, 6, 6> ata = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<double, 6, 1> atz = Eigen::Matrix<double, 6, 1>::Zero();
  for (int v : samples) {
    const Vec3 d = (mesh.vertex(v) - origin) * inv;
    const double x = d.dot(u), y = d.dot(w), z = d.dot(normal);
    Eigen::Matrix<double, 6, 1> row;
    row << x * x, x * y, y * y, x, y, 1.0;
    ata.selfadjointView<Eigen::Lower>().rankUpdate(row);
    atz += row * z;
  }
  ata.triangularView<Eigen::StrictlyUpper>() = ata.transpose();
  const Eigen::LDLT<Eigen::Matrix<double, 6, 6>> ldlt(ata);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-13)) return false;
  const Eigen::Matrix<double, 6, 1> coef = ldlt.solve(atz);

  // Undo the coordinate scaling: second-order terms carry 1/scale.
  const double a = coef[0] * inv, b = coef[1] * inv, c = coef[2] * inv;
  const double dx = coef[3], dy = coef[4];
  const double E = 1.0 + dx * dx, F = dx * dy, G = 1.0 + dy * dy;
  const double W = std::sqrt(1.0 + dx * dx + dy * dy);
  const double L = 2.0 * a / W, M = b / W, N = 2.0 * c / W;
  const double det = E * G - F * F;
  const double H = (E * N - 2.0 * F * M + G * L) / (2.0 * det);
  const double K = (L * N - M * M) / det;
  const double root = std::sqrt(std::max(H * H - K, 0.0));
  // The graph's normal is +z (outward); a convex surface bends away from it,
  // so the sign is flipped to make convex positive.
  out = {-H - root, -H + root};
  return std::isfinite(out.kmin) && std::isfinite(out.kmax);
}

}  // namespace

std::vector<int> k_ring(const TriMesh& mesh, int center, int rings) {
  RingCollector collector(mesh);
  return collector.collect(center, rings);
}

CurvatureField principal_curvatures(const TriMesh& mesh, int neighborhood) {
  if (neighborhood < 1) throw InputError("curvature neighborhood must be at least 1 ring");
  const std::vector<Vec3> normals = vertex_normals(mesh);
  const std::size_t nv = mesh.num_vertices();

  CurvatureField field;
  field.neighborhood = neighborhood;
  field.kappa_min.assign(nv, 0.0);
  field.kappa_max.assign(nv, 0.0);
  std::vector<char> enlarged(nv, 0);
  std::vector<char> failed(nv, 0);

  detail::parallel_for(nv, 2048, [&](std::size_t begin, std::size_t end) {
    RingCollector rings(mesh);
    for (std::size_t v = begin; v < end; ++v) {
      const int vi = static_cast<int>(v);
      Principal p{};
      if (!fit_quadric(mesh, vi, normals[v], rings.collect(vi, neighborhood), p)) {
        enlarged[v] = 1;
        if (!fit_quadric(mesh, vi, normals[v], rings.collect(vi, neighborhood + 1), p)) {
          failed[v] = 1;
          continue;
        }
      }
      field.kappa_min[v] = p.kmin;
      field.kappa_max[v] = p.kmax;
    }
  });

  for (std::size_t v = 0; v < nv; ++v) {
    if (failed[v]) {
      throw GeometryError("curvature fit underdetermined at vertex " + std::to_string(v) + " even with " +
                          std::to_string(neighborhood + 1) + " rings");
    }
    if (enlarged[v]) field.enlarged.push_back(static_cast<int>(v));
  }
  return field;
}

VertexScalarField mean_curvature(const CurvatureField& field) {
  VertexScalarField out(field.kappa_min.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = 0.5 * (field.kappa_min[v] + field.kappa_max[v]);
  return out;
}

std::vector<double> face_curvature(const TriMesh& mesh, const CurvatureField& field, CurvatureMeasure measure) {
  if (field.kappa_min.size() != mesh.num_vertices()) {
    throw InputError("curvature field does not cover the mesh's vertices");
  }
  std::vector<double> per_vertex;
  switch (measure) {
    case CurvatureMeasure::mean: per_vertex = mean_curvature(field); break;
    case CurvatureMeasure::max: per_vertex = field.kappa_max; break;
    case CurvatureMeasure::min: per_vertex = field.kappa_min; break;
  }
  std::vector<double> out(mesh.num_faces());
  for (std::size_t f = 0; f < out.size(); ++f) {
    const Face& t = mesh.face(static_cast<int>(f));
    out[f] = (per_vertex[static_cast<std::size_t>(t[0])] + per_vertex[static_cast<std::size_t>(t[1])] +
              per_vertex[static_cast<std::size_t>(t[2])]) /
             3.0;
  }
  return out;
}

}  // namespace cargen
