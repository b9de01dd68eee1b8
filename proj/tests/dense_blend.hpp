#pragma once

// Dense reference for the blend solve: hat-function stiffness, lumped mass and
// a full-pivot LU on the reduced system.

#include <map>

#include <Eigen/Dense>

#include "cargen/blending.hpp"
#include "cargen/fixtures.hpp"
#include "support.hpp"

namespace testing {

// L_ij = sum over triangles of area * grad_i . grad_j of the linear hat functions.
inline Eigen::MatrixXd dense_stiffness(const TriMesh& m) {
  const auto n = static_cast<Eigen::Index>(m.num_vertices());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const Face& t : m.faces()) {
    const Vec3 p[3] = {m.vertex(t[0]), m.vertex(t[1]), m.vertex(t[2])};
    const Vec3 normal2 = (p[1] - p[0]).cross(p[2] - p[0]);
    const double area = 0.5 * normal2.norm();
    const Vec3 nrm = normal2.normalized();
    Vec3 grad[3];
    for (int i = 0; i < 3; ++i) grad[i] = nrm.cross(p[(i + 2) % 3] - p[(i + 1) % 3]) / (2.0 * area);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        l(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]) += area * grad[i].dot(grad[j]);
  }
  return l;
}

inline Eigen::VectorXd dense_mass(const TriMesh& m) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.num_vertices()));
  for (int f = 0; f < static_cast<int>(m.num_faces()); ++f)
    for (int v : m.face(f)) d(v) += m.face_area(f) / 3.0;
  return d;
}

inline Eigen::MatrixXd dense_bilaplacian(const TriMesh& m) {
  const Eigen::MatrixXd l = dense_stiffness(m);
  return l * dense_mass(m).cwiseInverse().asDiagonal() * l;
}

/// Minimizer of w^T K w with the listed (local) variables fixed.
inline Eigen::VectorXd dense_solve(const Eigen::MatrixXd& k, const std::map<int, double>& fixed) {
  const auto n = k.rows();
  std::vector<int> free;
  for (int i = 0; i < n; ++i)
    if (!fixed.count(i)) free.push_back(i);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  for (const auto& [i, v] : fixed) w(i) = v;
  const auto nf = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd kuu(nf, nf);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf);
  for (Eigen::Index a = 0; a < nf; ++a) {
    const int ra = free[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < nf; ++b) kuu(a, b) = k(ra, free[static_cast<std::size_t>(b)]);
    for (const auto& [j, v] : fixed) rhs(a) -= k(ra, j) * v;
  }
  const Eigen::VectorXd x = kuu.fullPivLu().solve(rhs);
  for (Eigen::Index a = 0; a < nf; ++a) w(free[static_cast<std::size_t>(a)]) = x(a);
  return w;
}

/// Constraint values keyed by ring-mesh vertex.
inline std::map<int, double> local_constraints(const cargen::BlendProblem& p) {
  std::map<int, int> local;
  for (std::size_t i = 0; i < p.ring_mesh.source_vertex.size(); ++i)
    local[p.ring_mesh.source_vertex[i]] = static_cast<int>(i);
  std::map<int, double> out;
  for (const auto* set : {&p.inner, &p.outer})
    for (const cargen::BlendConstraint& c : *set) out[local.at(c.vertex)] = c.value;
  return out;
}

inline Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline double rel_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(1.0, b.lpNorm<Eigen::Infinity>());
}

/// Flat disk of radius 10 (361 vertices) split at `inner_radius` into an
/// extruded core and a blend annulus.
struct Annulus {
  TriMesh disk;
  cargen::FaceSelection all;
  cargen::FaceSelection inner;
};

inline Annulus make_annulus(double inner_radius = 5.0) {
  Annulus a;
  a.disk = cargen::make_flat_disk(10.0, 10, 36);
  a.all = cargen::FaceSelection::all(a.disk);
  std::vector<char> mask(a.disk.num_faces(), 0);
  for (int f = 0; f < static_cast<int>(a.disk.num_faces()); ++f)
    if (barycenter(a.disk, f).norm() < inner_radius) mask[static_cast<std::size_t>(f)] = 1;
  a.inner = cargen::FaceSelection::from_mask(a.disk, mask);
  return a;
}

/// Inner heights alternating between 0 and 1 around the core; the unbounded
/// minimizer undershoots between the lobes.
inline double lobed_height(const Vec3& p) { return std::max(0.0, std::sin(3.0 * std::atan2(p.y(), p.x()))); }

struct KktReport {
  double max_free_gradient = 0.0;     // |g| at free variables, relative
  double worst_bound_violation = 0.0; // wrong-sign multiplier at clamped variables, relative
  std::map<int, double> active;       // constraints plus clamped variables
};

/// Checks optimality of bounded weights `w` for 1/2 w^T K w subject to the
/// fixed values and 0 <= w <= ub.
inline KktReport kkt(const Eigen::MatrixXd& k, const Eigen::VectorXd& w, const std::map<int, double>& fixed, double ub) {
  KktReport r;
  r.active = fixed;
  const Eigen::VectorXd g = k * w;
  const double scale = k.lpNorm<Eigen::Infinity>() * std::max(ub, 1e-300);
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (fixed.count(static_cast<int>(i))) continue;
    if (w(i) == 0.0) {
      r.worst_bound_violation = std::max(r.worst_bound_violation, -g(i) / scale);
      r.active[static_cast<int>(i)] = 0.0;
    } else if (w(i) == ub) {
      r.worst_bound_violation = std::max(r.worst_bound_violation, g(i) / scale);
      r.active[static_cast<int>(i)] = ub;
    } else {
      r.max_free_gradient = std::max(r.max_free_gradient, std::abs(g(i)) / scale);
    }
  }
  return r;
}

}  // namespace testing
