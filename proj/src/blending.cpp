#include "cargen/blending.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "cargen/error.hpp"

namespace cargen {

namespace {

void require_same_mesh(const FaceSelection& a, const FaceSelection& b) {
  if (!a.bound() || !b.bound() || &a.mesh() != &b.mesh()) {
    throw InputError("selections refer to different meshes");
  }
}

}  // namespace

void BlendProblem::validate() const {
  if (ring.empty()) throw GeometryError("blend ring is empty");
  if (inner.empty()) throw GeometryError("blend ring does not touch the extruded region");
  if (outer.empty()) throw GeometryError("blend ring does not reach the bone-attached boundary");
  const std::size_t nv = ring.mesh().num_vertices();
  std::vector<char> seen(nv, 0);
  std::vector<char> in_ring(nv, 0);
  for (int v : ring_mesh.source_vertex) in_ring[static_cast<std::size_t>(v)] = 1;
  for (const auto* set : {&inner, &outer}) {
    for (const BlendConstraint& c : *set) {
      if (c.vertex < 0 || static_cast<std::size_t>(c.vertex) >= nv || !in_ring[static_cast<std::size_t>(c.vertex)]) {
        throw InputError("blend constraint on vertex " + std::to_string(c.vertex) + " outside the ring");
      }
      if (!std::isfinite(c.value) || c.value < 0.0) {
        throw InputError("blend constraint at vertex " + std::to_string(c.vertex) + " is negative or not finite");
      }
      if (seen[static_cast<std::size_t>(c.vertex)]) {
        throw GeometryError("vertex " + std::to_string(c.vertex) + " is constrained twice");
      }
      seen[static_cast<std::size_t>(c.vertex)] = 1;
    }
  }
  for (int v : ring.boundary_vertices()) {
    if (!seen[static_cast<std::size_t>(v)]) {
      throw GeometryError("blend ring boundary vertex " + std::to_string(v) + " has no constraint");
    }
  }
  if (upper_bound && !(*upper_bound >= 0.0)) throw InputError("blend upper bound must be non-negative");
  if (max_active_set_iterations < 1) throw InputError("active-set iteration cap must be positive");
}

VertexScalarField BlendSolution::scatter(std::size_t num_vertices) const {
  VertexScalarField out(num_vertices, 0.0);
  for (std::size_t i = 0; i < vertex.size(); ++i) out[static_cast<std::size_t>(vertex[i])] = weight[i];
  return out;
}

BlendProblem assemble_blend_problem(const FaceSelection& bone_attached, const FaceSelection& extrusion_subset,
                                    std::span<const double> heights, bool bounded) {
  require_same_mesh(bone_attached, extrusion_subset);
  const TriMesh& mesh = bone_attached.mesh();
  if (heights.size() != mesh.num_vertices()) throw InputError("extrusion heights do not cover the mesh");
  if (!extrusion_subset.is_subset_of(bone_attached)) {
    throw GeometryError("extrusion subset is not contained in the bone-attached region");
  }

  std::vector<char> mask = bone_attached.mask();
  for (int f : extrusion_subset.faces()) mask[static_cast<std::size_t>(f)] = 0;
  BlendProblem problem;
  problem.ring = FaceSelection::from_mask(mesh, mask);
  if (problem.ring.empty()) throw GeometryError("blend ring is empty");
  problem.ring_mesh = extract_submesh(problem.ring);

  std::vector<char> in_subset(mesh.num_vertices(), 0);
  for (int v : extrusion_subset.vertices()) in_subset[static_cast<std::size_t>(v)] = 1;
  std::vector<char> on_rim(mesh.num_vertices(), 0);
  for (int v : bone_attached.boundary_vertices()) on_rim[static_cast<std::size_t>(v)] = 1;

  double h_max = 0.0;
  for (int v : problem.ring.vertices()) {
    const auto sv = static_cast<std::size_t>(v);
    if (in_subset[sv] && on_rim[sv]) {
      throw GeometryError("vertex " + std::to_string(v) +
                          " lies on both the extruded rim and the bone-attached boundary");
    }
    if (in_subset[sv]) {
      if (!std::isfinite(heights[sv]) || heights[sv] < 0.0) {
        throw InputError("extrusion height at vertex " + std::to_string(v) + " is negative or not finite");
      }
      problem.inner.push_back({v, heights[sv]});
      h_max = std::max(h_max, heights[sv]);
    } else if (on_rim[sv]) {
      problem.outer.push_back({v, 0.0});
    }
  }
  for (int v : problem.ring.boundary_vertices()) {
    const auto sv = static_cast<std::size_t>(v);
    if (!in_subset[sv] && !on_rim[sv]) {
      throw GeometryError("ring boundary vertex " + std::to_string(v) + " has no constraint");
    }
  }
  if (bounded) problem.upper_bound = h_max;
  problem.validate();
  return problem;
}

Eigen::SparseMatrix<double> cotangent_stiffness(const TriMesh& mesh) {
  const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh.num_faces() * 12);
  for (const Face& t : mesh.faces()) {
    for (int k = 0; k < 3; ++k) {
      const int i = t[(k + 1) % 3], j = t[(k + 2) % 3];
      const Vec3 a = mesh.vertex(i) - mesh.vertex(t[k]);
      const Vec3 b = mesh.vertex(j) - mesh.vertex(t[k]);
      const double half_cot = 0.5 * a.dot(b) / a.cross(b).norm();
      trips.emplace_back(i, j, -half_cot);
      trips.emplace_back(j, i, -half_cot);
      trips.emplace_back(i, i, half_cot);
      trips.emplace_back(j, j, half_cot);
    }
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

Eigen::VectorXd lumped_mass(const TriMesh& mesh) {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_vertices()));
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const double third = mesh.face_area(static_cast<int>(f)) / 3.0;
    for (int v : mesh.face(static_cast<int>(f))) m[v] += third;
  }
  return m;
}

Eigen::SparseMatrix<double> bilaplacian(const TriMesh& mesh) {
  const Eigen::SparseMatrix<double> L = cotangent_stiffness(mesh);
  const Eigen::VectorXd m = lumped_mass(mesh);
  const Eigen::SparseMatrix<double> MinvL = m.cwiseInverse().asDiagonal() * L;
  Eigen::SparseMatrix<double> K = L * MinvL;
  K.prune(0.0);
  return K;
}

namespace {

enum class VarState : unsigned char { fixed, free, lower, upper };

void require_constrained_components(const BlendProblem& problem, const std::vector<VarState>& state) {
  const TriMesh& rm = problem.ring_mesh.mesh;
  for (const FaceSelection& comp : connected_components(FaceSelection::all(rm))) {
    const auto verts = comp.vertices();
    if (std::none_of(verts.begin(), verts.end(),
                     [&](int v) { return state[static_cast<std::size_t>(v)] == VarState::fixed; })) {
      throw GeometryError("blend ring has a connected piece without boundary constraints; system is singular");
    }
  }
}

}  // namespace

BlendSolution solve_biharmonic(const BlendProblem& problem) {
  problem.validate();
  const TriMesh& rm = problem.ring_mesh.mesh;
  const std::size_t n = rm.num_vertices();
  const std::vector<int>& source = problem.ring_mesh.source_vertex;

  std::vector<int> local(problem.ring.mesh().num_vertices(), -1);
  for (std::size_t i = 0; i < n; ++i) local[static_cast<std::size_t>(source[i])] = static_cast<int>(i);

  std::vector<VarState> state(n, VarState::free);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto* set : {&problem.inner, &problem.outer}) {
    for (const BlendConstraint& c : *set) {
      const int i = local[static_cast<std::size_t>(c.vertex)];
      state[static_cast<std::size_t>(i)] = VarState::fixed;
      w[i] = c.value;
    }
  }
  require_constrained_components(problem, state);

  const Eigen::SparseMatrix<double> K = bilaplacian(rm);
  const double ub = problem.upper_bound.value_or(0.0);
  const double value_tol = 1e-12 * std::max(1.0, ub);
  double k_scale = 0.0;
  for (Eigen::Index i = 0; i < K.rows(); ++i) k_scale = std::max(k_scale, std::abs(K.coeff(i, i)));
  const double grad_tol = 1e-10 * std::max(1.0, k_scale * std::max(ub, 1e-300));

  BlendSolution sol;
  std::vector<int> unknown_of(n, -1);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  while (true) {
    if (sol.report.iterations >= problem.max_active_set_iterations) {
      std::ostringstream msg;
      msg << "active-set blend solve did not converge in " << problem.max_active_set_iterations << " iterations";
      throw GeometryError(msg.str());
    }
    std::vector<int> unknowns;
    for (std::size_t i = 0; i < n; ++i) {
      unknown_of[i] = -1;
      if (state[i] == VarState::free) {
        unknown_of[i] = static_cast<int>(unknowns.size());
        unknowns.push_back(static_cast<int>(i));
      }
    }
    ++sol.report.iterations;
    if (!unknowns.empty()) {
      const auto m = static_cast<Eigen::Index>(unknowns.size());
      std::vector<Eigen::Triplet<double>> trips;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
      for (Eigen::Index col = 0; col < K.outerSize(); ++col) {
        const int uc = unknown_of[static_cast<std::size_t>(col)];
        for (Eigen::SparseMatrix<double>::InnerIterator it(K, col); it; ++it) {
          const int ur = unknown_of[static_cast<std::size_t>(it.row())];
          if (ur < 0) continue;
          if (uc >= 0) {
            trips.emplace_back(ur, uc, it.value());
          } else {
            rhs[ur] -= it.value() * w[col];
          }
        }
      }
      Eigen::SparseMatrix<double> Kuu(m, m);
      Kuu.setFromTriplets(trips.begin(), trips.end());
      ldlt.compute(Kuu);
      if (ldlt.info() != Eigen::Success) throw GeometryError("blend system is singular");
      const Eigen::VectorXd x = ldlt.solve(rhs);
      if (ldlt.info() != Eigen::Success || !x.allFinite()) throw GeometryError("blend system is singular");
      const double rhs_norm = rhs.norm();
      sol.report.residual = (Kuu * x - rhs).norm() / (rhs_norm > 0.0 ? rhs_norm : 1.0);
      for (Eigen::Index k = 0; k < m; ++k) w[unknowns[static_cast<std::size_t>(k)]] = x[k];
    }
    if (!problem.upper_bound) break;

    bool changed = false;
    for (int i : unknowns) {
      if (w[i] < -value_tol) {
        state[static_cast<std::size_t>(i)] = VarState::lower;
        w[i] = 0.0;
        changed = true;
      } else if (w[i] > ub + value_tol) {
        state[static_cast<std::size_t>(i)] = VarState::upper;
        w[i] = ub;
        changed = true;
      } else {
        w[i] = std::clamp(w[i], 0.0, ub);
      }
    }
    if (changed) continue;

    // Release bounds whose multiplier has the wrong sign.
    const Eigen::VectorXd g = K * w;
    for (std::size_t i = 0; i < n; ++i) {
      const auto ei = static_cast<Eigen::Index>(i);
      if ((state[i] == VarState::lower && g[ei] < -grad_tol) || (state[i] == VarState::upper && g[ei] > grad_tol)) {
        state[i] = VarState::free;
        changed = true;
      }
    }
    if (!changed) break;
  }

  sol.report.active_bounds = static_cast<std::size_t>(
      std::count_if(state.begin(), state.end(), [](VarState s) { return s == VarState::lower || s == VarState::upper; }));
  sol.vertex = source;
  sol.weight.assign(w.data(), w.data() + w.size());
  return sol;
}

double blend_energy(const BlendProblem& problem, std::span<const double> weights) {
  const TriMesh& rm = problem.ring_mesh.mesh;
  if (weights.size() != rm.num_vertices()) throw InputError("weights do not cover the ring");
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(), static_cast<Eigen::Index>(weights.size()));
  return 0.5 * w.dot(bilaplacian(rm) * w);
}

TriMesh apply_blend(const TriMesh& mesh, const FaceSelection& ring, const BlendSolution& solution,
                    std::span<const Vec3> normals) {
  if (normals.size() != mesh.num_vertices()) throw InputError("vertex normals do not cover the mesh");
  if (solution.vertex.size() != ring.vertices().size() || solution.weight.size() != solution.vertex.size()) {
    throw InputError("blend solution does not cover the ring");
  }
  std::vector<Vec3> positions(mesh.vertices());
  std::vector<char> covered(mesh.num_vertices(), 0);
  for (std::size_t i = 0; i < solution.vertex.size(); ++i) {
    const auto v = static_cast<std::size_t>(solution.vertex[i]);
    positions[v] = offset_point(mesh.vertex(static_cast<int>(v)), normals[v], solution.weight[i]);
    covered[v] = 1;
  }
  for (int v : ring.vertices()) {
    if (!covered[static_cast<std::size_t>(v)]) throw InputError("blend solution misses ring vertex " + std::to_string(v));
  }
  return extract_submesh(ring, positions).mesh;
}

}  // namespace cargen
