#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "cargen/mesh.hpp"
#include "cargen/mesh_ops.hpp"

namespace cargen {

struct BlendConstraint {
  int vertex;    // primary mesh vertex
  double value;  // mm
};

/// Ring between the extruded sheet and the bone-attached rim, with value
/// constraints on both of its borders.
struct BlendProblem {
  FaceSelection ring;
  Submesh ring_mesh;                    // ring copied out; solve happens here
  std::vector<BlendConstraint> inner;   // shared with the extruded sheet
  std::vector<BlendConstraint> outer;   // bone-attached rim, all zero
  std::optional<double> upper_bound;    // bounds [0, upper] when set
  int max_active_set_iterations = 200;

  /// Throws InputError/GeometryError when the constraint layout is invalid.
  void validate() const;
};

struct BlendReport {
  int iterations = 0;         // linear solves performed
  double residual = 0.0;      // relative residual of the final reduced system
  std::size_t active_bounds = 0;
};

struct BlendSolution {
  std::vector<int> vertex;         // primary mesh vertex per ring vertex
  std::vector<double> weight;      // mm, same order as `vertex`
  BlendReport report;

  /// Weights scattered into a field over `num_vertices` primary vertices (0 elsewhere).
  VertexScalarField scatter(std::size_t num_vertices) const;
};

/// Ring = bone_attached \ extrusion_subset. Inner constraints take `heights`
/// (indexed by primary vertex) at ring vertices shared with the subset; outer
/// constraints pin the bone-attached boundary to 0. Bounds are set to
/// [0, max inner height] when `bounded`.
BlendProblem assemble_blend_problem(const FaceSelection& bone_attached, const FaceSelection& extrusion_subset,
                                    std::span<const double> heights, bool bounded = true);

/// Cotangent stiffness L (positive semidefinite sign convention).
Eigen::SparseMatrix<double> cotangent_stiffness(const TriMesh& mesh);
/// Lumped mass: one third of the incident triangle areas per vertex.
Eigen::VectorXd lumped_mass(const TriMesh& mesh);
/// Bilaplacian operator L M^-1 L.
Eigen::SparseMatrix<double> bilaplacian(const TriMesh& mesh);

/// Minimizes 1/2 w^T K w over the ring (K = bilaplacian) subject to the value
/// constraints and, when present, the bounds via an active-set loop.
/// Throws GeometryError on a singular system or active-set non-convergence.
BlendSolution solve_biharmonic(const BlendProblem& problem);

/// 1/2 w^T K w for weights in ring-mesh vertex order.
double blend_energy(const BlendProblem& problem, std::span<const double> weights);

/// Ring faces displaced by their weights along `normals` (primary vertex normals).
TriMesh apply_blend(const TriMesh& mesh, const FaceSelection& ring, const BlendSolution& solution,
                    std::span<const Vec3> normals);

}  // namespace cargen
