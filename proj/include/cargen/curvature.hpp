#pragma once

#include <string_view>
#include <vector>

#include "cargen/mesh.hpp"

namespace cargen {

/// Per-vertex principal curvatures (1/mm), kappa_min <= kappa_max.
/// Convex regions of an outward-oriented surface are positive.
struct CurvatureField {
  std::vector<double> kappa_min;
  std::vector<double> kappa_max;
  int neighborhood = 0;  // k-ring depth used for the fits
  /// Vertices whose neighborhood had to be enlarged by one ring to fit.
  std::vector<int> enlarged;
};

enum class CurvatureMeasure { mean, max, min };

std::string_view to_string(CurvatureMeasure m);
/// Throws InputError for unknown names.
CurvatureMeasure parse_curvature_measure(std::string_view name);

/// Vertices reachable from `center` in at most `rings` edge hops (center first).
std::vector<int> k_ring(const TriMesh& mesh, int center, int rings);

/// Quadric fit over each vertex's `neighborhood`-ring in the vertex's tangent
/// frame. A vertex with fewer than 6 samples (or a rank-deficient fit) is
/// retried with one more ring; if that still fails a GeometryError is thrown.
CurvatureField principal_curvatures(const TriMesh& mesh, int neighborhood);

/// (kappa_min + kappa_max) / 2 per vertex.
VertexScalarField mean_curvature(const CurvatureField& field);

/// Chosen per-vertex measure averaged over each face's three vertices.
std::vector<double> face_curvature(const TriMesh& mesh, const CurvatureField& field, CurvatureMeasure measure);

}  // namespace cargen
