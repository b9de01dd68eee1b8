#pragma once

#include <span>
#include <variant>
#include <vector>

#include "cargen/mesh.hpp"
#include "cargen/spatial_index.hpp"

namespace cargen {

/// Selected faces displaced toward the opposing bone by half the local gap.
struct ExtrusionResult {
  TriMesh surface;                 // copy of the selected faces, displaced
  std::vector<int> source_vertex;  // surface vertex -> primary mesh vertex
  /// Applied displacement per primary mesh vertex (mm); zero off the selection.
  VertexScalarField heights;
  /// Faces of `surface` whose normal flipped relative to the original face;
  /// a sign that the sheet folds over itself. Reported, never fatal.
  std::vector<int> folded_faces;
};

/// Offsets every vertex of `faces` along its unit normal by half its nearest
/// distance to the indexed secondary vertices. `normals` are the primary mesh's
/// vertex normals.
ExtrusionResult extrude(const TriMesh& mesh, const FaceSelection& faces, const VertexIndex3D& secondary_index,
                        std::span<const Vec3> normals);
/// As above, computing the vertex normals.
ExtrusionResult extrude(const TriMesh& mesh, const FaceSelection& faces, const VertexIndex3D& secondary_index);

/// Extrusion subset = a previously recorded region (the femoral region before
/// growth), restricted to faces still in the bone-attached region.
struct PreGrowthCopy {
  FaceSelection snapshot;
};
/// Extrusion subset = the bone-attached region trimmed by `layers` rim layers.
struct TrimLayers {
  int layers = 0;
};
using SubsetStrategy = std::variant<PreGrowthCopy, TrimLayers>;

/// Picks the faces to extrude. Faces touching the bone-attached region's
/// boundary vertices are dropped so that the blend ring separates the extruded
/// sheet from the outer rim everywhere. Throws GeometryError when the result is
/// empty or leaves no blend ring.
FaceSelection select_extrusion_subset(const FaceSelection& bone_attached, const SubsetStrategy& strategy);

}  // namespace cargen
