#pragma once

#include <vector>

#include "cargen/mesh.hpp"

namespace cargen {

/// Arithmetic mean of the face's three vertex positions.
Vec3 face_barycenter(const TriMesh& mesh, int face);

/// Angle-weighted average of incident face normals, normalized.
/// Throws GeometryError if a vertex has no incident face.
std::vector<Vec3> vertex_normals(const TriMesh& mesh);

/// `p + n * h`. Every surface displaced along normals goes through this so that
/// independently built sheets land on bit-identical positions.
inline Vec3 offset_point(const Vec3& p, const Vec3& n, double h) {
  return Vec3(p.x() + n.x() * h, p.y() + n.y() * h, p.z() + n.z() * h);
}

/// Edge-connected components of a selection, in order of their lowest face index.
std::vector<FaceSelection> connected_components(const FaceSelection& selection);

/// Component with the most faces; ties broken by larger area, then lower minimum face index.
FaceSelection largest_component(const FaceSelection& selection);

/// Selected faces copied into a standalone mesh with compact vertex numbering.
struct Submesh {
  TriMesh mesh;
  std::vector<int> source_vertex;  // submesh vertex -> original vertex
};

/// Copies a selection, optionally moving vertices (`positions` indexed by original
/// vertex; empty keeps the original positions) and optionally reversing winding.
Submesh extract_submesh(const FaceSelection& selection, const std::vector<Vec3>& positions = {},
                        bool reverse_winding = false);

/// Joins the bone-attached region (winding reversed), the extruded sheet and the
/// blended ring into one closed mesh. Boundary vertices of the parts are welded
/// when they coincide within `weld_tolerance`. Throws GeometryError when the
/// result has boundary edges, is not manifold, or is inconsistently oriented.
TriMesh assemble_cartilage(const FaceSelection& bone_attached, const TriMesh& extruded,
                           const TriMesh& blend_ring, double weld_tolerance = 1e-9);

}  // namespace cargen
