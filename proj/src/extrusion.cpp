#include "cargen/extrusion.hpp"

#include "cargen/error.hpp"
#include "cargen/mesh_ops.hpp"
#include "cargen/region.hpp"
#include "parallel.hpp"

namespace cargen {

ExtrusionResult extrude(const TriMesh& mesh, const FaceSelection& faces, const VertexIndex3D& secondary_index,
                        std::span<const Vec3> normals) {
  if (faces.empty()) throw GeometryError("extrusion region is empty");
  if (normals.size() != mesh.num_vertices()) throw InputError("vertex normals do not cover the mesh");

  const std::span<const int> verts = faces.vertices();
  ExtrusionResult out;
  out.heights.assign(mesh.num_vertices(), 0.0);
  detail::parallel_for(verts.size(), 1024, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const int v = verts[i];
      out.heights[static_cast<std::size_t>(v)] = 0.5 * secondary_index.nearest_distance(mesh.vertex(v));
    }
  });

  std::vector<Vec3> positions(mesh.vertices());
  for (int v : verts) {
    const auto sv = static_cast<std::size_t>(v);
    positions[sv] = offset_point(mesh.vertex(v), normals[sv], out.heights[sv]);
  }
  Submesh sheet = extract_submesh(faces, positions);
  out.surface = std::move(sheet.mesh);
  out.source_vertex = std::move(sheet.source_vertex);

  const std::span<const int> src_faces = faces.faces();
  for (std::size_t f = 0; f < src_faces.size(); ++f) {
    const Face& t = out.surface.face(static_cast<int>(f));
    const Vec3 cross = (out.surface.vertex(t[1]) - out.surface.vertex(t[0]))
                           .cross(out.surface.vertex(t[2]) - out.surface.vertex(t[0]));
    if (cross.dot(mesh.face_normal(src_faces[f])) <= 0.0) out.folded_faces.push_back(static_cast<int>(f));
  }
  return out;
}

ExtrusionResult extrude(const TriMesh& mesh, const FaceSelection& faces, const VertexIndex3D& secondary_index) {
  const std::vector<Vec3> normals = vertex_normals(mesh);
  return extrude(mesh, faces, secondary_index, normals);
}

namespace {

FaceSelection detach_from_rim(const FaceSelection& bone_attached, const FaceSelection& subset) {
  const TriMesh& mesh = bone_attached.mesh();
  std::vector<char> on_rim(mesh.num_vertices(), 0);
  for (int v : bone_attached.boundary_vertices()) on_rim[static_cast<std::size_t>(v)] = 1;
  std::vector<char> mask = subset.mask();
  for (int f : subset.faces()) {
    const Face& t = mesh.face(f);
    if (on_rim[static_cast<std::size_t>(t[0])] || on_rim[static_cast<std::size_t>(t[1])] ||
        on_rim[static_cast<std::size_t>(t[2])]) {
      mask[static_cast<std::size_t>(f)] = 0;
    }
  }
  return remove_spikes(FaceSelection::from_mask(mesh, mask));
}

}  // namespace

FaceSelection select_extrusion_subset(const FaceSelection& bone_attached, const SubsetStrategy& strategy) {
  if (bone_attached.empty()) throw GeometryError("bone-attached region is empty");
  FaceSelection subset = std::visit(
      [&](const auto& s) -> FaceSelection {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PreGrowthCopy>) {
          if (!s.snapshot.bound() || &s.snapshot.mesh() != &bone_attached.mesh()) {
            throw InputError("pre-growth snapshot refers to a different mesh");
          }
          std::vector<char> mask = s.snapshot.mask();
          const std::vector<char>& keep = bone_attached.mask();
          for (std::size_t f = 0; f < mask.size(); ++f) mask[f] = static_cast<char>(mask[f] && keep[f]);
          return FaceSelection::from_mask(bone_attached.mesh(), mask);
        } else {
          return trim_boundary(bone_attached, s.layers);
        }
      },
      strategy);

  if (subset.size() == bone_attached.size()) {
    throw GeometryError("extrusion subset equals the bone-attached region; blend ring would be empty");
  }
  subset = detach_from_rim(bone_attached, subset);
  if (subset.empty()) {
    throw GeometryError("extrusion subset is empty after separating it from the bone-attached rim");
  }
  return subset;
}

}  // namespace cargen
