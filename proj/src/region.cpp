#include "cargen/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cargen/error.hpp"
#include "cargen/mesh_ops.hpp"

namespace cargen {

void GrowthBounds::validate() const {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
    std::ostringstream msg;
    msg << "invalid curvature bounds [" << lower << ", " << upper << "]";
    throw InputError(msg.str());
  }
}

FaceSelection distance_filter(const TriMesh& primary, const VertexIndex3D& secondary_index, double delta) {
  if (!(delta > 0.0)) throw InputError("distance filter threshold must be positive");
  std::vector<int> faces;
  for (std::size_t f = 0; f < primary.num_faces(); ++f) {
    if (secondary_index.nearest_distance(face_barycenter(primary, static_cast<int>(f))) <= delta) {
      faces.push_back(static_cast<int>(f));
    }
  }
  if (faces.empty()) {
    std::ostringstream msg;
    msg << "no articulation found within delta = " << delta << " mm";
    throw GeometryError(msg.str());
  }
  return FaceSelection(primary, std::move(faces));
}

namespace {

int count_boundary_sides(const TriMesh& mesh, const std::vector<char>& mask, int f) {
  int n = 0;
  for (int k = 0; k < 3; ++k) {
    const int g = mesh.face_neighbor(f, k);
    if (g < 0 || !mask[static_cast<std::size_t>(g)]) ++n;
  }
  return n;
}

// Removing a face only raises its neighbours' boundary counts, so the set of
// faces removed is the same whatever order the work list is processed in.
void strip_spikes(const TriMesh& mesh, std::vector<char>& mask) {
  std::vector<int> work;
  for (std::size_t f = 0; f < mask.size(); ++f) {
    if (mask[f] && count_boundary_sides(mesh, mask, static_cast<int>(f)) >= 2) work.push_back(static_cast<int>(f));
  }
  while (!work.empty()) {
    const int f = work.back();
    work.pop_back();
    if (!mask[static_cast<std::size_t>(f)]) continue;
    mask[static_cast<std::size_t>(f)] = 0;
    for (int k = 0; k < 3; ++k) {
      const int g = mesh.face_neighbor(f, k);
      if (g >= 0 && mask[static_cast<std::size_t>(g)] && count_boundary_sides(mesh, mask, g) >= 2) {
        work.push_back(g);
      }
    }
  }
}

}  // namespace

FaceSelection remove_spikes(const FaceSelection& selection) {
  std::vector<char> mask = selection.mask();
  strip_spikes(selection.mesh(), mask);
  return FaceSelection::from_mask(selection.mesh(), mask);
}

FaceSelection trim_boundary(const FaceSelection& selection, int layers) {
  if (layers < 0) throw InputError("trim layer count must be non-negative");
  const TriMesh& mesh = selection.mesh();
  std::vector<char> mask = selection.mask();
  strip_spikes(mesh, mask);
  for (int layer = 0; layer < layers; ++layer) {
    std::vector<int> rim;
    for (std::size_t f = 0; f < mask.size(); ++f) {
      if (mask[f] && count_boundary_sides(mesh, mask, static_cast<int>(f)) >= 1) rim.push_back(static_cast<int>(f));
    }
    if (rim.empty()) break;  // closed selection: nothing to peel
    for (int f : rim) mask[static_cast<std::size_t>(f)] = 0;
    strip_spikes(mesh, mask);
  }
  return FaceSelection::from_mask(mesh, mask);
}

FaceSelection regularize_boundary(const FaceSelection& selection) {
  const TriMesh& mesh = selection.mesh();
  std::vector<char> mask = selection.mask();
  std::vector<char> on_boundary(mesh.num_vertices());
  while (true) {
    strip_spikes(mesh, mask);
    std::fill(on_boundary.begin(), on_boundary.end(), 0);
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      const auto& ef = mesh.edge_faces(static_cast<int>(e));
      const bool in0 = mask[static_cast<std::size_t>(ef[0])] != 0;
      const bool in1 = ef[1] >= 0 && mask[static_cast<std::size_t>(ef[1])] != 0;
      if (in0 != in1) {
        on_boundary[static_cast<std::size_t>(mesh.edge(static_cast<int>(e)).v0)] = 1;
        on_boundary[static_cast<std::size_t>(mesh.edge(static_cast<int>(e)).v1)] = 1;
      }
    }
    std::vector<int> chord_faces;
    for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
      const auto& ef = mesh.edge_faces(static_cast<int>(e));
      if (ef[1] < 0 || !mask[static_cast<std::size_t>(ef[0])] || !mask[static_cast<std::size_t>(ef[1])]) continue;
      const Edge& edge = mesh.edge(static_cast<int>(e));
      if (on_boundary[static_cast<std::size_t>(edge.v0)] && on_boundary[static_cast<std::size_t>(edge.v1)]) {
        chord_faces.push_back(ef[0]);
        chord_faces.push_back(ef[1]);
      }
    }
    if (chord_faces.empty()) break;
    for (int f : chord_faces) mask[static_cast<std::size_t>(f)] = 0;
  }
  return FaceSelection::from_mask(mesh, mask);
}

GrowthResult curvature_grow(const TriMesh& mesh, const FaceSelection& seed, std::span<const double> face_curv,
                            const GrowthBounds& bounds, int max_sweeps) {
  bounds.validate();
  if (seed.empty()) throw GeometryError("curvature growth needs a non-empty seed region");
  if (face_curv.size() != mesh.num_faces()) throw InputError("face curvature does not cover every face");

  std::vector<char> mask = seed.mask();
  // Faces rejected once stay rejected: their curvature never changes.
  std::vector<char> rejected(mesh.num_faces(), 0);
  std::vector<int> frontier(seed.faces().begin(), seed.faces().end());
  GrowthResult result;
  while (max_sweeps < 0 || result.iterations < max_sweeps) {
    std::vector<int> added;
    for (int f : frontier) {
      for (int k = 0; k < 3; ++k) {
        const int g = mesh.face_neighbor(f, k);
        if (g < 0 || mask[static_cast<std::size_t>(g)] || rejected[static_cast<std::size_t>(g)]) continue;
        if (bounds.admits(face_curv[static_cast<std::size_t>(g)])) {
          mask[static_cast<std::size_t>(g)] = 1;
          added.push_back(g);
        } else {
          rejected[static_cast<std::size_t>(g)] = 1;
        }
      }
    }
    if (added.empty()) break;
    std::sort(added.begin(), added.end());
    ++result.iterations;
    result.added.push_back(added.size());
    frontier = std::move(added);
  }
  result.region = FaceSelection::from_mask(mesh, mask);
  return result;
}

}  // namespace cargen
