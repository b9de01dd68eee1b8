#pragma once

#include <limits>
#include <span>
#include <vector>

#include "cargen/mesh.hpp"
#include "cargen/spatial_index.hpp"

namespace cargen {

/// Admissible face-curvature interval for region growth (1/mm); upper may be +inf.
struct GrowthBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  /// Throws InputError unless lower <= upper (NaN rejected).
  void validate() const;
  bool admits(double kappa) const { return lower <= kappa && kappa <= upper; }
};

/// Faces of `primary` whose barycenter lies within `delta` of the nearest
/// indexed secondary vertex. Throws GeometryError when nothing is selected.
FaceSelection distance_filter(const TriMesh& primary, const VertexIndex3D& secondary_index, double delta);

/// Removes faces with two or more boundary edges until none remain.
FaceSelection remove_spikes(const FaceSelection& selection);

/// Spike cleanup, then `layers` times: drop every face with a boundary edge and
/// clean up spikes again. The result may be empty.
FaceSelection trim_boundary(const FaceSelection& selection, int layers);

/// Repeatedly removes spikes and both faces of every interior edge whose two
/// endpoints lie on the selection boundary, until neither remains. Such
/// chords would otherwise carry a zero-thickness fold once the region is
/// closed into a cartilage volume.
FaceSelection regularize_boundary(const FaceSelection& selection);

struct GrowthResult {
  FaceSelection region;
  int iterations = 0;                 // sweeps that added at least one face
  std::vector<std::size_t> added;     // faces added per sweep
};

/// Iterates F <- F u {f adjacent to F by an edge : bounds admit face_curv[f]}
/// until a sweep adds nothing (or `max_sweeps` sweeps ran, when >= 0).
GrowthResult curvature_grow(const TriMesh& mesh, const FaceSelection& seed, std::span<const double> face_curv,
                            const GrowthBounds& bounds, int max_sweeps = -1);

}  // namespace cargen
