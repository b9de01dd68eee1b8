#pragma once

#include <string>
#include <vector>

#include "cargen/blending.hpp"
#include "cargen/config.hpp"
#include "cargen/extrusion.hpp"
#include "cargen/mesh.hpp"

namespace cargen {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

/// Output of one pipeline run. Selections refer to the primary mesh passed to
/// the pipeline, which must outlive the model.
struct CartilageModel {
  PipelineConfig config;
  FaceSelection bone_attached;     // cartilage-bone interface
  FaceSelection pre_growth;        // femoral: region before curvature growth
  FaceSelection extrusion_subset;  // extruded part of bone_attached
  FaceSelection ring;              // bone_attached minus extrusion_subset
  ExtrusionResult extrusion;
  BlendSolution blend;
  TriMesh blended_ring;
  TriMesh assembled;               // closed cartilage mesh; empty when degenerate
  VertexScalarField offsets;       // applied offset per primary vertex (mm)
  std::vector<StageTiming> timings;
  int growth_iterations = 0;
  std::size_t curvature_enlarged = 0;  // vertices whose fit needed an extra ring
  std::vector<std::string> warnings;
  /// Zero gap over the whole region: nothing to extrude, no assembly.
  bool degenerate = false;

  double total_seconds() const;
};

}  // namespace cargen
