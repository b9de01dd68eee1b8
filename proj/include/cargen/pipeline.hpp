#pragma once

#include <optional>
#include <string>

#include "cargen/config.hpp"
#include "cargen/measures.hpp"
#include "cargen/mesh.hpp"
#include "cargen/model.hpp"

namespace cargen {

/// Generates cartilage on `primary` facing `secondary`. The returned model
/// refers to `primary`, which must outlive it.
///
/// Throws InputError for an invalid config or empty meshes, and StageError
/// naming the failing stage for any geometric failure.
CartilageModel run_pipeline(const TriMesh& primary, const TriMesh& secondary, const PipelineConfig& config);

struct SideFailure {
  std::string stage;  // empty when the failure was not tied to a stage
  std::string message;
};

struct JointResult {
  std::optional<CartilageModel> femoral;
  std::optional<CartilageModel> pelvic;
  std::optional<SideFailure> femoral_error;
  std::optional<SideFailure> pelvic_error;
  std::optional<CartilageMetrics> femoral_metrics;
  std::optional<CartilageMetrics> pelvic_metrics;
  std::optional<CongruenceStats> congruence;  // both sides succeeded and extruded

  bool ok() const { return femoral.has_value() && pelvic.has_value(); }
};

/// Runs the femoral side (femur facing pelvis) and the pelvic side (pelvis
/// facing femur). A failing side is reported without stopping the other.
/// Configs are validated up front (InputError).
JointResult run_joint(const TriMesh& femur, const TriMesh& pelvis, const PipelineConfig& femoral_config,
                      const PipelineConfig& pelvic_config);

}  // namespace cargen
