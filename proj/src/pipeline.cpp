#include "cargen/pipeline.hpp"

#include <chrono>

#include "cargen/blending.hpp"
#include "cargen/curvature.hpp"
#include "cargen/error.hpp"
#include "cargen/extrusion.hpp"
#include "cargen/mesh_ops.hpp"
#include "cargen/region.hpp"
#include "cargen/spatial_index.hpp"

namespace cargen {

namespace {

template <class Fn>
auto run_stage(CartilageModel& model, const char* stage, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  const auto record = [&] {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    model.timings.push_back({stage, dt.count()});
  };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto result = fn();
      record();
      return result;
    }
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(stage, e.what());
  }
}

bool all_vertices_touch(const FaceSelection& region, const VertexIndex3D& index) {
  for (int v : region.vertices()) {
    if (index.nearest_distance(region.mesh().vertex(v)) > 0.0) return false;
  }
  return true;
}

void finish_degenerate(CartilageModel& model) {
  model.degenerate = true;
  model.extrusion_subset = model.bone_attached;
  model.extrusion.surface = extract_submesh(model.bone_attached).mesh;
  model.extrusion.source_vertex.assign(model.bone_attached.vertices().begin(), model.bone_attached.vertices().end());
  model.extrusion.heights.assign(model.bone_attached.mesh().num_vertices(), 0.0);
  model.offsets = model.extrusion.heights;
  model.warnings.push_back("bones touch over the whole region: zero thickness, no cartilage assembled");
}

}  // namespace

CartilageModel run_pipeline(const TriMesh& primary, const TriMesh& secondary, const PipelineConfig& config) {
  config.validate();
  if (primary.empty()) throw InputError("primary mesh has no faces");
  if (secondary.num_vertices() == 0) throw InputError("secondary mesh has no vertices");

  CartilageModel model;
  model.config = config;

  const VertexIndex3D index = run_stage(model, "index", [&] { return VertexIndex3D(secondary.vertices()); });
  FaceSelection region =
      run_stage(model, "distance_filter", [&] { return distance_filter(primary, index, config.delta); });
  region = run_stage(model, "trim", [&] {
    FaceSelection trimmed = trim_boundary(region, config.n_trim);
    if (trimmed.empty()) throw GeometryError("region vanished after trimming " + std::to_string(config.n_trim) + " layers");
    return trimmed;
  });
  region = run_stage(model, "cluster", [&] { return largest_component(region); });

  if (run_stage(model, "gap_check", [&] { return all_vertices_touch(region, index); })) {
    model.bone_attached = std::move(region);
    finish_degenerate(model);
    return model;
  }

  SubsetStrategy strategy = TrimLayers{config.extrusion_trim.value_or(0)};
  if (config.side == Side::femoral) {
    model.pre_growth = region;
    const std::vector<double> face_curv = run_stage(model, "curvature", [&] {
      const CurvatureField field = principal_curvatures(primary, *config.neighborhood);
      model.curvature_enlarged = field.enlarged.size();
      return face_curvature(primary, field, *config.curvature_measure);
    });
    region = run_stage(model, "growth", [&] {
      GrowthResult grown = curvature_grow(primary, region, face_curv, GrowthBounds{*config.kappa_min, *config.kappa_max});
      model.growth_iterations = grown.iterations;
      return std::move(grown.region);
    });
    strategy = PreGrowthCopy{model.pre_growth};
  }
  model.bone_attached = run_stage(model, "regularize", [&] {
    FaceSelection clean = regularize_boundary(region);
    if (clean.empty()) throw GeometryError("region vanished while removing boundary chords");
    return largest_component(clean);
  });
  model.extrusion_subset =
      run_stage(model, "extrusion_subset", [&] { return select_extrusion_subset(model.bone_attached, strategy); });

  const std::vector<Vec3> normals = run_stage(model, "normals", [&] { return vertex_normals(primary); });
  model.extrusion = run_stage(model, "extrusion", [&] { return extrude(primary, model.extrusion_subset, index, normals); });
  if (!model.extrusion.folded_faces.empty()) {
    model.warnings.push_back(std::to_string(model.extrusion.folded_faces.size()) +
                             " extruded faces flipped orientation; the sheet may self-intersect");
  }

  run_stage(model, "blend", [&] {
    BlendProblem problem = assemble_blend_problem(model.bone_attached, model.extrusion_subset,
                                                  model.extrusion.heights, config.bounds_enabled);
    model.blend = solve_biharmonic(problem);
    model.ring = std::move(problem.ring);
    model.blended_ring = apply_blend(primary, model.ring, model.blend, normals);
  });

  model.offsets = model.extrusion.heights;
  for (std::size_t i = 0; i < model.blend.vertex.size(); ++i) {
    model.offsets[static_cast<std::size_t>(model.blend.vertex[i])] = model.blend.weight[i];
  }

  model.assembled = run_stage(model, "assembly", [&] {
    return assemble_cartilage(model.bone_attached, model.extrusion.surface, model.blended_ring);
  });
  return model;
}

namespace {

void run_side(const TriMesh& primary, const TriMesh& secondary, const PipelineConfig& config,
              std::optional<CartilageModel>& model, std::optional<SideFailure>& failure) {
  try {
    model = run_pipeline(primary, secondary, config);
  } catch (const StageError& e) {
    failure = SideFailure{e.stage(), e.what()};
  } catch (const Error& e) {
    failure = SideFailure{"", e.what()};
  }
}

}  // namespace

JointResult run_joint(const TriMesh& femur, const TriMesh& pelvis, const PipelineConfig& femoral_config,
                      const PipelineConfig& pelvic_config) {
  femoral_config.validate();
  pelvic_config.validate();

  JointResult out;
  // Sequential so that per-side stage timings are not skewed by each other.
  run_side(femur, pelvis, femoral_config, out.femoral, out.femoral_error);
  run_side(pelvis, femur, pelvic_config, out.pelvic, out.pelvic_error);

  if (out.femoral) out.femoral_metrics = model_metrics(*out.femoral);
  if (out.pelvic) out.pelvic_metrics = model_metrics(*out.pelvic);
  if (out.femoral && out.pelvic) {
    try {
      out.pelvic_metrics->coverage_percentage =
          coverage_percentage(out.pelvic->bone_attached, out.femoral->bone_attached);
    } catch (const GeometryError& e) {
      out.pelvic->warnings.push_back(std::string("coverage percentage unavailable: ") + e.what());
    }
    out.femoral_metrics->contact_area = contact_area(*out.femoral, *out.pelvic, femoral_config.contact_epsilon);
    out.pelvic_metrics->contact_area = contact_area(*out.pelvic, *out.femoral, pelvic_config.contact_epsilon);
    out.congruence = congruence(out.femoral->extrusion, out.pelvic->extrusion);
  }
  return out;
}

}  // namespace cargen
