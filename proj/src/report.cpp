#include "cargen/report.hpp"

#include <cmath>

namespace cargen {

namespace {

using json = nlohmann::ordered_json;

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double two_decimals(double seconds) { return std::round(seconds * 100.0) / 100.0; }

template <class T, class F>
json optional_json(const std::optional<T>& v, F&& to_json) {
  return v ? to_json(*v) : json(nullptr);
}

}  // namespace

json config_json(const PipelineConfig& c) {
  json j;
  j["side"] = std::string(to_string(c.side));
  j["delta"] = number(c.delta);
  j["n_trim"] = c.n_trim;
  j["extrusion_trim"] = optional_json(c.extrusion_trim, [](int v) { return json(v); });
  j["neighborhood"] = optional_json(c.neighborhood, [](int v) { return json(v); });
  j["kappa_min"] = optional_json(c.kappa_min, number);
  j["kappa_max"] = optional_json(c.kappa_max, number);
  j["curvature_measure"] =
      optional_json(c.curvature_measure, [](CurvatureMeasure m) { return json(std::string(to_string(m))); });
  j["bounds_enabled"] = c.bounds_enabled;
  j["contact_epsilon"] = number(c.contact_epsilon);
  return j;
}

json model_json(const CartilageModel& model, const CartilageMetrics& metrics) {
  const PipelineConfig& c = model.config;
  json j;
  j["side"] = std::string(to_string(c.side));
  j["degenerate"] = model.degenerate;

  json m;
  m["mean_thickness_mm"] = metrics.mean_thickness;
  m["thickness_sd_mm"] = metrics.thickness_sd;
  m["coverage_area_mm2"] = metrics.coverage_area;
  m["coverage_percentage"] = optional_json(metrics.coverage_percentage, [](double v) { return json(v); });
  m["contact_area_mm2"] = optional_json(metrics.contact_area, [](double v) { return json(v); });
  j["metrics"] = m;

  json timings = json::object();
  for (const StageTiming& t : model.timings) timings[t.stage] = two_decimals(t.seconds);
  timings["total"] = two_decimals(model.total_seconds());
  j["timings_s"] = timings;

  j["config"] = config_json(c);

  json design;
  design["curvature_measure"] =
      c.side == Side::femoral && c.curvature_measure ? json(std::string(to_string(*c.curvature_measure))) : json(nullptr);
  design["curvature_fit"] = "quadric_6_coefficient_k_ring";
  design["gap_distance"] = "vertex_to_vertex";
  design["extrusion_height"] = "half_nearest_gap";
  design["extrusion_subset"] = c.side == Side::femoral ? "pre_growth_copy" : "trim_layers";
  design["blend_energy"] = "cotangent_lumped_mass_bilaplacian";
  design["blend_bounds"] = c.bounds_enabled ? "active_set_0_to_max_rim_height" : "none";
  design["thickness_definition"] = "area_weighted_applied_offset";
  design["coverage_denominator"] = "fitted_femoral_head_sphere_area";
  design["contact_definition"] = "barycenter_within_epsilon_of_opposing_surface";
  j["design"] = design;

  json counts;
  counts["bone_attached_faces"] = model.bone_attached.size();
  counts["pre_growth_faces"] = model.pre_growth.size();
  counts["extruded_faces"] = model.extrusion_subset.size();
  counts["ring_faces"] = model.ring.size();
  counts["assembled_vertices"] = model.assembled.num_vertices();
  counts["assembled_faces"] = model.assembled.num_faces();
  counts["growth_iterations"] = model.growth_iterations;
  counts["curvature_enlarged_vertices"] = model.curvature_enlarged;
  counts["folded_extruded_faces"] = model.extrusion.folded_faces.size();
  j["counts"] = counts;

  json solver;
  solver["iterations"] = model.blend.report.iterations;
  solver["residual"] = model.blend.report.residual;
  solver["active_bounds"] = model.blend.report.active_bounds;
  j["blend_solver"] = solver;

  j["warnings"] = model.warnings;
  return j;
}

json run_report(const CartilageModel& model, const CartilageMetrics& metrics) {
  json j;
  j["models"] = json::array({model_json(model, metrics)});
  return j;
}

json joint_report(const JointResult& joint) {
  json j;
  j["models"] = json::array();
  const auto side = [&](const char* name, const std::optional<CartilageModel>& model,
                        const std::optional<CartilageMetrics>& metrics, const std::optional<SideFailure>& error) {
    if (model) {
      j["models"].push_back(model_json(*model, *metrics));
    } else if (error) {
      json e;
      e["side"] = name;
      e["error"] = {{"stage", error->stage.empty() ? json(nullptr) : json(error->stage)}, {"message", error->message}};
      j["models"].push_back(e);
    }
  };
  side("femoral", joint.femoral, joint.femoral_metrics, joint.femoral_error);
  side("pelvic", joint.pelvic, joint.pelvic_metrics, joint.pelvic_error);
  if (joint.congruence) {
    const CongruenceStats& c = *joint.congruence;
    j["congruence"] = {{"pairs", c.pairs},
                       {"max_gap_mm", c.max_gap},
                       {"mean_gap_mm", c.mean_gap},
                       {"max_relative_gap", c.max_relative_gap}};
  } else {
    j["congruence"] = nullptr;
  }
  return j;
}

}  // namespace cargen
