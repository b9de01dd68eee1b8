#include <doctest.h>

#include "cargen/error.hpp"
#include "cargen/fixtures.hpp"
#include "cargen/measures.hpp"
#include "cargen/pipeline.hpp"
#include "cargen/report.hpp"
#include "support.hpp"

using namespace cargen;

namespace {

PipelineConfig plate_config() {
  PipelineConfig c = default_config(Site::pubic);
  c.delta = 2.08;  // above the top-face gaps, below the side faces
  c.n_trim = 1;
  c.extrusion_trim = 1;
  return c;
}

PipelineConfig femoral_config() {
  PipelineConfig c = default_config(Site::femoral);
  c.neighborhood = 4;
  return c;
}

void check_closed(const CartilageModel& m) {
  CHECK(m.assembled.boundary_edge_count() == 0);
  CHECK(m.assembled.is_consistently_oriented());
  CHECK(m.assembled.euler_characteristic() == 2);
  CHECK(m.assembled.signed_volume() > 0.0);
}

std::vector<std::string> stage_names(const CartilageModel& m) {
  std::vector<std::string> out;
  for (const StageTiming& t : m.timings) out.push_back(t.stage);
  return out;
}

}  // namespace

TEST_CASE("generic path on parallel plates") {
  const MeshPair plates = make_plate_pair(16.0, 2.0, 2.0, 0.5);
  const PipelineConfig cfg = plate_config();
  const CartilageModel m = run_pipeline(plates.first, plates.second, cfg);
  CHECK_FALSE(m.degenerate);
  CHECK(m.config == cfg);
  check_closed(m);
  CHECK(m.ring.size() == m.bone_attached.size() - m.extrusion_subset.size());
  CHECK(m.extrusion_subset.is_subset_of(m.bone_attached));
  for (int v : m.extrusion_subset.vertices()) CHECK(m.extrusion.heights[static_cast<std::size_t>(v)] == 1.0);
  for (int f : m.bone_attached.faces()) CHECK(plates.first.face_normal(f).z() > 0.99);
  for (double w : m.blend.weight) {
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
  }
  const ThicknessStats t = mean_thickness(m);
  CHECK(t.mean > 0.85);
  CHECK(t.mean <= 1.0);
  CHECK(stage_names(m) == std::vector<std::string>{"index", "distance_filter", "trim", "cluster", "gap_check", "regularize",
                                                  "extrusion_subset", "normals", "extrusion", "blend", "assembly"});
  CHECK(m.total_seconds() >= 0.0);
}

TEST_CASE("runs are deterministic and rigidly invariant") {
  const MeshPair plates = make_plate_pair(12.0, 2.0, 2.0, 0.5);
  const PipelineConfig cfg = plate_config();
  const CartilageModel a = run_pipeline(plates.first, plates.second, cfg);
  const CartilageModel b = run_pipeline(plates.first, plates.second, cfg);
  CHECK(a.assembled.vertices() == b.assembled.vertices());
  CHECK(a.assembled.faces() == b.assembled.faces());

  const Eigen::Matrix3d r = testing::some_rotation();
  const Vec3 t(10, -20, 5);
  const TriMesh p1 = testing::transformed(plates.first, r, t);
  const TriMesh p2 = testing::transformed(plates.second, r, t);
  const CartilageModel c = run_pipeline(p1, p2, cfg);
  CHECK(std::vector<int>(c.bone_attached.faces().begin(), c.bone_attached.faces().end()) ==
        std::vector<int>(a.bone_attached.faces().begin(), a.bone_attached.faces().end()));
  const CartilageMetrics ma = model_metrics(a), mc = model_metrics(c);
  CHECK(mc.mean_thickness == doctest::Approx(ma.mean_thickness).epsilon(1e-6));
  CHECK(mc.thickness_sd == doctest::Approx(ma.thickness_sd).epsilon(1e-6));
  CHECK(mc.coverage_area == doctest::Approx(ma.coverage_area).epsilon(1e-6));
}

TEST_CASE("femoral path on a ball in a socket") {
  const MeshPair j = make_ball_socket({});
  const PipelineConfig cfg = femoral_config();
  const CartilageModel m = run_pipeline(j.first, j.second, cfg);
  check_closed(m);
  CHECK(m.growth_iterations > 0);
  CHECK(m.pre_growth.size() < m.bone_attached.size());
  CHECK(m.extrusion_subset.is_subset_of(m.pre_growth));
  CHECK(m.ring.size() == m.bone_attached.size() - m.extrusion_subset.size());
  // Growth stays on the ball, above the neck.
  for (int f : m.bone_attached.faces()) CHECK(testing::barycenter(j.first, f).z() > -10.0);
  const auto names = stage_names(m);
  CHECK(std::find(names.begin(), names.end(), "curvature") != names.end());
  CHECK(std::find(names.begin(), names.end(), "growth") != names.end());
  const ThicknessStats t = mean_thickness(m);
  CHECK(t.mean > 0.3);
  CHECK(t.mean < 1.05);
}

TEST_CASE("stage failures name their stage") {
  const MeshPair plates = make_plate_pair(8.0, 2.0, 2.0, 0.5);
  PipelineConfig cfg = plate_config();
  cfg.delta = 1.0;
  try {
    run_pipeline(plates.first, plates.second, cfg);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "distance_filter");
  }
  cfg = plate_config();
  cfg.n_trim = 100;
  try {
    run_pipeline(plates.first, plates.second, cfg);
    FAIL("expected a stage error");
  } catch (const StageError& e) {
    CHECK(e.stage() == "trim");
  }
  cfg = plate_config();
  cfg.delta = -1.0;
  CHECK_THROWS_AS(run_pipeline(plates.first, plates.second, cfg), InputError);
}

TEST_CASE("identical bones give a degenerate model") {
  const TriMesh s = make_icosphere(10.0, 3);
  const CartilageModel m = run_pipeline(s, s, default_config(Site::pelvic));
  CHECK(m.degenerate);
  CHECK(m.assembled.empty());
  for (double h : m.offsets) CHECK(h == 0.0);
  CHECK_FALSE(m.warnings.empty());
  const CartilageMetrics metrics = model_metrics(m);
  CHECK(metrics.mean_thickness == 0.0);
}

TEST_CASE("joint run reports sides independently") {
  const MeshPair j = make_ball_socket({});
  SUBCASE("both sides") {
    const JointResult r = run_joint(j.first, j.second, femoral_config(), default_config(Site::pelvic));
    REQUIRE(r.ok());
    REQUIRE(r.congruence.has_value());
    CHECK(r.congruence->max_relative_gap < 0.02);
    REQUIRE(r.pelvic_metrics->coverage_percentage.has_value());
    CHECK(*r.pelvic_metrics->coverage_percentage > 0.0);
    CHECK(*r.femoral_metrics->contact_area > 0.0);

    const auto report = joint_report(r);
    REQUIRE(report["models"].size() == 2);
    const auto& f = report["models"][0];
    CHECK(f["side"] == "femoral");
    CHECK(f["design"]["curvature_measure"] == "mean");
    CHECK(f["design"]["thickness_definition"] == "area_weighted_applied_offset");
    CHECK(f["config"]["kappa_max"] == "inf");
    CHECK(f["config"]["neighborhood"] == 4);
    CHECK(report["models"][1]["config"]["neighborhood"].is_null());
    for (const auto& [stage, secs] : f["timings_s"].items()) {
      const double s = secs.get<double>();
      CHECK(std::abs(s * 100.0 - std::round(s * 100.0)) < 1e-6);
    }
    CHECK(f["timings_s"].begin().key() == "index");
    CHECK(report["congruence"]["pairs"].get<std::size_t>() == r.congruence->pairs);
  }
  SUBCASE("failing femoral side") {
    PipelineConfig bad = femoral_config();
    bad.delta = 0.5;
    const JointResult r = run_joint(j.first, j.second, bad, default_config(Site::pelvic));
    CHECK_FALSE(r.ok());
    REQUIRE(r.femoral_error.has_value());
    CHECK(r.femoral_error->stage == "distance_filter");
    CHECK(r.pelvic.has_value());
    CHECK_FALSE(r.congruence.has_value());
    const auto report = joint_report(r);
    CHECK(report["models"][0]["error"]["stage"] == "distance_filter");
    CHECK(report["models"][1]["side"] == "pelvic");
    CHECK(report["congruence"].is_null());
  }
  SUBCASE("invalid config is rejected up front") {
    PipelineConfig bad = femoral_config();
    bad.neighborhood.reset();
    CHECK_THROWS_AS(run_joint(j.first, j.second, bad, default_config(Site::pelvic)), InputError);
  }
}

TEST_CASE("single-run report") {
  const MeshPair plates = make_plate_pair(8.0, 2.0, 2.0, 0.5);
  const CartilageModel m = run_pipeline(plates.first, plates.second, plate_config());
  const auto j = run_report(m, model_metrics(m));
  REQUIRE(j["models"].size() == 1);
  const auto& model = j["models"][0];
  CHECK(model["side"] == "generic");
  CHECK(model["degenerate"] == false);
  CHECK(model["metrics"]["coverage_percentage"].is_null());
  CHECK(model["config"]["delta"] == 2.08);
  CHECK(model["config"]["kappa_min"].is_null());
  CHECK(model["design"]["curvature_measure"].is_null());
  CHECK(model["counts"]["assembled_faces"] == m.assembled.num_faces());
  CHECK(model["timings_s"].contains("total"));
}
