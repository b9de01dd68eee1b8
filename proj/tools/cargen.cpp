#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cargen/config.hpp"
#include "cargen/error.hpp"
#include "cargen/fixtures.hpp"
#include "cargen/measures.hpp"
#include "cargen/mesh_io.hpp"
#include "cargen/pipeline.hpp"
#include "cargen/report.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitStage = 3;

void write_json(const nlohmann::ordered_json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cargen::InputError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw cargen::InputError("failed writing '" + path + "'");
}

void warn_all(const cargen::CartilageModel& model, std::string_view side) {
  for (const std::string& w : model.warnings) std::cerr << "warning (" << side << "): " << w << '\n';
}

void save_model(const cargen::CartilageModel& model, const std::string& path, std::string_view side) {
  if (path.empty()) return;
  if (model.degenerate) {
    std::cerr << "warning (" << side << "): degenerate model, '" << path << "' not written\n";
    return;
  }
  cargen::save_mesh(model.assembled, path);
}

void save_offsets(const cargen::TriMesh& primary, const cargen::CartilageModel& model, const std::string& path) {
  if (path.empty()) return;
  cargen::SaveOptions options;
  options.vertex_scalar = &model.offsets;
  options.scalar_name = "weight";
  cargen::save_mesh(primary, path, cargen::MeshFormat::ply, options);
}

struct RunArgs {
  std::string primary, secondary, config, out, metrics, offsets;
};

int cmd_run(const RunArgs& a) {
  const cargen::PipelineConfig config = cargen::load_config(a.config);
  const cargen::TriMesh primary = cargen::load_mesh(a.primary);
  const cargen::TriMesh secondary = cargen::load_mesh(a.secondary);
  const cargen::CartilageModel model = cargen::run_pipeline(primary, secondary, config);
  warn_all(model, cargen::to_string(config.side));
  save_model(model, a.out, cargen::to_string(config.side));
  save_offsets(primary, model, a.offsets);
  write_json(cargen::run_report(model, cargen::model_metrics(model)), a.metrics);
  return 0;
}

struct JointArgs {
  std::string femur, pelvis, femoral_config, pelvic_config, femoral_out, pelvic_out, metrics;
};

int cmd_joint(const JointArgs& a) {
  const cargen::PipelineConfig fcfg = a.femoral_config.empty() ? cargen::default_config(cargen::Site::femoral)
                                                               : cargen::load_config(a.femoral_config);
  const cargen::PipelineConfig pcfg = a.pelvic_config.empty() ? cargen::default_config(cargen::Site::pelvic)
                                                              : cargen::load_config(a.pelvic_config);
  const cargen::TriMesh femur = cargen::load_mesh(a.femur);
  const cargen::TriMesh pelvis = cargen::load_mesh(a.pelvis);
  const cargen::JointResult joint = cargen::run_joint(femur, pelvis, fcfg, pcfg);

  if (joint.femoral) {
    warn_all(*joint.femoral, "femoral");
    save_model(*joint.femoral, a.femoral_out, "femoral");
  }
  if (joint.pelvic) {
    warn_all(*joint.pelvic, "pelvic");
    save_model(*joint.pelvic, a.pelvic_out, "pelvic");
  }
  write_json(cargen::joint_report(joint), a.metrics);
  for (const auto* err : {&joint.femoral_error, &joint.pelvic_error}) {
    if (*err) std::cerr << "error (" << (err == &joint.femoral_error ? "femoral" : "pelvic") << "): " << (*err)->message << '\n';
  }
  return joint.ok() ? 0 : kExitStage;
}

struct FixtureArgs {
  cargen::FixtureSpec spec;
  std::string kind = "icosphere";
  std::string out, secondary_out;
};

int cmd_fixture(FixtureArgs a) {
  a.spec.kind = cargen::parse_fixture_kind(a.kind);
  const cargen::Fixture fixture = cargen::make_fixture(a.spec);
  if (fixture.secondary && a.secondary_out.empty()) {
    throw cargen::InputError("fixture '" + a.kind + "' produces two meshes; pass --secondary-out");
  }
  cargen::save_mesh(fixture.primary, a.out);
  if (fixture.secondary) cargen::save_mesh(*fixture.secondary, a.secondary_out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generates articular cartilage meshes between two bone surfaces."};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Generate cartilage on one bone facing another");
  run_cmd->add_option("--primary", run.primary, "Bone the cartilage attaches to")->required();
  run_cmd->add_option("--secondary", run.secondary, "Opposing bone")->required();
  run_cmd->add_option("--config", run.config, "Pipeline config file")->required();
  run_cmd->add_option("--out", run.out, "Cartilage mesh output (.obj/.ply/.stl)")->required();
  run_cmd->add_option("--metrics", run.metrics, "Metrics JSON output")->required();
  run_cmd->add_option("--offsets", run.offsets, "Optional PLY of the primary bone with per-vertex applied offset");

  JointArgs joint;
  CLI::App* joint_cmd = app.add_subcommand("joint", "Generate femoral and pelvic cartilage of a hip joint");
  joint_cmd->add_option("--femur", joint.femur, "Femur mesh")->required();
  joint_cmd->add_option("--pelvis", joint.pelvis, "Pelvis mesh")->required();
  joint_cmd->add_option("--femoral-config", joint.femoral_config, "Femoral config (default: shipped femoral)");
  joint_cmd->add_option("--pelvic-config", joint.pelvic_config, "Pelvic config (default: shipped pelvic)");
  joint_cmd->add_option("--femoral-out", joint.femoral_out, "Femoral cartilage mesh output");
  joint_cmd->add_option("--pelvic-out", joint.pelvic_out, "Pelvic cartilage mesh output");
  joint_cmd->add_option("--metrics", joint.metrics, "Metrics JSON output")->required();

  std::string site;
  CLI::App* defaults_cmd = app.add_subcommand("defaults", "Print the shipped config of a site");
  defaults_cmd->add_option("--site", site, "femoral, pelvic, sacroiliac or pubic")->required();

  FixtureArgs fx;
  CLI::App* fixture_cmd = app.add_subcommand("fixture", "Write a synthetic test geometry");
  fixture_cmd->add_option("--kind", fx.kind, "icosphere, uv_sphere, cylinder, plate_pair, ball_socket, sphere_neck")
      ->required();
  fixture_cmd->add_option("--out", fx.out, "Mesh output")->required();
  fixture_cmd->add_option("--secondary-out", fx.secondary_out, "Second mesh of plate_pair/ball_socket");
  fixture_cmd->add_option("--radius", fx.spec.radius, "Sphere, cylinder or ball radius (mm)")->capture_default_str();
  fixture_cmd->add_option("--height", fx.spec.height, "Cylinder height (mm)")->capture_default_str();
  fixture_cmd->add_option("--neck-radius", fx.spec.neck_radius, "Neck radius (mm), 0 = 0.96 x radius")
      ->capture_default_str();
  fixture_cmd->add_option("--neck-length", fx.spec.neck_length, "Neck length (mm)")->capture_default_str();
  fixture_cmd->add_option("--gap", fx.spec.gap, "Gap between the two meshes (mm)")->capture_default_str();
  fixture_cmd->add_option("--width", fx.spec.width, "Plate side length (mm)")->capture_default_str();
  fixture_cmd->add_option("--thickness", fx.spec.thickness, "Plate or socket thickness (mm)")->capture_default_str();
  fixture_cmd->add_option("--cap-angle", fx.spec.cap_angle_deg, "Socket opening angle (degrees)")
      ->capture_default_str();
  fixture_cmd->add_option("--edge-length", fx.spec.edge_length, "Sampling step (mm)")->capture_default_str();
  fixture_cmd->add_option("--subdivisions", fx.spec.subdivisions, "Icosphere subdivision levels")
      ->capture_default_str();
  fixture_cmd->add_option("--capped", fx.spec.capped, "Close the cylinder ends")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*joint_cmd) return cmd_joint(joint);
    if (*defaults_cmd) {
      std::cout << cargen::format_config(cargen::default_config(cargen::parse_site(site)));
      return 0;
    }
    if (*fixture_cmd) return cmd_fixture(fx);
  } catch (const cargen::StageError& e) {
    std::cerr << "error: stage " << e.what() << '\n';
    return kExitStage;
  } catch (const cargen::GeometryError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitStage;
  } catch (const cargen::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
