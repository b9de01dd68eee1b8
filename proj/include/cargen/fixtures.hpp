#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cargen/mesh.hpp"

namespace cargen {

/// A point of a profile curve in the (radius from z axis, z) half plane.
struct ProfilePoint {
  double rho;
  double z;
};

/// Surface of revolution about the z axis with `segments` samples per turn.
/// Profile points with rho == 0 (allowed only at either end) collapse to a
/// single pole vertex. Faces face along d(profile) x d(phi); with a profile
/// that runs from the north pole southward this is outward.
TriMesh revolve(std::span<const ProfilePoint> profile, int segments);

/// Flips every face when the mesh's signed volume is negative.
TriMesh orient_outward(TriMesh mesh);

/// Subdivided icosahedron projected to the sphere, centered at the origin.
TriMesh make_icosphere(double radius, int subdivisions);
/// Latitude-longitude sphere.
TriMesh make_uv_sphere(double radius, int rings, int segments);
/// Cylinder along z centered at the origin; open tube unless `capped`.
TriMesh make_cylinder(double radius, double height, int rings, int segments, bool capped);
/// Open spherical cap around +z with polar half angle `half_angle` (radians).
TriMesh make_sphere_cap(double radius, double half_angle, int rings, int segments);
/// Flat disk in the z = 0 plane, normals +z.
TriMesh make_flat_disk(double radius, int rings, int segments);
/// Closed axis-aligned box whose faces carry a lattice with about `spacing`
/// between grid lines. Equal inputs produce bit-identical coordinates.
TriMesh make_grid_box(const Vec3& lo, const Vec3& hi, double spacing);

struct MeshPair {
  TriMesh first;
  TriMesh second;
};

/// Two square plates; the top of the first lies at z = 0 and the bottom of the
/// second at z = gap. Their facing grids are vertically aligned.
MeshPair make_plate_pair(double width, double thickness, double gap, double spacing);

enum class NeckLabel : unsigned char { cap, transition, neck };

struct SphereNeckParams {
  double radius = 25.0;
  double neck_radius = 24.0;  // must be below radius
  double neck_length = 30.0;
  double edge_length = 1.0;   // target sampling step
  int band_rings = 0;         // faces within this many rings of the crease are `transition`
};

struct SphereNeck {
  TriMesh mesh;
  std::vector<NeckLabel> labels;  // per face
  int cap_steps = 0;              // profile samples on the sphere part
  double crease_z = 0.0;          // height of the sphere/neck junction
};

/// Sphere (center at the origin) joined to a cylindrical neck running toward
/// -z and closed by a flat disk. The sphere part is sampled uniformly in polar
/// angle from the +z pole down to the junction.
SphereNeck make_sphere_neck(const SphereNeckParams& params);

struct BallSocketParams {
  SphereNeckParams ball;
  double gap = 2.0;
  double cap_angle = 2.0943951023931957;  // full opening angle of the socket (rad), 120 degrees
  double thickness = 4.0;
};

/// Ball (a sphere with neck) and a thick spherical socket over its +z pole.
/// The socket's inner surface uses the ball's angular grid at radius
/// radius + gap, so the two are radially aligned vertex for vertex.
MeshPair make_ball_socket(const BallSocketParams& params);

enum class FixtureKind { icosphere, uv_sphere, cylinder, plate_pair, ball_socket, sphere_neck };

std::string_view to_string(FixtureKind kind);
/// Throws InputError for unknown names.
FixtureKind parse_fixture_kind(std::string_view name);

/// Dimensions in mm. Fields a kind does not use are ignored.
struct FixtureSpec {
  FixtureKind kind = FixtureKind::icosphere;
  double radius = 10.0;        // sphere/cylinder/ball radius
  double height = 20.0;        // cylinder height
  double neck_radius = 0.0;    // 0 picks 0.96 x radius
  double neck_length = 30.0;
  double gap = 2.0;            // plate_pair, ball_socket
  double width = 30.0;         // plate side length
  double thickness = 4.0;      // plate and socket thickness
  double cap_angle_deg = 120.0;
  double edge_length = 1.0;    // sampling step for all kinds except icosphere
  int subdivisions = 4;        // icosphere
  bool capped = true;          // cylinder

  /// Throws InputError on non-positive dimensions or resolution.
  void validate() const;
};

struct Fixture {
  TriMesh primary;
  std::optional<TriMesh> secondary;  // plate_pair: upper plate; ball_socket: socket
};

Fixture make_fixture(const FixtureSpec& spec);

}  // namespace cargen
