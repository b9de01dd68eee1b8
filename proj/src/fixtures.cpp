#include "cargen/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "cargen/error.hpp"

namespace cargen {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InputError(std::string("invalid fixture parameters: ") + what);
}

int steps_for(double length, double edge) { return std::max(1, static_cast<int>(std::ceil(length / edge - 1e-9))); }

}  // namespace

TriMesh revolve(std::span<const ProfilePoint> profile, int segments) {
  require(segments >= 3, "at least 3 segments");
  require(profile.size() >= 2, "profile needs two points");
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) require(profile[i].rho > 0.0, "interior profile radius > 0");
  require(profile.front().rho > 0.0 || profile.back().rho > 0.0 || profile.size() > 2, "profile is degenerate");

  std::vector<Vec3> verts;
  std::vector<int> ring_start(profile.size());
  std::vector<double> cs(static_cast<std::size_t>(segments)), sn(static_cast<std::size_t>(segments));
  for (int j = 0; j < segments; ++j) {
    const double phi = 2.0 * std::numbers::pi * j / segments;
    cs[static_cast<std::size_t>(j)] = std::cos(phi);
    sn[static_cast<std::size_t>(j)] = std::sin(phi);
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    ring_start[i] = static_cast<int>(verts.size());
    const ProfilePoint& p = profile[i];
    if (p.rho == 0.0) {
      verts.emplace_back(0.0, 0.0, p.z);
    } else {
      for (int j = 0; j < segments; ++j) {
        verts.emplace_back(p.rho * cs[static_cast<std::size_t>(j)], p.rho * sn[static_cast<std::size_t>(j)], p.z);
      }
    }
  }

  std::vector<Face> faces;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const bool pole_a = profile[i].rho == 0.0, pole_b = profile[i + 1].rho == 0.0;
    const int a0 = ring_start[i], b0 = ring_start[i + 1];
    for (int j = 0; j < segments; ++j) {
      const int jn = (j + 1) % segments;
      if (pole_a) {
        faces.push_back({a0, b0 + j, b0 + jn});
      } else if (pole_b) {
        faces.push_back({a0 + j, b0, a0 + jn});
      } else {
        faces.push_back({a0 + j, b0 + j, b0 + jn});
        faces.push_back({a0 + j, b0 + jn, a0 + jn});
      }
    }
  }
  return TriMesh(std::move(verts), std::move(faces));
}

TriMesh orient_outward(TriMesh mesh) {
  if (mesh.signed_volume() >= 0.0) return mesh;
  std::vector<Face> faces(mesh.faces());
  for (Face& f : faces) std::swap(f[1], f[2]);
  return TriMesh(mesh.vertices(), std::move(faces));
}

TriMesh make_icosphere(double radius, int subdivisions) {
  require(radius > 0.0, "radius > 0");
  require(subdivisions >= 0 && subdivisions <= 9, "0 <= subdivisions <= 9");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& p : v) p.normalize();
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
                         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
                         {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<int, int>, int> midpoint;
    const auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<Face> next;
    next.reserve(f.size() * 4);
    for (const Face& t3 : f) {
      const int ab = mid(t3[0], t3[1]), bc = mid(t3[1], t3[2]), ca = mid(t3[2], t3[0]);
      next.push_back({t3[0], ab, ca});
      next.push_back({t3[1], bc, ab});
      next.push_back({t3[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  for (Vec3& p : v) p *= radius;
  return orient_outward(TriMesh(std::move(v), std::move(f)));
}

TriMesh make_uv_sphere(double radius, int rings, int segments) {
  require(radius > 0.0, "radius > 0");
  require(rings >= 2, "rings >= 2");
  std::vector<ProfilePoint> profile;
  for (int i = 0; i <= rings; ++i) {
    const double theta = std::numbers::pi * i / rings;
    const bool pole = i == 0 || i == rings;
    profile.push_back({pole ? 0.0 : radius * std::sin(theta), radius * std::cos(theta)});
  }
  return orient_outward(revolve(profile, segments));
}

TriMesh make_cylinder(double radius, double height, int rings, int segments, bool capped) {
  require(radius > 0.0 && height > 0.0, "radius and height > 0");
  require(rings >= 1, "rings >= 1");
  std::vector<ProfilePoint> profile;
  const double top = 0.5 * height, step = height / rings;
  const int cap_rings = capped ? steps_for(radius, step) : 0;
  for (int m = 0; m < cap_rings; ++m) profile.push_back({radius * m / cap_rings, top});
  for (int i = 0; i <= rings; ++i) profile.push_back({radius, i == rings ? -top : top - step * i});
  for (int m = cap_rings - 1; m >= 0; --m) profile.push_back({radius * m / cap_rings, -top});
  TriMesh mesh = revolve(profile, segments);
  return capped ? orient_outward(std::move(mesh)) : mesh;
}

TriMesh make_sphere_cap(double radius, double half_angle, int rings, int segments) {
  require(radius > 0.0, "radius > 0");
  require(half_angle > 0.0 && half_angle < std::numbers::pi, "0 < half angle < pi");
  require(rings >= 1, "rings >= 1");
  std::vector<ProfilePoint> profile;
  for (int i = 0; i <= rings; ++i) {
    const double theta = half_angle * i / rings;
    profile.push_back({i == 0 ? 0.0 : radius * std::sin(theta), radius * std::cos(theta)});
  }
  return revolve(profile, segments);
}

TriMesh make_flat_disk(double radius, int rings, int segments) {
  require(radius > 0.0, "radius > 0");
  require(rings >= 1, "rings >= 1");
  std::vector<ProfilePoint> profile;
  for (int i = 0; i <= rings; ++i) profile.push_back({radius * i / rings, 0.0});
  return revolve(profile, segments);
}

TriMesh make_grid_box(const Vec3& lo, const Vec3& hi, double spacing) {
  require(spacing > 0.0, "spacing > 0");
  require((hi - lo).minCoeff() > 0.0, "box extents > 0");
  const std::array<int, 3> n = {steps_for(hi.x() - lo.x(), spacing), steps_for(hi.y() - lo.y(), spacing),
                                steps_for(hi.z() - lo.z(), spacing)};
  const auto coord = [&](int axis, int i) {
    return i == n[static_cast<std::size_t>(axis)] ? hi[axis] : lo[axis] + (hi[axis] - lo[axis]) * i / n[static_cast<std::size_t>(axis)];
  };
  const std::size_t nx = static_cast<std::size_t>(n[0]) + 1, ny = static_cast<std::size_t>(n[1]) + 1,
                    nz = static_cast<std::size_t>(n[2]) + 1;
  std::vector<int> id(nx * ny * nz, -1);
  std::vector<Vec3> verts;
  const auto vertex = [&](std::array<int, 3> ijk) {
    int& slot = id[(static_cast<std::size_t>(ijk[0]) * ny + static_cast<std::size_t>(ijk[1])) * nz +
                   static_cast<std::size_t>(ijk[2])];
    if (slot < 0) {
      slot = static_cast<int>(verts.size());
      verts.emplace_back(coord(0, ijk[0]), coord(1, ijk[1]), coord(2, ijk[2]));
    }
    return slot;
  };

  std::vector<Face> faces;
  // Each side: fixed axis at index 0 or n, and (u, v) axes with u x v outward.
  struct Side {
    int fixed, u, v;
    bool at_max;
  };
  const Side sides[6] = {{2, 0, 1, true}, {2, 1, 0, false}, {0, 1, 2, true},
                         {0, 2, 1, false}, {1, 2, 0, true}, {1, 0, 2, false}};
  for (const Side& s : sides) {
    const int nu = n[static_cast<std::size_t>(s.u)], nv = n[static_cast<std::size_t>(s.v)];
    const int fixed_index = s.at_max ? n[static_cast<std::size_t>(s.fixed)] : 0;
    const auto at = [&](int iu, int iv) {
      std::array<int, 3> ijk{};
      ijk[static_cast<std::size_t>(s.fixed)] = fixed_index;
      ijk[static_cast<std::size_t>(s.u)] = iu;
      ijk[static_cast<std::size_t>(s.v)] = iv;
      return vertex(ijk);
    };
    for (int iu = 0; iu < nu; ++iu) {
      for (int iv = 0; iv < nv; ++iv) {
        const int a = at(iu, iv), b = at(iu + 1, iv), c = at(iu + 1, iv + 1), d = at(iu, iv + 1);
        faces.push_back({a, b, c});
        faces.push_back({a, c, d});
      }
    }
  }
  return TriMesh(std::move(verts), std::move(faces));
}

MeshPair make_plate_pair(double width, double thickness, double gap, double spacing) {
  require(width > 0.0 && thickness > 0.0 && gap > 0.0, "width, thickness and gap > 0");
  return {make_grid_box({0.0, 0.0, -thickness}, {width, width, 0.0}, spacing),
          make_grid_box({0.0, 0.0, gap}, {width, width, gap + thickness}, spacing)};
}

namespace {

struct BallProfile {
  std::vector<ProfilePoint> points;
  std::vector<double> cap_theta;  // polar angles of the sphere samples, pole first
  int segments = 0;
  double crease_z = 0.0;
};

BallProfile ball_profile(const SphereNeckParams& p) {
  require(p.radius > 0.0 && p.edge_length > 0.0, "radius and edge length > 0");
  require(p.neck_radius > 0.0 && p.neck_radius < p.radius, "0 < neck radius < radius");
  require(p.neck_length > 0.0, "neck length > 0");
  require(p.band_rings >= 0, "band rings >= 0");
  BallProfile out;
  // Junction below the equator, where the sphere's radius equals the neck's.
  const double theta0 = std::numbers::pi - std::asin(p.neck_radius / p.radius);
  out.crease_z = p.radius * std::cos(theta0);
  const int n_cap = steps_for(p.radius * theta0, p.edge_length);
  for (int i = 0; i <= n_cap; ++i) {
    const double theta = theta0 * i / n_cap;
    out.cap_theta.push_back(theta);
    if (i == 0) {
      out.points.push_back({0.0, p.radius});
    } else if (i == n_cap) {
      out.points.push_back({p.neck_radius, out.crease_z});
    } else {
      out.points.push_back({p.radius * std::sin(theta), p.radius * std::cos(theta)});
    }
  }
  const int n_neck = steps_for(p.neck_length, p.edge_length);
  const double bottom = out.crease_z - p.neck_length;
  for (int k = 1; k <= n_neck; ++k) {
    out.points.push_back({p.neck_radius, k == n_neck ? bottom : out.crease_z - p.neck_length * k / n_neck});
  }
  const int n_bottom = steps_for(p.neck_radius, p.edge_length);
  for (int m = 1; m <= n_bottom; ++m) out.points.push_back({p.neck_radius * (n_bottom - m) / n_bottom, bottom});
  out.segments = std::max(3, steps_for(2.0 * std::numbers::pi * p.radius, p.edge_length));
  return out;
}

}  // namespace

SphereNeck make_sphere_neck(const SphereNeckParams& params) {
  const BallProfile profile = ball_profile(params);
  SphereNeck out;
  out.mesh = orient_outward(revolve(profile.points, profile.segments));
  out.cap_steps = static_cast<int>(profile.cap_theta.size()) - 1;
  out.crease_z = profile.crease_z;

  // Ring distance of every vertex from the crease loop.
  const TriMesh& mesh = out.mesh;
  const int crease_first = 1 + (out.cap_steps - 1) * profile.segments;  // pole + full rings before it
  std::vector<int> dist(mesh.num_vertices(), -1);
  std::deque<int> queue;
  for (int j = 0; j < profile.segments; ++j) {
    dist[static_cast<std::size_t>(crease_first + j)] = 0;
    queue.push_back(crease_first + j);
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : mesh.vertex_neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  out.labels.resize(mesh.num_faces());
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& t = mesh.face(static_cast<int>(f));
    int near = dist[static_cast<std::size_t>(t[0])];
    double zsum = 0.0;
    for (int v : t) {
      near = std::min(near, dist[static_cast<std::size_t>(v)]);
      zsum += mesh.vertex(v).z();
    }
    if (near <= params.band_rings) {
      out.labels[f] = NeckLabel::transition;
    } else {
      out.labels[f] = zsum / 3.0 > out.crease_z ? NeckLabel::cap : NeckLabel::neck;
    }
  }
  return out;
}

MeshPair make_ball_socket(const BallSocketParams& params) {
  require(params.gap > 0.0 && params.thickness > 0.0, "gap and thickness > 0");
  const BallProfile ball = ball_profile(params.ball);
  const double half = 0.5 * params.cap_angle;
  require(half > 0.0 && half < ball.cap_theta.back(), "socket must stop above the neck");

  // Socket rim on the last polar sample of the ball inside the opening, so inner vertices stay aligned.
  const double dtheta = ball.cap_theta[1];
  const int k = std::clamp(static_cast<int>(std::floor(half / dtheta + 1e-9)), 1,
                           static_cast<int>(ball.cap_theta.size()) - 2);
  const double inner = params.ball.radius + params.gap;
  const double outer = inner + params.thickness;
  std::vector<ProfilePoint> socket;
  for (int i = 0; i <= k; ++i) {
    const double th = ball.cap_theta[static_cast<std::size_t>(i)];
    socket.push_back({i == 0 ? 0.0 : inner * std::sin(th), inner * std::cos(th)});
  }
  const double rim = ball.cap_theta[static_cast<std::size_t>(k)];
  const int n_rim = steps_for(params.thickness, params.ball.edge_length);
  for (int m = 1; m <= n_rim; ++m) {
    const double r = m == n_rim ? outer : inner + params.thickness * m / n_rim;
    socket.push_back({r * std::sin(rim), r * std::cos(rim)});
  }
  for (int i = k - 1; i >= 0; --i) {
    const double th = ball.cap_theta[static_cast<std::size_t>(i)];
    socket.push_back({i == 0 ? 0.0 : outer * std::sin(th), outer * std::cos(th)});
  }
  return {orient_outward(revolve(ball.points, ball.segments)), orient_outward(revolve(socket, ball.segments))};
}

std::string_view to_string(FixtureKind kind) {
  switch (kind) {
    case FixtureKind::icosphere: return "icosphere";
    case FixtureKind::uv_sphere: return "uv_sphere";
    case FixtureKind::cylinder: return "cylinder";
    case FixtureKind::plate_pair: return "plate_pair";
    case FixtureKind::ball_socket: return "ball_socket";
    case FixtureKind::sphere_neck: return "sphere_neck";
  }
  return "icosphere";
}

FixtureKind parse_fixture_kind(std::string_view name) {
  for (FixtureKind k : {FixtureKind::icosphere, FixtureKind::uv_sphere, FixtureKind::cylinder, FixtureKind::plate_pair,
                        FixtureKind::ball_socket, FixtureKind::sphere_neck}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown fixture kind '" + std::string(name) + "'");
}

void FixtureSpec::validate() const {
  require(radius > 0.0 && height > 0.0 && neck_length > 0.0, "radius, height and neck length > 0");
  require(gap > 0.0 && width > 0.0 && thickness > 0.0, "gap, width and thickness > 0");
  require(edge_length > 0.0, "edge length > 0");
  require(neck_radius >= 0.0 && neck_radius < radius, "0 <= neck radius < radius");
  require(cap_angle_deg > 0.0 && cap_angle_deg < 360.0, "0 < cap angle < 360");
  require(subdivisions >= 0 && subdivisions <= 9, "0 <= subdivisions <= 9");
}

Fixture make_fixture(const FixtureSpec& spec) {
  spec.validate();
  const auto around = [&](double r) { return std::max(3, steps_for(2.0 * std::numbers::pi * r, spec.edge_length)); };
  SphereNeckParams ball;
  ball.radius = spec.radius;
  ball.neck_radius = spec.neck_radius > 0.0 ? spec.neck_radius : 0.96 * spec.radius;
  ball.neck_length = spec.neck_length;
  ball.edge_length = spec.edge_length;

  Fixture out;
  switch (spec.kind) {
    case FixtureKind::icosphere:
      out.primary = make_icosphere(spec.radius, spec.subdivisions);
      break;
    case FixtureKind::uv_sphere:
      out.primary = make_uv_sphere(spec.radius, std::max(2, steps_for(std::numbers::pi * spec.radius, spec.edge_length)),
                                   around(spec.radius));
      break;
    case FixtureKind::cylinder:
      out.primary = make_cylinder(spec.radius, spec.height, steps_for(spec.height, spec.edge_length),
                                  around(spec.radius), spec.capped);
      break;
    case FixtureKind::plate_pair: {
      MeshPair p = make_plate_pair(spec.width, spec.thickness, spec.gap, spec.edge_length);
      out.primary = std::move(p.first);
      out.secondary = std::move(p.second);
      break;
    }
    case FixtureKind::ball_socket: {
      BallSocketParams bs;
      bs.ball = ball;
      bs.gap = spec.gap;
      bs.thickness = spec.thickness;
      bs.cap_angle = spec.cap_angle_deg * std::numbers::pi / 180.0;
      MeshPair p = make_ball_socket(bs);
      out.primary = std::move(p.first);
      out.secondary = std::move(p.second);
      break;
    }
    case FixtureKind::sphere_neck:
      out.primary = make_sphere_neck(ball).mesh;
      break;
  }
  return out;
}

}  // namespace cargen
