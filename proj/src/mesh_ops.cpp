#include "cargen/mesh_ops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_map>

#include "cargen/error.hpp"

namespace cargen {

Vec3 face_barycenter(const TriMesh& mesh, int face) {
  const Face& t = mesh.face(face);
  return (mesh.vertex(t[0]) + mesh.vertex(t[1]) + mesh.vertex(t[2])) / 3.0;
}

std::vector<Vec3> vertex_normals(const TriMesh& mesh) {
  std::vector<Vec3> normals(mesh.num_vertices(), Vec3::Zero());
  for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
    const Face& t = mesh.face(static_cast<int>(f));
    const Vec3 n = mesh.face_normal(static_cast<int>(f));
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = mesh.vertex(t[k]);
      const Vec3 a = mesh.vertex(t[(k + 1) % 3]) - p;
      const Vec3 b = mesh.vertex(t[(k + 2) % 3]) - p;
      const double angle = std::atan2(a.cross(b).norm(), a.dot(b));
      normals[static_cast<std::size_t>(t[k])] += angle * n;
    }
  }
  for (std::size_t v = 0; v < normals.size(); ++v) {
    const double len = normals[v].norm();
    if (!(len > 0.0)) {
      throw GeometryError("vertex " + std::to_string(v) + " has no incident face; normal undefined");
    }
    normals[v] /= len;
  }
  return normals;
}

std::vector<FaceSelection> connected_components(const FaceSelection& selection) {
  const TriMesh& mesh = selection.mesh();
  std::vector<char> seen(mesh.num_faces(), 0);
  std::vector<FaceSelection> out;
  for (int seed : selection.faces()) {
    if (seen[static_cast<std::size_t>(seed)]) continue;
    std::vector<int> comp;
    std::deque<int> queue{seed};
    seen[static_cast<std::size_t>(seed)] = 1;
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop_front();
      comp.push_back(f);
      for (int k = 0; k < 3; ++k) {
        const int g = mesh.face_neighbor(f, k);
        if (g >= 0 && selection.contains(g) && !seen[static_cast<std::size_t>(g)]) {
          seen[static_cast<std::size_t>(g)] = 1;
          queue.push_back(g);
        }
      }
    }
    out.emplace_back(mesh, std::move(comp));
  }
  return out;
}

FaceSelection largest_component(const FaceSelection& selection) {
  if (selection.empty()) throw GeometryError("largest_component: empty selection");
  auto comps = connected_components(selection);
  std::size_t best = 0;
  double best_area = comps[0].area();
  for (std::size_t i = 1; i < comps.size(); ++i) {
    const double area = comps[i].area();
    // Components arrive ordered by minimum face index, so keeping the earlier one
    // on a full tie implements the lowest-index rule.
    if (comps[i].size() > comps[best].size() ||
        (comps[i].size() == comps[best].size() && area > best_area)) {
      best = i;
      best_area = area;
    }
  }
  return std::move(comps[best]);
}

Submesh extract_submesh(const FaceSelection& selection, const std::vector<Vec3>& positions,
                        bool reverse_winding) {
  const TriMesh& mesh = selection.mesh();
  Submesh out;
  std::vector<int> local(mesh.num_vertices(), -1);
  std::vector<Vec3> verts;
  for (int v : selection.vertices()) {
    local[static_cast<std::size_t>(v)] = static_cast<int>(out.source_vertex.size());
    out.source_vertex.push_back(v);
    verts.push_back(positions.empty() ? mesh.vertex(v) : positions[static_cast<std::size_t>(v)]);
  }
  std::vector<Face> faces;
  faces.reserve(selection.size());
  for (int f : selection.faces()) {
    const Face& t = mesh.face(f);
    Face g{local[static_cast<std::size_t>(t[0])], local[static_cast<std::size_t>(t[1])],
           local[static_cast<std::size_t>(t[2])]};
    if (reverse_winding) std::swap(g[1], g[2]);
    faces.push_back(g);
  }
  out.mesh = TriMesh(std::move(verts), std::move(faces));
  return out;
}

namespace {

struct CellKey {
  long long x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    const auto h = static_cast<unsigned long long>(k.x) * 73856093ULL ^
                   static_cast<unsigned long long>(k.y) * 19349663ULL ^
                   static_cast<unsigned long long>(k.z) * 83492791ULL;
    return static_cast<std::size_t>(h);
  }
};

std::vector<char> boundary_vertex_mask(const TriMesh& mesh) {
  std::vector<char> mask(mesh.num_vertices(), 0);
  for (std::size_t e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_faces(static_cast<int>(e))[1] < 0) {
      mask[static_cast<std::size_t>(mesh.edge(static_cast<int>(e)).v0)] = 1;
      mask[static_cast<std::size_t>(mesh.edge(static_cast<int>(e)).v1)] = 1;
    }
  }
  return mask;
}

}  // namespace

TriMesh assemble_cartilage(const FaceSelection& bone_attached, const TriMesh& extruded,
                           const TriMesh& blend_ring, double weld_tolerance) {
  const Submesh attached = extract_submesh(bone_attached, {}, /*reverse_winding=*/true);
  const TriMesh* parts[3] = {&attached.mesh, &extruded, &blend_ring};

  std::vector<Vec3> verts;
  std::vector<Face> faces;
  std::vector<int> part_of;
  std::vector<char> on_border;
  for (int p = 0; p < 3; ++p) {
    const auto base = static_cast<int>(verts.size());
    const auto border = boundary_vertex_mask(*parts[p]);
    for (std::size_t v = 0; v < parts[p]->num_vertices(); ++v) {
      verts.push_back(parts[p]->vertex(static_cast<int>(v)));
      part_of.push_back(p);
      on_border.push_back(border[v]);
    }
    for (const Face& t : parts[p]->faces()) faces.push_back({t[0] + base, t[1] + base, t[2] + base});
  }

  // Weld border vertices of different parts that coincide.
  const double cell = std::max(weld_tolerance, 1e-12) * 4.0;
  const double tol2 = weld_tolerance * weld_tolerance;
  std::unordered_map<CellKey, std::vector<int>, CellHash> grid;
  std::vector<int> rep(verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) rep[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (!on_border[i]) continue;
    const Vec3& p = verts[i];
    const CellKey c{std::llround(std::floor(p.x() / cell)), std::llround(std::floor(p.y() / cell)),
                    std::llround(std::floor(p.z() / cell))};
    int found = -1;
    for (long long dx = -1; dx <= 1 && found < 0; ++dx) {
      for (long long dy = -1; dy <= 1 && found < 0; ++dy) {
        for (long long dz = -1; dz <= 1 && found < 0; ++dz) {
          auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if (part_of[static_cast<std::size_t>(j)] != part_of[i] &&
                (verts[static_cast<std::size_t>(j)] - p).squaredNorm() <= tol2) {
              found = rep[static_cast<std::size_t>(j)];
              break;
            }
          }
        }
      }
    }
    if (found >= 0) {
      rep[i] = found;
    } else {
      grid[c].push_back(static_cast<int>(i));
    }
  }

  std::vector<int> remap(verts.size(), -1);
  std::vector<Vec3> out_verts;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (rep[i] == static_cast<int>(i)) {
      remap[i] = static_cast<int>(out_verts.size());
      out_verts.push_back(verts[i]);
    }
  }
  for (std::size_t i = 0; i < verts.size(); ++i) remap[i] = remap[static_cast<std::size_t>(rep[i])];
  for (Face& t : faces) {
    for (int& v : t) v = remap[static_cast<std::size_t>(v)];
  }

  TriMesh out;
  try {
    out = TriMesh(std::move(out_verts), std::move(faces));
  } catch (const InputError& e) {
    throw GeometryError(std::string("assembled cartilage is invalid: ") + e.what());
  }
  if (const auto open = out.boundary_edge_count(); open != 0) {
    throw GeometryError("boundary mismatch: assembled cartilage has " + std::to_string(open) +
                        " boundary edges");
  }
  if (!out.is_consistently_oriented()) {
    throw GeometryError("assembled cartilage is not consistently oriented");
  }
  return out;
}

}  // namespace cargen
