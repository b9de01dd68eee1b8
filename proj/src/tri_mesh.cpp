#include "cargen/mesh.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "cargen/error.hpp"

namespace cargen {

namespace {

// Compressed adjacency lists built from (key, value) pairs.
void build_csr(std::size_t n, std::vector<std::pair<int, int>>& pairs,
               std::vector<int>& offsets, std::vector<int>& items) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  offsets.assign(n + 1, 0);
  for (const auto& [k, v] : pairs) ++offsets[static_cast<std::size_t>(k) + 1];
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
  items.resize(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) items[i] = pairs[i].second;
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  const auto nv = static_cast<long>(vertices_.size());
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Face& t = faces_[f];
    for (int v : t) {
      if (v < 0 || v >= nv) {
        throw InputError("face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                         " outside [0, " + std::to_string(nv) + ")");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw InputError("face " + std::to_string(f) + " repeats a vertex");
    }
  }
  for (const Vec3& p : vertices_) {
    if (!p.allFinite()) throw InputError("non-finite vertex coordinate");
  }
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    if (!(face_area(static_cast<int>(f)) > 0.0)) {
      throw InputError("face " + std::to_string(f) + " is degenerate (zero area)");
    }
  }
  build_topology();
}

void TriMesh::build_topology() {
  const std::size_t nf = faces_.size();
  // (v0, v1, face, side) sorted by undirected key.
  std::vector<std::tuple<int, int, int, int>> sides;
  sides.reserve(3 * nf);
  for (std::size_t f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = faces_[f][k], b = faces_[f][(k + 1) % 3];
      if (a > b) std::swap(a, b);
      sides.emplace_back(a, b, static_cast<int>(f), k);
    }
  }
  std::sort(sides.begin(), sides.end());

  face_edges_.assign(3 * nf, -1);
  std::vector<Edge> bad;
  for (std::size_t i = 0; i < sides.size();) {
    std::size_t j = i;
    while (j < sides.size() && std::get<0>(sides[j]) == std::get<0>(sides[i]) &&
           std::get<1>(sides[j]) == std::get<1>(sides[i])) {
      ++j;
    }
    const int e = static_cast<int>(edges_.size());
    edges_.push_back({std::get<0>(sides[i]), std::get<1>(sides[i])});
    std::array<int, 2> ef{-1, -1};
    if (j - i > 2) bad.push_back(edges_.back());
    for (std::size_t s = i; s < j; ++s) {
      const int f = std::get<2>(sides[s]);
      if (s - i < 2) ef[s - i] = f;
      face_edges_[static_cast<std::size_t>(3 * f + std::get<3>(sides[s]))] = e;
    }
    edge_faces_.push_back(ef);
    i = j;
  }
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "non-manifold mesh: " << bad.size() << " edge(s) shared by more than two faces:";
    for (std::size_t i = 0; i < bad.size() && i < 20; ++i) {
      msg << " (" << bad[i].v0 << "," << bad[i].v1 << ")";
    }
    if (bad.size() > 20) msg << " ...";
    throw InputError(msg.str());
  }

  std::vector<std::pair<int, int>> vf, vv;
  vf.reserve(3 * nf);
  vv.reserve(2 * edges_.size());
  for (std::size_t f = 0; f < nf; ++f) {
    for (int v : faces_[f]) vf.emplace_back(v, static_cast<int>(f));
  }
  for (const Edge& e : edges_) {
    vv.emplace_back(e.v0, e.v1);
    vv.emplace_back(e.v1, e.v0);
  }
  build_csr(vertices_.size(), vf, vf_offsets_, vf_items_);
  build_csr(vertices_.size(), vv, vv_offsets_, vv_items_);
}

int TriMesh::face_neighbor(int f, int k) const {
  const auto& ef = edge_faces(face_edge(f, k));
  return ef[0] == f ? ef[1] : ef[0];
}

std::span<const int> TriMesh::vertex_faces(int v) const {
  const auto i = static_cast<std::size_t>(v);
  return {vf_items_.data() + vf_offsets_[i], static_cast<std::size_t>(vf_offsets_[i + 1] - vf_offsets_[i])};
}

std::span<const int> TriMesh::vertex_neighbors(int v) const {
  const auto i = static_cast<std::size_t>(v);
  return {vv_items_.data() + vv_offsets_[i], static_cast<std::size_t>(vv_offsets_[i + 1] - vv_offsets_[i])};
}

Vec3 TriMesh::face_normal(int f) const {
  const Face& t = face(f);
  const Vec3 n = (vertex(t[1]) - vertex(t[0])).cross(vertex(t[2]) - vertex(t[0]));
  return n.normalized();
}

double TriMesh::face_area(int f) const {
  const Face& t = face(f);
  return 0.5 * (vertex(t[1]) - vertex(t[0])).cross(vertex(t[2]) - vertex(t[0])).norm();
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) a += face_area(static_cast<int>(f));
  return a;
}

std::size_t TriMesh::boundary_edge_count() const {
  return static_cast<std::size_t>(std::count_if(edge_faces_.begin(), edge_faces_.end(),
                                                [](const auto& ef) { return ef[1] < 0; }));
}

bool TriMesh::is_consistently_oriented() const {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& ef = edge_faces_[e];
    if (ef[1] < 0) continue;
    // Direction in which each face traverses the edge: +1 for v0->v1.
    int dir[2];
    for (int s = 0; s < 2; ++s) {
      const Face& t = face(ef[s]);
      dir[s] = 0;
      for (int k = 0; k < 3; ++k) {
        if (t[k] == edges_[e].v0 && t[(k + 1) % 3] == edges_[e].v1) dir[s] = 1;
        if (t[k] == edges_[e].v1 && t[(k + 1) % 3] == edges_[e].v0) dir[s] = -1;
      }
    }
    if (dir[0] == dir[1]) return false;
  }
  return true;
}

long TriMesh::euler_characteristic() const {
  return static_cast<long>(vertices_.size()) - static_cast<long>(edges_.size()) +
         static_cast<long>(faces_.size());
}

double TriMesh::signed_volume() const {
  double vol = 0.0;
  for (const Face& t : faces_) {
    vol += vertex(t[0]).dot(vertex(t[1]).cross(vertex(t[2])));
  }
  return vol / 6.0;
}

}  // namespace cargen
