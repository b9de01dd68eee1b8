#include <algorithm>
#include <map>

#include "cargen/error.hpp"
#include "cargen/mesh.hpp"

namespace cargen {

FaceSelection::FaceSelection(const TriMesh& mesh, std::vector<int> faces)
    : mesh_(&mesh), faces_(std::move(faces)) {
  std::sort(faces_.begin(), faces_.end());
  faces_.erase(std::unique(faces_.begin(), faces_.end()), faces_.end());
  const auto nf = static_cast<int>(mesh.num_faces());
  if (!faces_.empty() && (faces_.front() < 0 || faces_.back() >= nf)) {
    throw InputError("face selection references a face outside the mesh");
  }
  mask_.assign(mesh.num_faces(), 0);
  for (int f : faces_) mask_[static_cast<std::size_t>(f)] = 1;

  std::vector<char> vmask(mesh.num_vertices(), 0);
  for (int f : faces_) {
    for (int v : mesh.face(f)) vmask[static_cast<std::size_t>(v)] = 1;
    for (int k = 0; k < 3; ++k) {
      const int g = mesh.face_neighbor(f, k);
      if (g < 0 || !mask_[static_cast<std::size_t>(g)]) boundary_edges_.push_back(mesh.face_edge(f, k));
    }
  }
  for (std::size_t v = 0; v < vmask.size(); ++v) {
    if (vmask[v]) vertices_.push_back(static_cast<int>(v));
  }
  std::sort(boundary_edges_.begin(), boundary_edges_.end());
}

FaceSelection FaceSelection::from_mask(const TriMesh& mesh, const std::vector<char>& mask) {
  std::vector<int> faces;
  for (std::size_t f = 0; f < mask.size() && f < mesh.num_faces(); ++f) {
    if (mask[f]) faces.push_back(static_cast<int>(f));
  }
  return FaceSelection(mesh, std::move(faces));
}

FaceSelection FaceSelection::all(const TriMesh& mesh) {
  std::vector<int> faces(mesh.num_faces());
  for (std::size_t f = 0; f < faces.size(); ++f) faces[f] = static_cast<int>(f);
  return FaceSelection(mesh, std::move(faces));
}

std::vector<int> FaceSelection::boundary_vertices() const {
  std::vector<int> out;
  out.reserve(2 * boundary_edges_.size());
  for (int e : boundary_edges_) {
    out.push_back(mesh_->edge(e).v0);
    out.push_back(mesh_->edge(e).v1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int FaceSelection::boundary_edge_count(int f) const {
  const bool in_f = contains(f);
  int n = 0;
  for (int k = 0; k < 3; ++k) {
    const int g = mesh_->face_neighbor(f, k);
    const bool in_g = g >= 0 && contains(g);
    if (in_f != in_g) ++n;
  }
  return n;
}

std::vector<BoundaryLoop> FaceSelection::boundary_loops() const {
  // Boundary half-edges oriented as their selected face traverses them.
  std::multimap<int, int> outgoing;  // start vertex -> end vertex
  for (int f : faces_) {
    const Face& t = mesh_->face(f);
    for (int k = 0; k < 3; ++k) {
      const int g = mesh_->face_neighbor(f, k);
      if (g < 0 || !contains(g)) outgoing.emplace(t[k], t[(k + 1) % 3]);
    }
  }
  std::vector<BoundaryLoop> loops;
  while (!outgoing.empty()) {
    auto it = outgoing.begin();
    const int start = it->first;
    BoundaryLoop loop;
    int cur = start;
    while (true) {
      loop.vertices.push_back(cur);
      const int next = it->second;
      outgoing.erase(it);
      if (next == start) break;
      it = outgoing.find(next);
      if (it == outgoing.end()) break;  // open chain; cannot happen on a manifold selection
      cur = next;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

double FaceSelection::area() const {
  double a = 0.0;
  for (int f : faces_) a += mesh_->face_area(f);
  return a;
}

bool FaceSelection::is_subset_of(const FaceSelection& other) const {
  if (mesh_ != other.mesh_) return false;
  return std::includes(other.faces_.begin(), other.faces_.end(), faces_.begin(), faces_.end());
}

}  // namespace cargen
