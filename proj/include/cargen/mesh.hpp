#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace cargen {

using Vec3 = Eigen::Vector3d;
using Face = std::array<int, 3>;

/// Per-vertex real values indexed like the owning mesh's vertices.
using VertexScalarField = std::vector<double>;

/// Undirected edge, `v0 < v1`.
struct Edge {
  int v0;
  int v1;
};

/// Indexed triangle surface mesh (millimetres).
///
/// Immutable once constructed. Construction validates index ranges, repeated
/// vertices inside a face, zero-area faces and edge manifoldness (at most two
/// faces per undirected edge), and precomputes edge/face/vertex adjacency.
/// Counter-clockwise winding is taken to mean an outward normal.
class TriMesh {
 public:
  TriMesh() = default;
  TriMesh(std::vector<Vec3> vertices, std::vector<Face> faces);

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_faces() const noexcept { return faces_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return faces_.empty(); }

  const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
  const std::vector<Face>& faces() const noexcept { return faces_; }
  const Vec3& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const Face& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

  /// Edge id of the side (face[k], face[(k + 1) % 3]).
  int face_edge(int f, int k) const { return face_edges_[static_cast<std::size_t>(3 * f + k)]; }
  /// The (up to) two faces bordering an edge; the second is -1 on a mesh border.
  const std::array<int, 2>& edge_faces(int e) const { return edge_faces_[static_cast<std::size_t>(e)]; }
  /// Face across side k of face f, or -1.
  int face_neighbor(int f, int k) const;

  std::span<const int> vertex_faces(int v) const;
  std::span<const int> vertex_neighbors(int v) const;

  Vec3 face_normal(int f) const;  // unit
  double face_area(int f) const;
  double total_area() const;

  std::size_t boundary_edge_count() const;
  bool is_closed() const { return boundary_edge_count() == 0; }
  /// Every interior edge is traversed in opposite directions by its two faces.
  bool is_consistently_oriented() const;
  long euler_characteristic() const;
  double signed_volume() const;

 private:
  void build_topology();

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Edge> edges_;
  std::vector<int> face_edges_;
  std::vector<std::array<int, 2>> edge_faces_;
  std::vector<int> vf_offsets_, vf_items_;
  std::vector<int> vv_offsets_, vv_items_;
};

/// Ordered cyclic list of vertex ids along a selection boundary. The closing
/// edge (back().. front()) is implicit.
struct BoundaryLoop {
  std::vector<int> vertices;
};

/// A subset of a mesh's faces together with its derived vertex set and boundary.
///
/// Holds a non-owning pointer to the mesh; the mesh must outlive the selection.
class FaceSelection {
 public:
  FaceSelection() = default;
  FaceSelection(const TriMesh& mesh, std::vector<int> faces);

  static FaceSelection from_mask(const TriMesh& mesh, const std::vector<char>& mask);
  static FaceSelection all(const TriMesh& mesh);

  const TriMesh& mesh() const { return *mesh_; }
  bool bound() const noexcept { return mesh_ != nullptr; }

  std::span<const int> faces() const noexcept { return faces_; }
  std::span<const int> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return faces_.size(); }
  bool empty() const noexcept { return faces_.empty(); }

  bool contains(int f) const { return mask_[static_cast<std::size_t>(f)] != 0; }
  const std::vector<char>& mask() const noexcept { return mask_; }

  /// Edges of the selection with exactly one selected incident face.
  std::span<const int> boundary_edges() const noexcept { return boundary_edges_; }
  /// Sorted ids of vertices touching a boundary edge.
  std::vector<int> boundary_vertices() const;
  std::vector<BoundaryLoop> boundary_loops() const;
  /// Number of boundary edges on the sides of face f (f need not be selected).
  int boundary_edge_count(int f) const;

  double area() const;
  bool is_subset_of(const FaceSelection& other) const;

  friend bool operator==(const FaceSelection& a, const FaceSelection& b) {
    return a.mesh_ == b.mesh_ && a.faces_ == b.faces_;
  }

 private:
  const TriMesh* mesh_ = nullptr;
  std::vector<int> faces_;
  std::vector<int> vertices_;
  std::vector<char> mask_;
  std::vector<int> boundary_edges_;
};

}  // namespace cargen
