#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "cargen/mesh.hpp"

namespace cargen {

enum class MeshFormat { obj, ply, stl };

std::optional<MeshFormat> format_from_extension(const std::filesystem::path& path);
std::optional<MeshFormat> parse_mesh_format(std::string_view name);

/// STL facets carry their own vertex copies; these are welded within this distance (mm).
inline constexpr double kStlWeldTolerance = 1e-6;

/// Reads OBJ (ASCII), PLY (ASCII or binary little-endian) or STL (binary; ASCII accepted).
/// The format is inferred from the extension when not given. Throws InputError.
TriMesh load_mesh(const std::filesystem::path& path, std::optional<MeshFormat> format = std::nullopt);

struct SaveOptions {
  bool ply_binary = true;
  /// Extra per-vertex PLY property, written when non-empty (`scalar_name`).
  const VertexScalarField* vertex_scalar = nullptr;
  std::string scalar_name = "weight";
};

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path,
               std::optional<MeshFormat> format = std::nullopt, const SaveOptions& options = {});

/// Merges vertices closer than `tolerance`, dropping faces that collapse.
/// Vertex order follows first occurrence.
TriMesh weld_vertices(const std::vector<Vec3>& vertices, const std::vector<Face>& faces, double tolerance);

}  // namespace cargen
