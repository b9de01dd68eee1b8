#pragma once

#include <optional>
#include <span>

#include "cargen/mesh.hpp"
#include "cargen/model.hpp"
#include "cargen/spatial_index.hpp"

namespace cargen {

struct CartilageMetrics {
  double mean_thickness = 0.0;  // mm
  double thickness_sd = 0.0;    // mm
  double coverage_area = 0.0;   // mm^2
  std::optional<double> coverage_percentage;  // fraction, pelvic side of a joint
  std::optional<double> contact_area;         // mm^2, needs the opposing model
};

struct ThicknessStats {
  double mean = 0.0;
  double sd = 0.0;
};

/// Area-weighted mean and standard deviation of `offsets` (indexed by mesh
/// vertex) over the region's vertices; weights are one third of the incident
/// region triangle areas.
ThicknessStats mean_thickness(const FaceSelection& region, std::span<const double> offsets);
ThicknessStats mean_thickness(const CartilageModel& model);

/// Total triangle area of the selection.
double coverage_area(const FaceSelection& region);

struct SphereFit {
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
};

/// Algebraic least-squares sphere. Throws GeometryError for fewer than four
/// points or coplanar/degenerate configurations.
SphereFit fit_sphere(std::span<const Vec3> points);

/// Pelvic bone-attached area over 4 pi r^2 of the sphere fitted to the femoral
/// bone-attached vertices. An empty pelvic region gives 0.
double coverage_percentage(const FaceSelection& pelvic_attached, const FaceSelection& femoral_attached);

/// Area of the faces of `surfaces` whose barycenter lies within `epsilon` of the
/// closest point on any face of `opposing`. Throws InputError for negative epsilon.
double contact_area(std::span<const TriMesh* const> surfaces, std::span<const TriMesh* const> opposing, double epsilon);
double contact_area(const TriMesh& a, const TriMesh& b, double epsilon);
/// Uses each model's articulating surface (extruded sheet plus blended ring).
double contact_area(const CartilageModel& a, const CartilageModel& b, double epsilon);

/// Extruded sheet and blended ring of a model.
std::vector<const TriMesh*> articulating_surfaces(const CartilageModel& model);

/// Mutual nearest-vertex distances between two extruded sheets. A vertex is
/// counted only when its nearest partner is not on the other sheet's border.
struct CongruenceStats {
  std::size_t pairs = 0;
  double max_gap = 0.0;            // mm
  double mean_gap = 0.0;           // mm
  double max_relative_gap = 0.0;   // gap over local bone-to-bone gap (2 x height)
};

CongruenceStats congruence(const ExtrusionResult& a, const ExtrusionResult& b);

/// Thickness and coverage area of one model; joint-only fields left unset.
CartilageMetrics model_metrics(const CartilageModel& model);

}  // namespace cargen
