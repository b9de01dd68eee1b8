#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cargen/curvature.hpp"

namespace cargen {

/// Femoral: grow the region by curvature and extrude the pre-growth region.
/// Pelvic and generic: extrude a trimmed copy of the region.
enum class Side { femoral, pelvic, generic };

enum class Site { femoral, pelvic, sacroiliac, pubic };

std::string_view to_string(Side side);
std::string_view to_string(Site site);
/// Throw InputError for unknown names.
Side parse_side(std::string_view name);
Site parse_site(std::string_view name);

/// Pipeline parameters. Keys that only one side uses are optional; a value
/// given for the other side is carried along unchanged but ignored.
struct PipelineConfig {
  Side side = Side::generic;
  double delta = 0.0;            // distance filter threshold (mm)
  int n_trim = 0;                // rim layers trimmed after filtering
  std::optional<int> extrusion_trim;         // pelvic/generic: layers trimmed for the extrusion subset
  std::optional<int> neighborhood;           // femoral: k-ring depth of curvature fits
  std::optional<double> kappa_min;           // femoral: growth bounds (1/mm)
  std::optional<double> kappa_max;           //   upper may be +inf
  std::optional<CurvatureMeasure> curvature_measure;
  bool bounds_enabled = true;    // clamp blend weights to [0, max rim height]
  double contact_epsilon = 0.5;  // contact-area distance threshold (mm)

  /// Throws InputError describing the first violated constraint.
  void validate() const;

  friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// Shipped parameters per anatomical site.
PipelineConfig default_config(Site site);

/// `key = value` lines in a fixed key order; unused optional keys print `-`.
std::string format_config(const PipelineConfig& config);

/// Parses the `format_config` layout. Every key must appear exactly once, `#`
/// starts a comment, and unknown keys are errors. Throws InputError.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);

/// Shortest round-trip decimal form; infinities print as `inf`/`-inf`.
std::string format_number(double value);

}  // namespace cargen
