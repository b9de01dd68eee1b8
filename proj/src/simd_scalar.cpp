#include <limits>

#include "cargen/simd.hpp"

namespace cargen::simd::scalar {

Nearest nearest(const double* xs, const double* ys, const double* zs, std::size_t n, double qx, double qy,
                double qz) {
  Nearest best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    const double dz = qz - zs[i];
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < best.squared_distance) best = {d2, static_cast<std::uint32_t>(i)};
  }
  return best;
}

void squared_distances(const double* xs, const double* ys, const double* zs, std::size_t n, double qx,
                       double qy, double qz, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    const double dz = qz - zs[i];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

}  // namespace cargen::simd::scalar
