#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops used by the spatial queries. Each kernel has a
// scalar reference implementation and vectorized variants; the variant is
// chosen once at runtime from the CPU's capabilities (override with the
// CARGEN_ISA environment variable: "scalar", "avx2", "neon").
//
// All variants evaluate (qx-x)^2 + (qy-y)^2 + (qz-z)^2 with the same operation
// order and without fused multiply-add, so they return bit-identical results.

namespace cargen::simd {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Closest point of a structure-of-arrays block. `index` is the first
/// position attaining the minimum; n == 0 yields {+inf, 0}.
struct Nearest {
  double squared_distance;
  std::uint32_t index;
};

using NearestFn = Nearest (*)(const double* xs, const double* ys, const double* zs, std::size_t n,
                              double qx, double qy, double qz);

/// Squared distances from a query to every point of a block.
using SquaredDistancesFn = void (*)(const double* xs, const double* ys, const double* zs, std::size_t n,
                                    double qx, double qy, double qz, double* out);

struct KernelTable {
  Isa isa;
  NearestFn nearest;
  SquaredDistancesFn squared_distances;
};

/// Best variant supported by this CPU (honouring CARGEN_ISA).
const KernelTable& kernels();

/// A specific variant; returns nullptr when it was not built or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);

namespace scalar {
Nearest nearest(const double* xs, const double* ys, const double* zs, std::size_t n, double qx, double qy,
                double qz);
void squared_distances(const double* xs, const double* ys, const double* zs, std::size_t n, double qx,
                       double qy, double qz, double* out);
}  // namespace scalar

}  // namespace cargen::simd
