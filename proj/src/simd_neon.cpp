// AArch64 variant; an empty translation unit elsewhere.

#if defined(__aarch64__) && defined(__ARM_NEON)

#include <arm_neon.h>

#include <limits>

#include "cargen/simd.hpp"

namespace cargen::simd::neon {

Nearest nearest(const double* xs, const double* ys, const double* zs, std::size_t n, double qx, double qy,
                double qz) {
  const float64x2_t vqx = vdupq_n_f64(qx);
  const float64x2_t vqy = vdupq_n_f64(qy);
  const float64x2_t vqz = vdupq_n_f64(qz);
  float64x2_t best = vdupq_n_f64(std::numeric_limits<double>::infinity());
  uint64x2_t best_idx = vdupq_n_u64(0);
  const uint64_t init[2] = {0, 1};
  uint64x2_t idx = vld1q_u64(init);
  const uint64x2_t step = vdupq_n_u64(2);

  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vqx, vld1q_f64(xs + i));
    const float64x2_t dy = vsubq_f64(vqy, vld1q_f64(ys + i));
    const float64x2_t dz = vsubq_f64(vqz, vld1q_f64(zs + i));
    // vmulq/vaddq (not vfmaq) to match the scalar rounding.
    const float64x2_t d2 = vaddq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(dz, dz));
    const uint64x2_t lt = vcltq_f64(d2, best);
    best = vbslq_f64(lt, d2, best);
    best_idx = vbslq_u64(lt, idx, best_idx);
    idx = vaddq_u64(idx, step);
  }

  Nearest out{std::numeric_limits<double>::infinity(), 0};
  bool have = false;
  const double lane_d[2] = {vgetq_lane_f64(best, 0), vgetq_lane_f64(best, 1)};
  const uint64_t lane_i[2] = {vgetq_lane_u64(best_idx, 0), vgetq_lane_u64(best_idx, 1)};
  for (int l = 0; l < 2; ++l) {
    if (!(lane_d[l] < std::numeric_limits<double>::infinity())) continue;
    const auto li = static_cast<std::uint32_t>(lane_i[l]);
    if (!have || lane_d[l] < out.squared_distance || (lane_d[l] == out.squared_distance && li < out.index)) {
      out = {lane_d[l], li};
      have = true;
    }
  }
  for (; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    const double dz = qz - zs[i];
    const double d2 = dx * dx + dy * dy + dz * dz;
    if (d2 < out.squared_distance) out = {d2, static_cast<std::uint32_t>(i)};
  }
  return out;
}

void squared_distances(const double* xs, const double* ys, const double* zs, std::size_t n, double qx,
                       double qy, double qz, double* out) {
  const float64x2_t vqx = vdupq_n_f64(qx);
  const float64x2_t vqy = vdupq_n_f64(qy);
  const float64x2_t vqz = vdupq_n_f64(qz);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t dx = vsubq_f64(vqx, vld1q_f64(xs + i));
    const float64x2_t dy = vsubq_f64(vqy, vld1q_f64(ys + i));
    const float64x2_t dz = vsubq_f64(vqz, vld1q_f64(zs + i));
    vst1q_f64(out + i, vaddq_f64(vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)), vmulq_f64(dz, dz)));
  }
  for (; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    const double dz = qz - zs[i];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

}  // namespace cargen::simd::neon

#endif
