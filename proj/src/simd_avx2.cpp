// Compiled with -mavx2 (and no -mfma); only reached after a runtime CPU check.

#include <immintrin.h>

#include <limits>

#include "cargen/simd.hpp"

namespace cargen::simd::avx2 {

Nearest nearest(const double* xs, const double* ys, const double* zs, std::size_t n, double qx, double qy,
                double qz) {
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  const __m256d vqz = _mm256_set1_pd(qz);
  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256i best_idx = _mm256_setzero_si256();
  __m256i idx = _mm256_set_epi64x(3, 2, 1, 0);
  const __m256i step = _mm256_set1_epi64x(4);

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(vqx, _mm256_loadu_pd(xs + i));
    const __m256d dy = _mm256_sub_pd(vqy, _mm256_loadu_pd(ys + i));
    const __m256d dz = _mm256_sub_pd(vqz, _mm256_loadu_pd(zs + i));
    const __m256d d2 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                     _mm256_mul_pd(dz, dz));
    const __m256d lt = _mm256_cmp_pd(d2, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, d2, lt);
    best_idx = _mm256_castpd_si256(
        _mm256_blendv_pd(_mm256_castsi256_pd(best_idx), _mm256_castsi256_pd(idx), lt));
    idx = _mm256_add_epi64(idx, step);
  }

  alignas(32) double lane_d[4];
  alignas(32) long long lane_i[4];
  _mm256_store_pd(lane_d, best);
  _mm256_store_si256(reinterpret_cast<__m256i*>(lane_i), best_idx);

  Nearest out{std::numeric_limits<double>::infinity(), 0};
  bool have = false;
  for (int l = 0; l < 4; ++l) {
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
  const __m256d vqx = _mm256_set1_pd(qx);
  const __m256d vqy = _mm256_set1_pd(qy);
  const __m256d vqz = _mm256_set1_pd(qz);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dx = _mm256_sub_pd(vqx, _mm256_loadu_pd(xs + i));
    const __m256d dy = _mm256_sub_pd(vqy, _mm256_loadu_pd(ys + i));
    const __m256d dz = _mm256_sub_pd(vqz, _mm256_loadu_pd(zs + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)),
                                            _mm256_mul_pd(dz, dz)));
  }
  for (; i < n; ++i) {
    const double dx = qx - xs[i];
    const double dy = qy - ys[i];
    const double dz = qz - zs[i];
    out[i] = dx * dx + dy * dy + dz * dz;
  }
}

}  // namespace cargen::simd::avx2
