// AVX2 variant of the barrier line kernel.  Compiled with -mavx2 and
// -ffp-contract=off so every lane performs the same mul/add/div sequence as
// the scalar reference; the dispatch tests check bit-identical results.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstdint>
#include <limits>

#include "membrane/kernels.hpp"

namespace membrane::kernels {

LineMin min_barrier_line_avx2(double z0, double dz, std::size_t count,
                              double det0, double det_slope, double base) {
  const double inf = std::numeric_limits<double>::infinity();

  const __m256d vz0 = _mm256_set1_pd(z0);
  const __m256d vdz = _mm256_set1_pd(dz);
  const __m256d vdet0 = _mm256_set1_pd(det0);
  const __m256d vslope = _mm256_set1_pd(det_slope);
  const __m256d vbase = _mm256_set1_pd(base);
  const __m256d vone = _mm256_set1_pd(1.0);
  const __m256d vzero = _mm256_setzero_pd();
  const __m256d vinf = _mm256_set1_pd(inf);

  __m256d best = vinf;
  __m256d best_idx = vzero;
  __m256d idx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  const __m256d idx_step = _mm256_set1_pd(4.0);

  const std::size_t vec_end = count - count % 4;
  for (std::size_t i = 0; i < vec_end; i += 4) {
    const __m256d z = _mm256_add_pd(vz0, _mm256_mul_pd(idx, vdz));
    const __m256d det = _mm256_add_pd(vdet0, _mm256_mul_pd(vslope, z));
    const __m256d r = _mm256_sub_pd(_mm256_div_pd(vone, det), vone);
    // same association as the scalar reference: (r*r + base) + z*z
    const __m256d f0 = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r, r), vbase),
                                     _mm256_mul_pd(z, z));
    const __m256d feasible = _mm256_cmp_pd(det, vzero, _CMP_GT_OQ);
    const __m256d f = _mm256_blendv_pd(vinf, f0, feasible);
    // strict less keeps the earliest index within each lane
    const __m256d better = _mm256_cmp_pd(f, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, f, better);
    best_idx = _mm256_blendv_pd(best_idx, idx, better);
    idx = _mm256_add_pd(idx, idx_step);
  }

  alignas(32) double vals[4], idxs[4];
  _mm256_store_pd(vals, best);
  _mm256_store_pd(idxs, best_idx);

  double bval = inf;
  std::size_t bidx = 0;
  for (int lane = 0; lane < 4; ++lane) {
    const std::size_t li = static_cast<std::size_t>(idxs[lane]);
    if (vals[lane] < bval || (vals[lane] == bval && vals[lane] < inf && li < bidx)) {
      bval = vals[lane];
      bidx = li;
    }
  }

  // scalar tail, identical arithmetic
  for (std::size_t i = vec_end; i < count; ++i) {
    const double z = z0 + static_cast<double>(i) * dz;
    const double det = det0 + det_slope * z;
    double f = inf;
    if (det > 0.0) {
      const double r = 1.0 / det - 1.0;
      f = r * r + base + z * z;
    }
    if (f < bval) {
      bval = f;
      bidx = i;
    }
  }
  return {bval, bidx};
}

}  // namespace membrane::kernels

#endif  // x86_64
