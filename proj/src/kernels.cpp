#include "membrane/kernels.hpp"

#include <limits>

namespace membrane::kernels {

LineMin min_barrier_line_scalar(double z0, double dz, std::size_t count,
                                double det0, double det_slope, double base) {
  const double inf = std::numeric_limits<double>::infinity();
  double best = inf;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double z = z0 + static_cast<double>(i) * dz;
    const double det = det0 + det_slope * z;
    double f = inf;
    if (det > 0.0) {
      const double r = 1.0 / det - 1.0;
      f = r * r + base + z * z;
    }
    if (f < best) {
      best = f;
      best_i = i;
    }
  }
  return {best, best_i};
}

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

LineMin min_barrier_line(double z0, double dz, std::size_t count, double det0,
                         double det_slope, double base) {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool use_avx2 = avx2_available();
  if (use_avx2)
    return min_barrier_line_avx2(z0, dz, count, det0, det_slope, base);
#endif
  return min_barrier_line_scalar(z0, dz, count, det0, det_slope, base);
}

std::string active_kernel() { return avx2_available() ? "avx2" : "scalar"; }

}  // namespace membrane::kernels
