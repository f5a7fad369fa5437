#ifndef MEMBRANE_KERNELS_HPP
#define MEMBRANE_KERNELS_HPP

#include <cstddef>
#include <string>

// Inner loops of the brute-force fiber minimization.  The objective along a
// line of out-of-plane candidates zeta = (z1, z2, z) with z = z0 + i*dz is
//
//   f(i) = g(det_i) + base + z_i^2,   det_i = det0 + det_slope * z_i,
//   g(d) = (1/d - 1)^2 for d > 0,  +inf otherwise,
//
// i.e. the inverse-gap barrier model with quadratic growth.  A scalar
// reference kernel and an AVX2 variant are provided; the dispatcher picks one
// at runtime.  Both are compiled with contraction disabled so their results
// are bit-identical, which the equivalence tests assert.

namespace membrane::kernels {

struct LineMin {
  double value;       // minimal objective on the line (+inf if none feasible)
  std::size_t index;  // smallest index attaining it (0 when value is +inf)
};

LineMin min_barrier_line_scalar(double z0, double dz, std::size_t count,
                                double det0, double det_slope, double base);

#if defined(__x86_64__) || defined(_M_X64)
LineMin min_barrier_line_avx2(double z0, double dz, std::size_t count,
                              double det0, double det_slope, double base);
#endif

bool avx2_available();

// Runtime-dispatched entry point used by the brute-force oracle.
LineMin min_barrier_line(double z0, double dz, std::size_t count, double det0,
                         double det_slope, double base);

// "scalar" or "avx2"; what min_barrier_line will run on this machine.
std::string active_kernel();

}  // namespace membrane::kernels

#endif  // MEMBRANE_KERNELS_HPP
