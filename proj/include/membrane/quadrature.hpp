#ifndef MEMBRANE_QUADRATURE_HPP
#define MEMBRANE_QUADRATURE_HPP

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

// Gauss-Legendre rules, computed on first use by Newton iteration on the
// Legendre polynomial (three-term recurrence).  Accurate to machine precision
// for the modest orders used here.

namespace membrane {

inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  std::vector<double> x(n), w(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess for the i-th positive root
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
  return {x, w};
}

// same rule mapped to [0,1]
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre_01(int n) {
  auto [x, w] = gauss_legendre(n);
  for (double &v : x) v = 0.5 * (v + 1.0);
  for (double &v : w) v *= 0.5;
  return {x, w};
}

}  // namespace membrane

#endif  // MEMBRANE_QUADRATURE_HPP
