#ifndef MEMBRANE_DENSITY_HPP
#define MEMBRANE_DENSITY_HPP

#include <functional>
#include <utility>

#include "membrane/tensor.hpp"

namespace membrane {

// An evaluatable energy density on 3x2 matrices, tagged with where it came
// from.  Composable: lamination and cell estimates wrap other densities.
struct PlanarDensity {
  enum class Tag { BaseFiber, Laminated, CellEstimate, Synthetic };

  std::function<ExtendedEnergy(const Mat32 &)> evaluate;
  Tag tag = Tag::Synthetic;
  int level = 0;  // lamination level when tag == Laminated

  ExtendedEnergy operator()(const Mat32 &xi) const { return evaluate(xi); }
};

// min(|xi - xi_a|^2, |xi - xi_b|^2); the standard two-well test density.
inline PlanarDensity double_well_density(const Mat32 &xi_a, const Mat32 &xi_b) {
  PlanarDensity f;
  f.tag = PlanarDensity::Tag::Synthetic;
  f.evaluate = [xi_a, xi_b](const Mat32 &xi) {
    const double da = (xi - xi_a).frobenius_sq();
    const double db = (xi - xi_b).frobenius_sq();
    return ExtendedEnergy(da < db ? da : db);
  };
  return f;
}

inline PlanarDensity convex_quadratic_density() {
  PlanarDensity f;
  f.tag = PlanarDensity::Tag::Synthetic;
  f.evaluate = [](const Mat32 &xi) { return ExtendedEnergy(xi.frobenius_sq()); };
  return f;
}

}  // namespace membrane

#endif  // MEMBRANE_DENSITY_HPP
