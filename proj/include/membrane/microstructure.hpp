#ifndef MEMBRANE_MICROSTRUCTURE_HPP
#define MEMBRANE_MICROSTRUCTURE_HPP

#include <map>
#include <stdexcept>
#include <vector>

#include "membrane/density.hpp"
#include "membrane/tensor.hpp"

// The explicit zig-zag laminate construction on the unit cell: the scalar
// profile sigma_n and its eight region families, the perturbed lamination
// direction b_l, exact energy quadrature of xi + grad(sigma_n b_l), dyadic
// Vitali square packings, and the rescaled-cell refinement harness.

namespace membrane {

struct LaminateGeometry {
  int strips;      // n >= 3
  double t;        // lamination weight in [0,1]
  Vec2 a{1.0, 0.0};  // unit lamination direction; (1,0) is the canonical frame

  LaminateGeometry(int n_, double t_, Vec2 a_ = {1.0, 0.0}) : strips(n_), t(t_), a(a_) {
    if (strips < 3) throw std::invalid_argument("LaminateGeometry: n must be >= 3");
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("LaminateGeometry: t in [0,1]");
    const double an = a.norm();
    if (std::abs(an - 1.0) > 1e-12)
      throw std::invalid_argument("LaminateGeometry: a must be a unit vector");
  }
};

enum class RegionFamily { AMinus, APlus, B, BMinus, BPlus, C, CMinus, CPlus };

const char *region_name(RegionFamily f);

struct RegionPoint {
  RegionFamily family;
  int strip;        // k in {0,...,n-1}
  double value;     // sigma_n(x)
  Vec2 gradient;    // grad sigma_n on the region's interior
};

// Region label, profile value and per-region gradient at x in [0,1]^2.
// Boundary lines resolve by the fixed half-open tie-break (null sets; only
// point queries care).  For a != (1,0) the query point is rotated into the
// canonical frame first and must land in [0,1]^2.
RegionPoint classify_and_sigma(const LaminateGeometry &geom, const Vec2 &x);

// Closed-form areas of the eight region families (unions over k).
std::map<RegionFamily, double> region_measures(const LaminateGeometry &geom);

// b if b is outside the column span of xi, otherwise b + nu/l with nu the
// unit normal to the span.  Requires rank-2 xi and l >= 1.
Vec3 perturbed_direction(const Vec3 &b, const Mat32 &xi, long ell);

// Integral of f(xi + grad(sigma_n(x) b_l)) over the unit cell, evaluated
// exactly as the region-weighted sum of the five distinct gradients.
ExtendedEnergy laminate_energy_quadrature(const PlanarDensity &f, const Mat32 &xi,
                                          const LaminateGeometry &geom,
                                          const Vec3 &b_ell);

// Same quantity regrouped as (1-2/n)[...] + (1/n)[...]; the cross-check
// target of the quadrature.
ExtendedEnergy laminate_energy_closed_form(const PlanarDensity &f, const Mat32 &xi,
                                           const LaminateGeometry &geom,
                                           const Vec3 &b_ell);

// The n -> infinity two-point limit (1-t) f(xi - t a@b) + t f(xi + (1-t) a@b).
ExtendedEnergy laminate_two_point_value(const PlanarDensity &f, const Mat32 &xi,
                                        const LaminateGeometry &geom, const Vec3 &b);

// Numerical integral of |sigma_n|^p over the unit cell by per-strip
// quadrature with the stated number of Gauss points per direction.
double sigma_lp_norm(const LaminateGeometry &geom, double p, int gauss_points = 24);

struct Rect {
  Vec2 lo, hi;
  double area() const { return (hi.x - lo.x) * (hi.y - lo.y); }
  bool contains(const Vec2 &p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  Rect inset(double margin) const {
    return {{lo.x + margin, lo.y + margin}, {hi.x - margin, hi.y - margin}};
  }
};

struct CellCover {
  struct Square {
    Vec2 corner;  // lower-left
    double size;  // side length rho_m, a dyadic rational
  };
  std::vector<Square> squares;
  double covered_area = 0.0;  // sum of rho_m^2
  double residual = 0.0;      // polygon area - covered_area
};

struct CoverError : std::runtime_error {
  double achieved_residual;
  explicit CoverError(double r)
      : std::runtime_error("vitali_cover: residual target unreachable"),
        achieved_residual(r) {}
};

// Greedy dyadic square packing of an axis-aligned region; squares are
// pairwise disjoint and exactly inside.  Throws CoverError when the depth cap
// cannot reach the residual target.
CellCover vitali_cover(const Rect &polygon, double residual_target, int max_depth = 16);

struct RefinementRow {
  int n;
  long ell;
  long q;
  double covered_area;
  double energy;   // integral of f(xi + grad phi_{n,l,q}) over the polygon
  double abs_gap;  // |energy - target|
};

struct RefinementReport {
  double target = 0.0;  // |polygon| * two-point lamination value
  std::vector<RefinementRow> rows;
  double final_gap = 0.0;  // gap at the last (n, ell, q) triple
};

// Assembles the rescaled laminate test function on a Vitali packing of the
// inset polygon and tracks the triple-limit trend of its energy.
RefinementReport verify_cell_refinement(const PlanarDensity &f, const Mat32 &xi,
                                        const Vec2 &a, const Vec3 &b, double t,
                                        const Rect &polygon,
                                        const std::vector<int> &n_seq,
                                        const std::vector<long> &ell_seq,
                                        const std::vector<long> &q_seq,
                                        double cover_residual_fraction = 0.005);

}  // namespace membrane

#endif  // MEMBRANE_MICROSTRUCTURE_HPP
