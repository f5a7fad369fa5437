#include "membrane/microstructure.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "membrane/quadrature.hpp"

namespace membrane {

const char *region_name(RegionFamily f) {
  switch (f) {
    case RegionFamily::AMinus: return "A-";
    case RegionFamily::APlus: return "A+";
    case RegionFamily::B: return "B";
    case RegionFamily::BMinus: return "B-";
    case RegionFamily::BPlus: return "B+";
    case RegionFamily::C: return "C";
    case RegionFamily::CMinus: return "C-";
    case RegionFamily::CPlus: return "C+";
  }
  return "?";
}

namespace {

struct Frame {
  Vec2 a, ap;  // lamination direction and its quarter turn
};

Frame frame_of(const LaminateGeometry &geom) { return {geom.a, geom.a.perp()}; }

// query point in the canonical frame
Vec2 to_canonical(const Frame &fr, const Vec2 &x) {
  return {fr.a.dot(x), fr.ap.dot(x)};
}

}  // namespace

RegionPoint classify_and_sigma(const LaminateGeometry &geom, const Vec2 &x_in) {
  const Frame fr = frame_of(geom);
  const Vec2 x = to_canonical(fr, x_in);
  const double eps = 1e-12;
  if (x.x < -eps || x.x > 1.0 + eps || x.y < -eps || x.y > 1.0 + eps)
    throw std::domain_error("classify_and_sigma: point outside the closed unit square");

  const int n = geom.strips;
  const double t = geom.t;
  const double x1 = std::clamp(x.x, 0.0, 1.0);
  const double x2 = std::clamp(x.y, 0.0, 1.0);
  const int k = std::min(n - 1, static_cast<int>(std::floor(x1 * n)));
  const double left = static_cast<double>(k) / n;
  const double right = static_cast<double>(k + 1) / n;
  const double band_lo = 1.0 / n;
  const double band_hi = 1.0 - 1.0 / n;

  RegionFamily fam;
  double value;
  Vec2 g;  // canonical-frame gradient

  // fixed tie-break order: A- < A+ < B- < B+ < C- < C+ < B < C
  if (x2 >= band_lo && x2 <= band_hi) {
    if (x1 <= left + (1.0 - t) / n) {
      fam = RegionFamily::AMinus;
      value = -t * (x1 - left);
      g = {-t, 0.0};
    } else {
      fam = RegionFamily::APlus;
      value = (1.0 - t) * (x1 - right);
      g = {1.0 - t, 0.0};
    }
  } else if (x2 < band_lo) {
    if (x1 >= right - x2 && x1 <= right - t * x2) {
      fam = RegionFamily::BMinus;
      value = -t * (x1 + x2 - right);
      g = {-t, -t};
    } else if (x1 >= right - t * x2) {
      fam = RegionFamily::BPlus;
      value = (1.0 - t) * (x1 - right);
      g = {1.0 - t, 0.0};
    } else {
      fam = RegionFamily::B;
      value = 0.0;
      g = {0.0, 0.0};
    }
  } else {
    // top strip; the wedges mirror the bottom ones at the edge x2 = 1
    if (x1 >= x2 - 1.0 + right && x1 <= t * (x2 - 1.0) + right) {
      fam = RegionFamily::CMinus;
      value = -t * (x1 - x2 + 1.0 - right);
      g = {-t, t};
    } else if (x1 >= t * (x2 - 1.0) + right) {
      fam = RegionFamily::CPlus;
      value = (1.0 - t) * (x1 - right);
      g = {1.0 - t, 0.0};
    } else {
      fam = RegionFamily::C;
      value = 0.0;
      g = {0.0, 0.0};
    }
  }

  RegionPoint rp;
  rp.family = fam;
  rp.strip = k;
  rp.value = value;
  rp.gradient = fr.a * g.x + fr.ap * g.y;
  return rp;
}

std::map<RegionFamily, double> region_measures(const LaminateGeometry &geom) {
  const double n = geom.strips;
  const double t = geom.t;
  const double mid = 1.0 - 2.0 / n;
  return {
      {RegionFamily::AMinus, (1.0 - t) * mid},
      {RegionFamily::APlus, t * mid},
      {RegionFamily::B, 1.0 / (2.0 * n)},
      {RegionFamily::C, 1.0 / (2.0 * n)},
      {RegionFamily::BMinus, (1.0 - t) / (2.0 * n)},
      {RegionFamily::CMinus, (1.0 - t) / (2.0 * n)},
      {RegionFamily::BPlus, t / (2.0 * n)},
      {RegionFamily::CPlus, t / (2.0 * n)},
  };
}

Vec3 perturbed_direction(const Vec3 &b, const Mat32 &xi, long ell) {
  if (ell < 1) throw std::invalid_argument("perturbed_direction: l must be >= 1");
  const Vec3 n = xi.column_normal();
  const double nn = n.norm();
  if (nn < 1e-14) throw std::domain_error("perturbed_direction: rank-deficient xi");
  const Vec3 nu = n * (1.0 / nn);
  const double dist = std::abs(b.dot(nu));  // distance of b to the column span
  if (dist > 1e-12 * b.norm()) return b;
  return b + nu * (1.0 / static_cast<double>(ell));
}

namespace {

// the five distinct values of grad(sigma_n b) as rank-one 3x2 perturbations
struct GradientTable {
  Mat32 a_minus, plus, b_minus, c_minus, rest;
};

GradientTable gradient_table(const LaminateGeometry &geom, const Vec3 &b) {
  const Vec2 a = geom.a;
  const Vec2 ap = a.perp();
  const double t = geom.t;
  GradientTable tab;
  tab.a_minus = outer_32(b, a * (-t));
  tab.plus = outer_32(b, a * (1.0 - t));
  tab.b_minus = outer_32(b, (a + ap) * (-t));
  tab.c_minus = outer_32(b, (a - ap) * (-t));
  tab.rest = Mat32{};
  return tab;
}

// weighted sum with zero-weight terms skipped (never evaluates f there, so no
// 0 * infinity can arise)
class WeightedSum {
 public:
  void add(double weight, const PlanarDensity &f, const Mat32 &arg) {
    if (weight == 0.0) return;
    total_ = total_ + f(arg).scaled(weight);
  }
  ExtendedEnergy total() const { return total_; }

 private:
  ExtendedEnergy total_{0.0};
};

}  // namespace

ExtendedEnergy laminate_energy_quadrature(const PlanarDensity &f, const Mat32 &xi,
                                          const LaminateGeometry &geom,
                                          const Vec3 &b_ell) {
  const auto tab = gradient_table(geom, b_ell);
  const auto areas = region_measures(geom);
  WeightedSum sum;
  sum.add(areas.at(RegionFamily::AMinus), f, xi + tab.a_minus);
  sum.add(areas.at(RegionFamily::APlus), f, xi + tab.plus);
  sum.add(areas.at(RegionFamily::BPlus), f, xi + tab.plus);
  sum.add(areas.at(RegionFamily::CPlus), f, xi + tab.plus);
  sum.add(areas.at(RegionFamily::BMinus), f, xi + tab.b_minus);
  sum.add(areas.at(RegionFamily::CMinus), f, xi + tab.c_minus);
  sum.add(areas.at(RegionFamily::B), f, xi + tab.rest);
  sum.add(areas.at(RegionFamily::C), f, xi + tab.rest);
  return sum.total();
}

ExtendedEnergy laminate_energy_closed_form(const PlanarDensity &f, const Mat32 &xi,
                                           const LaminateGeometry &geom,
                                           const Vec3 &b_ell) {
  const auto tab = gradient_table(geom, b_ell);
  const double n = geom.strips;
  const double t = geom.t;
  const double outer = 1.0 - 2.0 / n;
  WeightedSum sum;
  sum.add(outer * (1.0 - t), f, xi + tab.a_minus);
  sum.add(outer * t, f, xi + tab.plus);
  sum.add(t / n, f, xi + tab.plus);
  sum.add((1.0 - t) / (2.0 * n), f, xi + tab.b_minus);
  sum.add((1.0 - t) / (2.0 * n), f, xi + tab.c_minus);
  sum.add(1.0 / n, f, xi);
  return sum.total();
}

ExtendedEnergy laminate_two_point_value(const PlanarDensity &f, const Mat32 &xi,
                                        const LaminateGeometry &geom, const Vec3 &b) {
  const auto tab = gradient_table(geom, b);
  WeightedSum sum;
  sum.add(1.0 - geom.t, f, xi + tab.a_minus);
  sum.add(geom.t, f, xi + tab.plus);
  return sum.total();
}

namespace {

double triangle_power_integral(const Vec2 &v0, const Vec2 &v1, const Vec2 &v2,
                               double scale, const Vec2 &lin, double offset,
                               double p, const std::vector<double> &nodes,
                               const std::vector<double> &weights) {
  // integrates (scale * (lin . x + offset))^p over the triangle; the affine
  // form is nonnegative there.  Duffy transform to the unit square.
  const double two_area =
      (v1.x - v0.x) * (v2.y - v0.y) - (v2.x - v0.x) * (v1.y - v0.y);
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double u = nodes[i];
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const double v = nodes[j];
      const Vec2 e1 = v1 - v0;
      const Vec2 e2 = v2 - v1;
      const Vec2 x = v0 + (e1 + e2 * v) * u;
      const double val = std::max(0.0, scale * (lin.dot(x) + offset));
      acc += weights[i] * weights[j] * u * std::pow(val, p);
    }
  }
  return acc * std::abs(two_area);
}

}  // namespace

double sigma_lp_norm(const LaminateGeometry &geom, double p, int gauss_points) {
  if (p < 1.0) throw std::invalid_argument("sigma_lp_norm: p must be >= 1");
  const double n = geom.strips;
  const double t = geom.t;
  if (t == 0.0 || t == 1.0) {
    // degenerate laminate: sigma vanishes on A-union or everything relevant
    // collapses; fall through to the generic path anyway
  }
  auto [nodes01, weights01] = gauss_legendre_01(gauss_points);

  const double inv_n = 1.0 / n;
  const double split = (1.0 - t) / n;
  const double band = 1.0 - 2.0 / n;

  // A- rectangle: |sigma| = t * x1 on [0, (1-t)/n]
  double a_minus = 0.0;
  for (std::size_t i = 0; i < nodes01.size(); ++i) {
    const double x1 = split * nodes01[i];
    a_minus += weights01[i] * std::pow(t * x1, p);
  }
  a_minus *= split * band;

  // A+ rectangle: |sigma| = (1-t)(1/n - x1) on [(1-t)/n, 1/n]
  double a_plus = 0.0;
  const double width = inv_n - split;
  for (std::size_t i = 0; i < nodes01.size(); ++i) {
    const double x1 = split + width * nodes01[i];
    a_plus += weights01[i] * std::pow((1.0 - t) * (inv_n - x1), p);
  }
  a_plus *= width * band;

  // wedges of strip k = 0
  const Vec2 b_apex(inv_n, 0.0), b_l(0.0, inv_n), b_m(split, inv_n), b_r(inv_n, inv_n);
  const Vec2 c_apex(inv_n, 1.0), c_l(0.0, 1.0 - inv_n), c_m(split, 1.0 - inv_n),
      c_r(inv_n, 1.0 - inv_n);

  const double b_minus = triangle_power_integral(b_apex, b_l, b_m, t, {1.0, 1.0},
                                                 -inv_n, p, nodes01, weights01);
  const double b_plus = triangle_power_integral(b_apex, b_m, b_r, 1.0 - t,
                                                {-1.0, 0.0}, inv_n, p, nodes01, weights01);
  const double c_minus = triangle_power_integral(
      c_apex, c_l, c_m, t, {1.0, -1.0}, 1.0 - inv_n, p, nodes01, weights01);
  const double c_plus = triangle_power_integral(c_apex, c_m, c_r, 1.0 - t,
                                                {-1.0, 0.0}, inv_n, p, nodes01, weights01);

  const double per_strip = a_minus + a_plus + b_minus + b_plus + c_minus + c_plus;
  return per_strip * n;
}

CellCover vitali_cover(const Rect &polygon, double residual_target, int max_depth) {
  if (polygon.hi.x <= polygon.lo.x || polygon.hi.y <= polygon.lo.y)
    throw std::invalid_argument("vitali_cover: empty polygon");
  if (residual_target <= 0.0)
    throw std::invalid_argument("vitali_cover: residual target must be > 0");
  if (polygon.lo.x < 0.0 || polygon.lo.y < 0.0)
    throw std::invalid_argument("vitali_cover: polygon must lie in the first quadrant");

  double root = 1.0;
  while (root < polygon.hi.x || root < polygon.hi.y) root *= 2.0;

  struct Node {
    double x, y, size;
  };
  CellCover cover;
  const double area = polygon.area();
  std::deque<Node> level{{0.0, 0.0, root}};
  for (int depth = 0; depth <= max_depth && !level.empty(); ++depth) {
    std::deque<Node> next;
    for (const Node &nd : level) {
      const Rect sq{{nd.x, nd.y}, {nd.x + nd.size, nd.y + nd.size}};
      const bool inside = sq.lo.x >= polygon.lo.x && sq.lo.y >= polygon.lo.y &&
                          sq.hi.x <= polygon.hi.x && sq.hi.y <= polygon.hi.y;
      if (inside) {
        cover.squares.push_back({sq.lo, nd.size});
        cover.covered_area += nd.size * nd.size;
        continue;
      }
      const bool disjoint = sq.hi.x <= polygon.lo.x || sq.lo.x >= polygon.hi.x ||
                            sq.hi.y <= polygon.lo.y || sq.lo.y >= polygon.hi.y;
      if (disjoint) continue;
      const double h = nd.size * 0.5;
      next.push_back({nd.x, nd.y, h});
      next.push_back({nd.x + h, nd.y, h});
      next.push_back({nd.x, nd.y + h, h});
      next.push_back({nd.x + h, nd.y + h, h});
    }
    cover.residual = area - cover.covered_area;
    if (cover.residual <= residual_target) return cover;
    level = std::move(next);
  }
  cover.residual = area - cover.covered_area;
  if (cover.residual <= residual_target) return cover;
  throw CoverError(cover.residual);
}

RefinementReport verify_cell_refinement(const PlanarDensity &f, const Mat32 &xi,
                                        const Vec2 &a, const Vec3 &b, double t,
                                        const Rect &polygon,
                                        const std::vector<int> &n_seq,
                                        const std::vector<long> &ell_seq,
                                        const std::vector<long> &q_seq,
                                        double cover_residual_fraction) {
  RefinementReport rep;
  const double area = polygon.area();
  {
    LaminateGeometry g(std::max(3, n_seq.empty() ? 3 : n_seq.front()), t, a);
    rep.target = area * laminate_two_point_value(f, xi, g, b).value_or_inf();
  }
  const double f_xi = f(xi).value_or_inf();

  for (long q : q_seq) {
    const Rect inner = polygon.inset(1.0 / static_cast<double>(q));
    if (inner.hi.x <= inner.lo.x || inner.hi.y <= inner.lo.y) continue;
    const CellCover cover =
        vitali_cover(inner, cover_residual_fraction * area, 16);
    const double frame = area - cover.covered_area;  // outside the packing, grad phi = 0
    for (long ell : ell_seq) {
      const Vec3 b_ell = perturbed_direction(b, xi, ell);
      for (int n : n_seq) {
        LaminateGeometry g(n, t, a);
        // each rescaled cell contributes rho_m^2 times the unit-cell energy
        const double cell = laminate_energy_quadrature(f, xi, g, b_ell).value_or_inf();
        const double energy = cover.covered_area * cell + frame * f_xi;
        RefinementRow row;
        row.n = n;
        row.ell = ell;
        row.q = q;
        row.covered_area = cover.covered_area;
        row.energy = energy;
        row.abs_gap = std::abs(energy - rep.target);
        rep.rows.push_back(row);
      }
    }
  }
  if (!rep.rows.empty()) rep.final_gap = rep.rows.back().abs_gap;
  return rep;
}

}  // namespace membrane
