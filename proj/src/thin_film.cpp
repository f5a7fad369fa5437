#include "membrane/thin_film.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "membrane/quadrature.hpp"

namespace membrane {

PlanarField affine_field(const Mat32 &grad, const Vec3 &offset) {
  PlanarField f;
  f.value = [grad, offset](const Vec2 &x) { return offset + grad.apply(x); };
  f.gradient = [grad](const Vec2 &) { return grad; };
  return f;
}

Vec3 FilmAnsatz::at(const Vec2 &x, double x3) const {
  Vec3 u = v.value(x) + director.value(x) * x3;
  if (quad_term) u = u + quad_term->value(x) * (x3 * x3);
  return u;
}

Mat33 FilmAnsatz::gradient_at(const Vec2 &x, double x3) const {
  Mat32 planar = v.gradient(x) + director.gradient(x) * x3;
  Vec3 third = director.value(x);
  if (quad_term) {
    planar = planar + quad_term->gradient(x) * (x3 * x3);
    third = third + quad_term->value(x) * (2.0 * x3);
  }
  return adjoin_column(planar, third);
}

namespace {

// midpoints of (-1/2, 1/2) Gauss nodes
std::pair<std::vector<double>, std::vector<double>> transverse_rule(int order) {
  auto [x, w] = gauss_legendre(order);
  for (double &v : x) v *= 0.5;
  for (double &v : w) v *= 0.5;
  return {x, w};
}

}  // namespace

FilmScan film_energy(const StoredEnergy &W, const FilmAnsatz &u, double eps,
                     const FilmQuad &quad) {
  if (eps <= 0.0) throw std::invalid_argument("film_energy: eps > 0 required");
  auto [px, pw] = gauss_legendre_01(quad.planar_order);
  auto [tx, tw] = transverse_rule(quad.transverse_order);

  FilmScan scan;
  scan.min_det = std::numeric_limits<double>::infinity();
  double acc = 0.0;
  bool infinite = false;
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t j = 0; j < px.size(); ++j) {
      const Vec2 x{px[i], px[j]};
      for (std::size_t k = 0; k < tx.size(); ++k) {
        const Mat33 F = u.gradient_at(x, eps * tx[k]);
        const double d = F.det();
        scan.min_det = std::min(scan.min_det, d);
        if (d <= 0.0 && !scan.bad_node)
          scan.bad_node = std::array<double, 3>{x.x, x.y, tx[k]};
        const ExtendedEnergy e = W(F);
        if (!e.is_finite()) {
          infinite = true;
          if (!scan.bad_node) scan.bad_node = std::array<double, 3>{x.x, x.y, tx[k]};
          continue;
        }
        acc += pw[i] * pw[j] * tw[k] * e.value();
      }
    }
  scan.energy = infinite ? ExtendedEnergy::infinity() : ExtendedEnergy(acc);
  return scan;
}

std::vector<std::pair<Vec2, Vec3>> midplane_average(const FilmAnsatz &u, double eps,
                                                    const FilmQuad &quad) {
  if (eps <= 0.0) throw std::invalid_argument("midplane_average: eps > 0 required");
  auto [px, pw] = gauss_legendre_01(quad.planar_order);
  auto [tx, tw] = transverse_rule(quad.transverse_order);
  std::vector<std::pair<Vec2, Vec3>> out;
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t j = 0; j < px.size(); ++j) {
      const Vec2 x{px[i], px[j]};
      Vec3 avg;
      for (std::size_t k = 0; k < tx.size(); ++k)
        avg = avg + u.at(x, eps * tx[k]) * tw[k];
      out.emplace_back(x, avg);
    }
  return out;
}

ExtendedEnergy membrane_energy(const PlanarField &v, const PlanarDensity &density,
                               const FilmQuad &quad) {
  auto [px, pw] = gauss_legendre_01(quad.planar_order);
  double acc = 0.0;
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t j = 0; j < px.size(); ++j) {
      const ExtendedEnergy e = density(v.gradient({px[i], px[j]}));
      if (!e.is_finite()) return ExtendedEnergy::infinity();
      acc += pw[i] * pw[j] * e.value();
    }
  return ExtendedEnergy(acc);
}

namespace {

double slab_min_det(const FilmAnsatz &u, double eps, const FilmQuad &quad) {
  auto [px, pw] = gauss_legendre_01(quad.planar_order);
  auto [tx, tw] = transverse_rule(quad.transverse_order);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t j = 0; j < px.size(); ++j)
      for (std::size_t k = 0; k < tx.size(); ++k)
        m = std::min(m, u.gradient_at({px[i], px[j]}, eps * tx[k]).det());
  return m;
}

double fit_log_slope(const std::vector<double> &x, const std::vector<double> &y) {
  // least-squares slope of log y against log x
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ExperimentReport recovery_experiment(const StoredEnergy &W, const PlanarField &v,
                                     const PlanarField &phi, long j,
                                     const FilmConfig &cfg) {
  if (j < 1) throw std::invalid_argument("recovery_experiment: j >= 1");
  ExperimentReport rep;
  FilmAnsatz u{v, phi, {}};

  // planar margin, the analogue of det(grad v | phi) >= 1/(2j)
  auto [px, pw] = gauss_legendre_01(cfg.quad.planar_order);
  rep.worst_planar_det = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < px.size(); ++i)
    for (std::size_t k = 0; k < px.size(); ++k) {
      const Vec2 x{px[i], px[k]};
      const double d = adjoin_column(v.gradient(x), phi.value(x)).det();
      if (d < rep.worst_planar_det) {
        rep.worst_planar_det = d;
        rep.worst_planar_node = {x.x, x.y};
      }
    }
  const double planar_floor = 1.0 / (2.0 * j);
  const double slab_floor = 1.0 / (4.0 * j);
  rep.precondition_ok = rep.worst_planar_det >= planar_floor;
  if (!rep.precondition_ok) return rep;

  // largest thickness (up to the scan cap) at which every slab node keeps the
  // quartered margin; bisection on the indicator
  auto margin_ok = [&](double eps) {
    return slab_min_det(u, eps, cfg.quad) >= slab_floor;
  };
  if (margin_ok(cfg.eta_search_max)) {
    rep.eta = cfg.eta_search_max;
  } else {
    double lo = 0.0, hi = cfg.eta_search_max;
    for (int it = 0; it < cfg.eta_bisections; ++it) {
      const double mid = 0.5 * (lo + hi);
      (margin_ok(mid) ? lo : hi) = mid;
    }
    rep.eta = lo;
  }

  // limiting planar energy int_Sigma W(grad v | phi)
  {
    double acc = 0.0;
    for (std::size_t i = 0; i < px.size(); ++i)
      for (std::size_t k = 0; k < px.size(); ++k) {
        const Vec2 x{px[i], px[k]};
        acc += pw[i] * pw[k] *
               W(adjoin_column(v.gradient(x), phi.value(x))).value_or_inf();
      }
    rep.limit = acc;
  }

  std::vector<double> xs, ys;
  for (double eps : cfg.eps_list) {
    const FilmScan scan = film_energy(W, u, eps, cfg.quad);
    ExperimentReport::Row row;
    row.eps = eps;
    row.energy = scan.energy.value_or_inf();
    row.min_det = scan.min_det;
    row.margin_ok = scan.min_det >= slab_floor;
    rep.rows.push_back(row);
    if (scan.energy.is_finite()) {
      xs.push_back(eps);
      ys.push_back(std::abs(row.energy - rep.limit));
    }
  }
  rep.slope = fit_log_slope(xs, ys);
  return rep;
}

GammaGapReport gamma_gap_report(const StoredEnergy &W, const Mat32 &xi,
                                const std::vector<Vec3> &directors,
                                const std::vector<long> &j_list, double tol,
                                const FiberSolverConfig &solver) {
  GammaGapReport rep;
  // affine film with a constant director: E_eps is eps-independent and equals
  // W(xi | phi), so the limit along the family is just the best probe value
  double best = std::numeric_limits<double>::infinity();
  for (const Vec3 &phi : directors)
    best = std::min(best, W(adjoin_column(xi, phi)).value_or_inf());
  rep.recovery_best = best;

  rep.monotone_ok = true;
  double prev = std::numeric_limits<double>::infinity();
  for (long j : j_list) {
    const double v = fiber_relax_constrained(W, xi, j, solver).value_or_inf();
    if (v > prev + tol) rep.monotone_ok = false;
    prev = v;
    rep.constrained.emplace_back(j, v);
  }
  rep.relaxed = fiber_relax(W, xi, solver).value_or_inf();
  rep.ordering_ok = rep.recovery_best >= rep.relaxed - tol;
  return rep;
}

}  // namespace membrane
