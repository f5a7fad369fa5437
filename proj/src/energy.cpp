#include "membrane/energy.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "membrane/kernels.hpp"

namespace membrane {

namespace {

constexpr double kGolden = 0.6180339887498949;  // 1/phi

// Golden-section minimization of a unimodal-ish bracket [lo,hi]; returns the
// best value seen including the endpoints.
template <class F>
double golden_min(F &&g, double lo, double hi, int stages, double tol) {
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = g(x1), f2 = g(x2);
  double best = std::min({g(a), g(b), f1, f2});
  for (int it = 0; it < stages && (b - a) > 1e-16; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = g(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = g(x2);
    }
    const double cur = std::min(f1, f2);
    if (cur < best) {
      if (best - cur < tol && it > 8) {
        best = cur;
        break;
      }
      best = cur;
    }
  }
  return best;
}

// 1D reduction of the fiber problem for barrier models: with n = xi1 ^ xi2
// nonzero, the optimal zeta is s*n/|n| (tangential components raise |zeta|
// without changing the determinant), so we minimize
//   g(s) = h(s|n|) + (|xi|^2 + s^2)^{p/2}  over s > s_min.
double fiber_reduced_min(const StoredEnergy &W, const Mat32 &xi, double s_min,
                         const FiberSolverConfig &cfg) {
  const auto &bf = *W.barrier;
  const double n_norm = xi.column_normal().norm();
  const double xi_sq = xi.frobenius_sq();
  const double p = bf.p;
  auto g = [&](double s) {
    if (s * n_norm <= 0.0) return std::numeric_limits<double>::infinity();
    return bf.h.finite_part(s * n_norm) + std::pow(xi_sq + s * s, 0.5 * p);
  };

  const double step = cfg.coarse_step;
  const double lo = std::max(s_min, step * 1e-6);
  const double hi = std::max({cfg.coarse_radius, 4.0 / n_norm, lo + 4.0 * step});

  double best_s = lo;
  double best_f = g(lo);
  for (double s = lo + step; s <= hi; s += step) {
    const double f = g(s);
    if (f < best_f) {
      best_f = f;
      best_s = s;
    }
  }
  const double bl = std::max(lo, best_s - step);
  const double bh = std::min(hi, best_s + step);
  const double refined = golden_min(g, bl, bh, cfg.refine_stages, cfg.tolerance);
  return std::min(best_f, refined);
}

// Generic path: coarse cube scan plus contracting pattern search, with the
// feasibility filter applied before any energy evaluation.
double fiber_generic_min(const StoredEnergy &W, const Mat32 &xi, double det_min,
                         const FiberSolverConfig &cfg) {
  const Vec3 n = xi.column_normal();
  auto feasible = [&](const Vec3 &z) { return n.dot(z) >= det_min; };
  auto eval = [&](const Vec3 &z) -> double {
    const ExtendedEnergy e = W(adjoin_column(xi, z));
    return e.value_or_inf();
  };

  const double radius = std::min(cfg.coarse_radius, 8.0);
  const int half = 16;
  const double spacing = radius / half;
  double best = std::numeric_limits<double>::infinity();
  Vec3 best_z;
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j)
      for (int k = -half; k <= half; ++k) {
        const Vec3 z(i * spacing, j * spacing, k * spacing);
        if (!feasible(z)) continue;
        const double f = eval(z);
        if (f < best) {
          best = f;
          best_z = z;
        }
      }
  if (!std::isfinite(best)) {
    // project onto the feasible half-space through the scaled normal
    const double nn = n.norm_sq();
    if (nn > 0.0) {
      const Vec3 z = n * (std::max(det_min, 1.0) / nn);
      if (feasible(z)) {
        best = eval(z);
        best_z = z;
      }
    }
  }
  if (!std::isfinite(best)) return best;

  double h = spacing;
  for (int stage = 0; stage < cfg.refine_stages && h > 1e-12; ++stage) {
    bool improved = false;
    const Vec3 dirs[6] = {{h, 0, 0}, {-h, 0, 0}, {0, h, 0},
                          {0, -h, 0}, {0, 0, h}, {0, 0, -h}};
    for (const Vec3 &d : dirs) {
      const Vec3 z = best_z + d;
      if (!feasible(z)) continue;
      const double f = eval(z);
      if (f < best) {
        best = f;
        best_z = z;
        improved = true;
      }
    }
    if (!improved) h *= cfg.contraction;
  }
  return best;
}

}  // namespace

BarrierProfile inverse_gap_barrier() {
  BarrierProfile h;
  h.finite_part = [](double d) {
    const double r = 1.0 / d - 1.0;
    return r * r;
  };
  h.tail_bound = [](double delta) {
    const double at_delta = (1.0 / delta - 1.0) * (1.0 / delta - 1.0);
    return std::max(at_delta, 1.0);  // sup over [delta,inf); h -> 1 at infinity
  };
  return h;
}

StoredEnergy make_barrier_energy(const BarrierProfile &h, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("make_barrier_energy: p must be > 1");
  StoredEnergy W;
  W.exponent = p;
  W.coercivity = 1.0;
  W.barrier = StoredEnergy::BarrierForm{h, p};
  W.growth_constant = [h, p](double delta) {
    return std::max(h.tail_bound(delta), 1.0);
  };
  W.evaluate = [h, p](const Mat33 &F) {
    const double d = F.det();
    if (d <= 0.0) return ExtendedEnergy::infinity();
    return ExtendedEnergy(h.finite_part(d) + std::pow(F.frobenius_sq(), 0.5 * p));
  };
  return W;
}

ExtendedEnergy fiber_relax(const StoredEnergy &W, const Mat32 &xi,
                           const FiberSolverConfig &cfg) {
  const double n_norm = xi.column_normal().norm();
  if (n_norm < kDegenerateNormal) return ExtendedEnergy::infinity();
  double best;
  if (W.barrier)
    best = fiber_reduced_min(W, xi, 0.0, cfg);
  else
    best = fiber_generic_min(W, xi, std::nextafter(0.0, 1.0), cfg);
  if (!std::isfinite(best)) return ExtendedEnergy::infinity();
  return ExtendedEnergy(best);
}

ExtendedEnergy fiber_relax_constrained(const StoredEnergy &W, const Mat32 &xi,
                                       long j, const FiberSolverConfig &cfg) {
  if (j < 1) throw std::invalid_argument("fiber_relax_constrained: j must be >= 1");
  const double n_norm = xi.column_normal().norm();
  if (n_norm < kDegenerateNormal)
    throw std::domain_error("fiber_relax_constrained: degenerate xi, empty feasible set");
  const double det_min = 1.0 / static_cast<double>(j);
  double best;
  if (W.barrier)
    best = fiber_reduced_min(W, xi, det_min / n_norm, cfg);
  else
    best = fiber_generic_min(W, xi, det_min, cfg);
  return ExtendedEnergy(best);
}

Vec3 normal_field(const Mat32 &xi) {
  const Vec3 n = xi.column_normal();
  const double nn = n.norm_sq();
  if (std::sqrt(nn) < kDegenerateNormal)
    throw std::domain_error("normal_field: degenerate xi");
  return n * (1.0 / nn);
}

namespace {

void require_p2_barrier(const StoredEnergy &W) {
  if (!W.barrier || W.barrier->p != 2.0)
    throw std::invalid_argument(
        "fiber_relax_bruteforce: requires the barrier form with p = 2");
}

}  // namespace

ExtendedEnergy fiber_relax_bruteforce(const StoredEnergy &W, const Mat32 &xi,
                                      const BruteForceGrid &grid) {
  require_p2_barrier(W);
  const Vec3 n = xi.column_normal();
  const double base0 = xi.frobenius_sq();

  auto scan = [&](const Vec3 &center, double radius, double step) {
    const auto half = static_cast<long>(std::llround(radius / step));
    const std::size_t count = static_cast<std::size_t>(2 * half + 1);
    double best = std::numeric_limits<double>::infinity();
    Vec3 best_z;
    for (long i = -half; i <= half; ++i) {
      const double z1 = center.x + static_cast<double>(i) * step;
      for (long j = -half; j <= half; ++j) {
        const double z2 = center.y + static_cast<double>(j) * step;
        const double z0 = center.z - static_cast<double>(half) * step;
        const double det0 = n.x * z1 + n.y * z2;
        const double base = base0 + z1 * z1 + z2 * z2;
        const auto r = kernels::min_barrier_line(z0, step, count, det0, n.z, base);
        if (r.value < best) {
          best = r.value;
          best_z = Vec3(z1, z2, z0 + static_cast<double>(r.index) * step);
        }
      }
    }
    return std::pair<double, Vec3>(best, best_z);
  };

  auto [coarse, zc] = scan(Vec3(), grid.radius, grid.step);
  if (!std::isfinite(coarse)) return ExtendedEnergy::infinity();
  auto [fine, zf] = scan(zc, grid.step, grid.step / grid.refine_factor);
  return ExtendedEnergy(std::min(coarse, fine));
}

ExtendedEnergy fiber_relax_bruteforce_constrained(const StoredEnergy &W,
                                                  const Mat32 &xi, long j,
                                                  const BruteForceGrid &grid) {
  require_p2_barrier(W);
  if (j < 1) throw std::invalid_argument("j must be >= 1");
  const double det_min = 1.0 / static_cast<double>(j);
  const Vec3 n = xi.column_normal();
  const double base0 = xi.frobenius_sq();
  const auto &h = W.barrier->h;

  auto scan = [&](const Vec3 &center, double radius, double step) {
    const auto half = static_cast<long>(std::llround(radius / step));
    double best = std::numeric_limits<double>::infinity();
    Vec3 best_z;
    for (long i = -half; i <= half; ++i)
      for (long jj = -half; jj <= half; ++jj)
        for (long k = -half; k <= half; ++k) {
          const Vec3 z = center + Vec3(i * step, jj * step, k * step);
          const double det = n.dot(z);
          if (det < det_min) continue;
          const double f = h.finite_part(det) + base0 + z.norm_sq();
          if (f < best) {
            best = f;
            best_z = z;
          }
        }
    return std::pair<double, Vec3>(best, best_z);
  };

  auto [coarse, zc] = scan(Vec3(), grid.radius, grid.step);
  if (!std::isfinite(coarse)) return ExtendedEnergy::infinity();
  auto [fine, zf] = scan(zc, grid.step, grid.step / grid.refine_factor);
  (void)zf;
  return ExtendedEnergy(std::min(coarse, fine));
}

PlanarDensity fiber_density(const StoredEnergy &W, const FiberSolverConfig &cfg) {
  PlanarDensity f;
  f.tag = PlanarDensity::Tag::BaseFiber;
  f.evaluate = [W, cfg](const Mat32 &xi) { return fiber_relax(W, xi, cfg); };
  return f;
}

DensityPropertyReport check_density_properties(const StoredEnergy &W,
                                               const DensitySampleSpec &spec,
                                               const FiberSolverConfig &cfg) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uni(-spec.amplitude, spec.amplitude);
  auto random_xi = [&] {
    return Mat32(Vec3(uni(rng), uni(rng), uni(rng)), Vec3(uni(rng), uni(rng), uni(rng)));
  };

  DensityPropertyReport rep;
  rep.coercivity_margin = std::numeric_limits<double>::infinity();

  for (double delta : spec.deltas) {
    // for barrier models W0 <= r_delta + (1+|xi|^2)^{p/2} <= c(1+|xi|^p) on
    // {|xi1^xi2| >= delta}; check against that constant
    const double c_delta = W.growth_constant(delta) + std::pow(2.0, 0.5 * W.exponent);
    int found = 0;
    while (found < spec.samples_per_delta) {
      const Mat32 xi = random_xi();
      if (xi.column_normal().norm() < delta) continue;
      ++found;
      const ExtendedEnergy w0 = fiber_relax(W, xi, cfg);
      const double xp = std::pow(xi.frobenius_sq(), 0.5 * W.exponent);
      if (xp > 0.0)
        rep.coercivity_margin = std::min(rep.coercivity_margin, w0.value() / xp);
      if (w0.value() > c_delta * (1.0 + xp) * (1.0 + 1e-9)) ++rep.growth_violations;
    }
  }

  // continuity probe: oscillation over shrinking balls at nondegenerate centers
  std::vector<Mat32> centers;
  while (static_cast<int>(centers.size()) < spec.continuity_centers) {
    const Mat32 xi = random_xi();
    if (xi.column_normal().norm() >= 0.3) centers.push_back(xi);
  }
  for (double radius : spec.ball_radii) {
    double max_osc = 0.0;
    for (const Mat32 &c : centers) {
      const double w0c = fiber_relax(W, c, cfg).value();
      double lo = w0c, hi = w0c;
      for (int s = 0; s < spec.ball_samples; ++s) {
        Mat32 d(Vec3(uni(rng), uni(rng), uni(rng)), Vec3(uni(rng), uni(rng), uni(rng)));
        const double dn = d.frobenius();
        if (dn == 0.0) continue;
        const Mat32 probe = c + d * (radius / dn);
        const ExtendedEnergy w = fiber_relax(W, probe, cfg);
        if (!w.is_finite()) continue;
        lo = std::min(lo, w.value());
        hi = std::max(hi, w.value());
      }
      max_osc = std::max(max_osc, hi - lo);
    }
    rep.oscillations.push_back({radius, max_osc});
  }
  return rep;
}

}  // namespace membrane
