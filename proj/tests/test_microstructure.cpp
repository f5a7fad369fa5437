#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "membrane/density.hpp"
#include "membrane/microstructure.hpp"

using namespace membrane;

namespace {

const Mat32 kId{{1, 0, 0}, {0, 1, 0}};
std::mt19937_64 rng(777);
std::uniform_real_distribution<double> unit(0.0, 1.0);

}  // namespace

TEST_CASE("geometry validation") {
  CHECK_THROWS(LaminateGeometry(2, 0.5));
  CHECK_THROWS(LaminateGeometry(4, 1.5));
  CHECK_THROWS(LaminateGeometry(4, 0.5, Vec2{1.0, 1.0}));
}

TEST_CASE("region areas sum to one and match closed forms") {
  for (int n : {3, 4, 8, 16})
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const LaminateGeometry geom(n, t);
      const auto areas = region_measures(geom);
      double sum = 0.0;
      for (const auto &[fam, a] : areas) {
        CHECK(a >= 0.0);
        sum += a;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
  const auto a4 = region_measures(LaminateGeometry(4, 0.5));
  CHECK(a4.at(RegionFamily::AMinus) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(region_measures(LaminateGeometry(8, 1.0)).at(RegionFamily::AMinus) == 0.0);
}

TEST_CASE("Monte Carlo partition frequencies") {
  const long N = 200000;
  for (const auto &[n, t] : std::vector<std::pair<int, double>>{{4, 0.5}, {8, 0.25}}) {
    const LaminateGeometry geom(n, t);
    std::map<RegionFamily, long> hits;
    for (long i = 0; i < N; ++i)
      ++hits[classify_and_sigma(geom, {unit(rng), unit(rng)}).family];
    for (const auto &[fam, area] : region_measures(geom)) {
      const double freq = static_cast<double>(hits[fam]) / N;
      const double sd = std::sqrt(std::max(area * (1 - area), 1e-12) / N);
      CHECK(std::abs(freq - area) <= 4.0 * sd + 1.0 / N);
    }
  }
}

TEST_CASE("sigma vanishes on the boundary") {
  const LaminateGeometry geom(5, 0.37);
  for (int i = 0; i <= 250; ++i) {
    const double s = static_cast<double>(i) / 250;
    CHECK(classify_and_sigma(geom, {s, 0.0}).value == 0.0);
    CHECK(classify_and_sigma(geom, {s, 1.0}).value == 0.0);
    CHECK(classify_and_sigma(geom, {0.0, s}).value == 0.0);
    CHECK(classify_and_sigma(geom, {1.0, s}).value == 0.0);
  }
}

TEST_CASE("pointwise sigma bound and interface value") {
  for (int n : {3, 8})
    for (double t : {0.25, 0.6}) {
      const LaminateGeometry geom(n, t);
      const double bound = t * (1 - t) / n + 1e-15;
      for (int i = 0; i < 2000; ++i)
        CHECK(std::abs(classify_and_sigma(geom, {unit(rng), unit(rng)}).value) <=
              bound);
      // deepest point of the zig-zag, on the A-/A+ interface
      const double x1 = (1 - t) / n;
      CHECK(classify_and_sigma(geom, {x1, 0.5}).value ==
            doctest::Approx(-t * (1 - t) / n).epsilon(1e-14));
    }
  // t = 0 collapses the profile entirely
  const LaminateGeometry flat(6, 0.0);
  for (int i = 0; i < 200; ++i)
    CHECK(classify_and_sigma(flat, {unit(rng), unit(rng)}).value == 0.0);
}

TEST_CASE("gradients match finite differences inside regions") {
  const LaminateGeometry geom(4, 0.3);
  const double h = 1e-6;
  int tested = 0;
  while (tested < 200) {
    const Vec2 x{unit(rng), unit(rng)};
    if (x.x < 2 * h || x.x > 1 - 2 * h || x.y < 2 * h || x.y > 1 - 2 * h) continue;
    const RegionPoint c = classify_and_sigma(geom, x);
    const RegionPoint xp = classify_and_sigma(geom, {x.x + h, x.y});
    const RegionPoint xm = classify_and_sigma(geom, {x.x - h, x.y});
    const RegionPoint yp = classify_and_sigma(geom, {x.x, x.y + h});
    const RegionPoint ym = classify_and_sigma(geom, {x.x, x.y - h});
    // skip stencils that straddle a region boundary
    if (xp.family != c.family || xm.family != c.family || yp.family != c.family ||
        ym.family != c.family || xp.strip != c.strip || xm.strip != c.strip)
      continue;
    CHECK((xp.value - xm.value) / (2 * h) ==
          doctest::Approx(c.gradient.x).epsilon(1e-6));
    CHECK((yp.value - ym.value) / (2 * h) ==
          doctest::Approx(c.gradient.y).epsilon(1e-6));
    ++tested;
  }
}

TEST_CASE("rotated frame reproduces the canonical profile") {
  const Vec2 a{0.0, 1.0};  // quarter-turned lamination direction
  const LaminateGeometry rot(4, 0.4, a);
  const LaminateGeometry can(4, 0.4);
  const Vec2 ap = a.perp();
  for (int i = 0; i < 300; ++i) {
    const Vec2 y{unit(rng), unit(rng)};       // canonical-frame point
    const Vec2 x = a * y.x + ap * y.y;        // preimage in the rotated frame
    const RegionPoint r = classify_and_sigma(rot, x);
    const RegionPoint c = classify_and_sigma(can, y);
    CHECK(r.family == c.family);
    CHECK(r.value == doctest::Approx(c.value).epsilon(1e-13));
    const Vec2 expected = a * c.gradient.x + ap * c.gradient.y;
    CHECK(r.gradient.x == doctest::Approx(expected.x).epsilon(1e-13));
    CHECK(r.gradient.y == doctest::Approx(expected.y).epsilon(1e-13));
  }
  CHECK_THROWS_AS(classify_and_sigma(rot, Vec2{1.0, 1.0}),  // outside the cell
                  std::domain_error);
}

TEST_CASE("perturbed direction") {
  CHECK_THROWS(perturbed_direction({0, 0, 1}, Mat32{{1, 0, 0}, {2, 0, 0}}, 1));
  const Vec3 keep = perturbed_direction({0, 0, 1}, kId, 7);
  CHECK(keep.z == 1.0);
  CHECK(keep.x == 0.0);
  const Vec3 moved = perturbed_direction({1, 0, 0}, kId, 10);
  CHECK(moved.x == 1.0);
  CHECK(moved.z == doctest::Approx(0.1).epsilon(1e-15));
  // result never lies in the column span
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    Mat32 xi{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    if (xi.column_normal().norm() < 0.1) continue;
    const Vec3 b{u(rng), u(rng), u(rng)};
    const Vec3 bl = perturbed_direction(b, xi, 1 + (i % 5));
    const Vec3 n = xi.column_normal();
    CHECK(std::abs(bl.dot(n)) / n.norm() > 1e-13);
  }
}

TEST_CASE("quadrature equals closed form for arbitrary densities") {
  const Mat32 xi_b = kId + outer_32({0, 0, 1}, {1, 0});
  const PlanarDensity dw = double_well_density(kId, xi_b);
  const PlanarDensity cq = convex_quadratic_density();
  const Mat32 mid = kId + outer_32({0, 0, 1}, {0.5, 0});
  for (int n : {4, 8, 16})
    for (double t : {0.25, 0.5, 0.75})
      for (const PlanarDensity *f : {&dw, &cq}) {
        const LaminateGeometry geom(n, t);
        const Vec3 bl = perturbed_direction({0, 0, 1}, mid, 1000);
        const double q = laminate_energy_quadrature(*f, mid, geom, bl).value();
        const double c = laminate_energy_closed_form(*f, mid, geom, bl).value();
        CHECK(std::abs(q - c) <= 1e-12 * std::max(1.0, std::abs(c)));
      }
}

TEST_CASE("degenerate weights never evaluate the dead branch") {
  // at t = 0 every perturbation vanishes and the result is f(xi) exactly
  const PlanarDensity cq = convex_quadratic_density();
  const LaminateGeometry geom(4, 0.0);
  const double v = laminate_energy_quadrature(cq, kId, geom, {0, 0, 1}).value();
  CHECK(v == cq(kId).value());
  // a density that is +inf off xi still works at t = 0
  PlanarDensity spiky;
  spiky.evaluate = [](const Mat32 &m) {
    return (m - kId).frobenius_sq() < 1e-18 ? ExtendedEnergy(1.0)
                                            : ExtendedEnergy::infinity();
  };
  CHECK(laminate_energy_quadrature(spiky, kId, geom, {0, 0, 1}).value() == 1.0);
}

TEST_CASE("lamination limit in n") {
  const Mat32 xi_b = kId + outer_32({0, 0, 1}, {1, 0});
  const PlanarDensity dw = double_well_density(kId, xi_b);
  const Mat32 mid = kId + outer_32({0, 0, 1}, {0.5, 0});
  const Vec3 b{0, 0, 1};
  const double two_point =
      laminate_two_point_value(dw, mid, LaminateGeometry(4, 0.5), b).value();
  CHECK(two_point == doctest::Approx(0.0).epsilon(1e-15));
  double prev_gap = 1e30;
  for (int n : {4, 8, 16, 32, 64}) {
    const double e =
        laminate_energy_quadrature(dw, mid, LaminateGeometry(n, 0.5), b).value();
    const double gap = std::abs(e - two_point);
    CHECK(gap < prev_gap);
    // the finite-n correction scales like 1/n
    CHECK(gap * n == doctest::Approx(0.375).epsilon(1e-12));
    prev_gap = gap;
  }
}

TEST_CASE("sigma Lp norm bound") {
  CHECK(sigma_lp_norm(LaminateGeometry(6, 0.0), 2.0) ==
        doctest::Approx(0.0).epsilon(1e-15));
  const double v = sigma_lp_norm(LaminateGeometry(8, 0.5), 2.0);
  CHECK(v <= 1.0 / 1024 + 1e-12);
  CHECK(v > 0.0);
  for (int n : {3, 5, 8, 16, 32})
    for (double t : {0.25, 0.5, 0.75})
      for (double p : {2.0, 3.0}) {
        const double norm = sigma_lp_norm(LaminateGeometry(n, t), p);
        CHECK(norm <= std::pow(t * (1 - t) / n, p) + 1e-12);
      }
  CHECK_THROWS(sigma_lp_norm(LaminateGeometry(4, 0.5), 0.5));
}

TEST_CASE("vitali cover basics") {
  // a single dyadic square is covered exactly by one cell
  const CellCover one = vitali_cover({{0.25, 0.25}, {0.5, 0.5}}, 1e-6);
  CHECK(one.squares.size() == 1);
  CHECK(one.residual == 0.0);

  const CellCover unit = vitali_cover({{0, 0}, {1, 1}}, 1e-2);
  CHECK(unit.covered_area >= 0.99);
  CHECK(unit.residual <= 1e-2);

  const Rect inner{{0.1, 0.2}, {0.83, 0.77}};
  const CellCover c = vitali_cover(inner, 0.003);
  CHECK(c.residual <= 0.003);
  CHECK(c.residual >= 0.0);
  double covered = 0.0;
  for (const auto &s : c.squares) {
    covered += s.size * s.size;
    CHECK(s.corner.x >= inner.lo.x);
    CHECK(s.corner.y >= inner.lo.y);
    CHECK(s.corner.x + s.size <= inner.hi.x);
    CHECK(s.corner.y + s.size <= inner.hi.y);
  }
  CHECK(covered == doctest::Approx(c.covered_area).epsilon(1e-15));
  // pairwise disjoint by dyadic construction
  for (std::size_t i = 0; i < c.squares.size(); ++i)
    for (std::size_t j = i + 1; j < c.squares.size(); ++j) {
      const auto &a = c.squares[i];
      const auto &b = c.squares[j];
      const bool apart = a.corner.x + a.size <= b.corner.x ||
                         b.corner.x + b.size <= a.corner.x ||
                         a.corner.y + a.size <= b.corner.y ||
                         b.corner.y + b.size <= a.corner.y;
      CHECK(apart);
    }

  CHECK_THROWS_AS(vitali_cover(inner, 1e-9, 4), CoverError);
  CHECK_THROWS(vitali_cover({{0.5, 0.5}, {0.5, 0.5}}, 0.1));
}

TEST_CASE("cell refinement harness") {
  const Mat32 xi_b = kId + outer_32({0, 0, 1}, {1, 0});
  const PlanarDensity dw = double_well_density(kId, xi_b);
  const Mat32 mid = kId + outer_32({0, 0, 1}, {0.5, 0});
  const Rect cell{{0, 0}, {1, 1}};

  // t = 0: every stage reports area * f(xi)
  const RefinementReport flat = verify_cell_refinement(
      dw, mid, {1, 0}, {0, 0, 1}, 0.0, cell, {4, 8}, {10}, {8});
  for (const auto &row : flat.rows)
    CHECK(row.energy == doctest::Approx(dw(mid).value()).epsilon(1e-12));

  const RefinementReport rep = verify_cell_refinement(
      dw, mid, {1, 0}, {0, 0, 1}, 0.5, cell, {8, 16, 32}, {100}, {8, 16});
  CHECK(rep.target == doctest::Approx(0.0).epsilon(1e-15));
  REQUIRE(!rep.rows.empty());
  // the trend tightens along the schedule
  CHECK(rep.final_gap < rep.rows.front().abs_gap);
  CHECK(rep.final_gap <= 0.08);
}
