#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "membrane/thin_film.hpp"

using namespace membrane;

namespace {

const StoredEnergy W = make_barrier_energy(inverse_gap_barrier(), 2.0);
const Mat32 kId{{1, 0, 0}, {0, 1, 0}};

PlanarField constant_director(const Vec3 &phi) {
  return {[phi](const Vec2 &) { return phi; }, [](const Vec2 &) { return Mat32{}; }};
}

PlanarField sine_director(double amp) {
  const double tau = 2.0 * M_PI;
  PlanarField f;
  f.value = [amp, tau](const Vec2 &x) {
    return Vec3{amp * std::sin(tau * x.x), 0.0, 1.0 + amp * std::sin(tau * x.y)};
  };
  f.gradient = [amp, tau](const Vec2 &x) {
    return Mat32{{amp * tau * std::cos(tau * x.x), 0.0, 0.0},
                 {0.0, 0.0, amp * tau * std::cos(tau * x.y)}};
  };
  return f;
}

}  // namespace

TEST_CASE("homogeneous film keeps the bulk energy at every thickness") {
  const FilmAnsatz u{affine_field(kId), constant_director({0, 0, 1}), {}};
  for (double eps : {0.5, 1e-1, 1e-2, 1e-4}) {
    const FilmScan s = film_energy(W, u, eps);
    CHECK(s.energy.value() == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(s.min_det == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_FALSE(s.bad_node.has_value());
  }
}

TEST_CASE("constant director makes the energy thickness-independent") {
  const Mat32 g{{1, 0, 0.2}, {0, 1, -0.1}};
  const Vec3 phi{0.1, 0.0, 0.8};
  const FilmAnsatz u{affine_field(g), constant_director(phi), {}};
  const double expected = W(adjoin_column(g, phi)).value();
  const double a = film_energy(W, u, 0.3).energy.value();
  const double b = film_energy(W, u, 0.001).energy.value();
  CHECK(a == doctest::Approx(expected).epsilon(1e-13));
  CHECK(b == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("orientation violation reports the offending node") {
  const FilmAnsatz u{affine_field(kId), constant_director({0, 0, -1}), {}};
  const FilmScan s = film_energy(W, u, 0.1);
  CHECK_FALSE(s.energy.is_finite());
  REQUIRE(s.bad_node.has_value());
  CHECK(s.min_det < 0.0);
}

TEST_CASE("midplane average reproduces the planar map") {
  const FilmAnsatz u{affine_field(kId, {0.3, 0.1, -0.2}), sine_director(0.2), {}};
  for (const auto &[x, avg] : midplane_average(u, 0.05)) {
    const Vec3 v = u.v.value(x);
    CHECK((avg - v).norm() <= 1e-14);
  }
  // a quadratic transverse term shifts the average by eps^2/12
  const Vec3 w{0.0, 0.0, 2.0};
  const FilmAnsatz uq{affine_field(kId), constant_director({0, 0, 1}),
                      PlanarField{[w](const Vec2 &) { return w; },
                                  [](const Vec2 &) { return Mat32{}; }}};
  const double eps = 0.2;
  for (const auto &[x, avg] : midplane_average(uq, eps)) {
    const Vec3 expected = uq.v.value(x) + w * (eps * eps / 12.0);
    CHECK((avg - expected).norm() <= 1e-15);
  }
}

TEST_CASE("membrane energy of an affine map is the density value") {
  PlanarDensity cq = convex_quadratic_density();
  const Mat32 g{{1, 0, 0.5}, {0, 1, 0}};
  CHECK(membrane_energy(affine_field(g), cq).value() ==
        doctest::Approx(g.frobenius_sq()).epsilon(1e-14));
}

TEST_CASE("recovery experiment on the identity embedding") {
  const ExperimentReport rep =
      recovery_experiment(W, affine_field(kId), constant_director({0, 0, 1}), 1);
  CHECK(rep.precondition_ok);
  CHECK(rep.worst_planar_det == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rep.eta == doctest::Approx(0.5).epsilon(1e-12));  // margin holds at the cap
  CHECK(rep.limit == doctest::Approx(3.0).epsilon(1e-13));
  for (const auto &row : rep.rows) {
    CHECK(row.margin_ok);
    CHECK(row.energy == doctest::Approx(3.0).epsilon(1e-13));
  }
}

TEST_CASE("recovery experiment with a bent director") {
  const ExperimentReport rep =
      recovery_experiment(W, affine_field(kId), sine_director(0.1), 1);
  CHECK(rep.precondition_ok);
  REQUIRE(rep.rows.size() >= 3);
  for (const auto &row : rep.rows)
    if (row.eps <= rep.eta) CHECK(row.margin_ok);
  // the energy trace converges to the planar limit
  double prev = std::numeric_limits<double>::infinity();
  for (const auto &row : rep.rows) {
    const double gap = std::abs(row.energy - rep.limit);
    CHECK(gap < prev);
    prev = gap;
  }
  // the trace is even in the thickness, so the observed rate is quadratic
  CHECK(rep.slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("precondition failure reports the worst node") {
  const ExperimentReport rep =
      recovery_experiment(W, affine_field(kId), constant_director({0, 0, 0.1}), 1);
  CHECK_FALSE(rep.precondition_ok);
  CHECK(rep.worst_planar_det == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(rep.rows.empty());
}

TEST_CASE("gamma gap report at the canonical point") {
  std::vector<Vec3> directors;
  for (double s : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0}) directors.push_back({0, 0, s});
  const GammaGapReport rep =
      gamma_gap_report(W, kId, directors, {1, 2, 5, 10, 100, 1000});
  CHECK(rep.monotone_ok);
  CHECK(rep.ordering_ok);
  REQUIRE(!rep.constrained.empty());
  CHECK(rep.constrained.front().second == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(std::abs(rep.constrained.back().second - rep.relaxed) <= 1e-3);
  // the family brackets the free minimizer, so the recovery side lands
  // between the relaxed value and the j=1 constrained one
  CHECK(rep.recovery_best >= rep.relaxed - 1e-9);
  CHECK(rep.recovery_best <= 3.0 + 1e-9);
}
