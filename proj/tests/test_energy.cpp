#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "membrane/energy.hpp"

using namespace membrane;

namespace {

const StoredEnergy W = make_barrier_energy(inverse_gap_barrier(), 2.0);
const Mat32 kCanonical{{1, 0, 0}, {0, 1, 0}};

std::mt19937_64 rng(4242);

Mat32 random_xi(double min_normal) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    Mat32 xi{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    if (xi.column_normal().norm() >= min_normal) return xi;
  }
}

// for the canonical frame the optimal fiber magnitude solves s^4 + s - 1 = 0;
// root by bisection, independent of the production solver
double canonical_root() {
  double lo = 0.5, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((mid * mid * mid * mid + mid - 1.0 < 0.0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("barrier stored energy closed values") {
  CHECK(W(Mat33::identity()).value() == 3.0);
  CHECK(W(Mat33::diagonal(2, 1, 1)).value() == doctest::Approx(6.25).epsilon(1e-15));
  Mat33 flipped = Mat33::diagonal(-1, 1, 1);
  CHECK_FALSE(W(flipped).is_finite());
  CHECK_FALSE(W(Mat33::diagonal(1, 1, 0)).is_finite());
  CHECK_THROWS(make_barrier_energy(inverse_gap_barrier(), 1.0));
}

TEST_CASE("canonical fiber relaxation against the polynomial root") {
  const double s = canonical_root();
  const double expected = std::pow(1.0 / s - 1.0, 2.0) + 2.0 + s * s;
  const double got = fiber_relax(W, kCanonical).value();
  CHECK(got == doctest::Approx(expected).epsilon(1e-9));
  CHECK(got == doctest::Approx(2.6695).epsilon(1e-3));
  CHECK(s == doctest::Approx(0.724492).epsilon(1e-5));
}

TEST_CASE("degenerate columns give +inf exactly") {
  const Vec3 e1{1, 0, 0};
  CHECK_FALSE(fiber_relax(W, Mat32{e1, e1}).is_finite());
  CHECK_FALSE(fiber_relax(W, Mat32{e1, e1 * -3.0}).is_finite());
  CHECK_FALSE(fiber_relax(W, Mat32{{0, 0, 0}, {0, 1, 0}}).is_finite());
}

TEST_CASE("infimum bound against probe fibers") {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const Mat32 xi = random_xi(0.2);
    const double w0 = fiber_relax(W, xi).value();
    for (int k = 0; k < 5; ++k) {
      const Vec3 probe{u(rng), u(rng), u(rng)};
      CHECK(w0 <= W(adjoin_column(xi, probe)).value_or_inf() + 1e-9);
    }
    // coercivity passes down to the planar density
    CHECK(w0 >= xi.frobenius_sq() - 1e-9);
  }
}

TEST_CASE("solver matches the brute-force oracle") {
  BruteForceGrid grid;  // coarse-ish to keep the unit test quick
  grid.radius = 3.0;
  grid.step = 0.02;
  for (int i = 0; i < 5; ++i) {
    const Mat32 xi = random_xi(0.3);
    const double solver = fiber_relax(W, xi).value();
    const double oracle = fiber_relax_bruteforce(W, xi, grid).value();
    CHECK(solver == doctest::Approx(oracle).epsilon(1e-3));
  }
}

TEST_CASE("constrained relaxation at the canonical point") {
  // constraint s >= 1 is active, the objective is increasing there
  CHECK(fiber_relax_constrained(W, kCanonical, 1).value() ==
        doctest::Approx(3.0).epsilon(1e-9));
  const double free_value = fiber_relax(W, kCanonical).value();
  CHECK(fiber_relax_constrained(W, kCanonical, 1000).value() ==
        doctest::Approx(free_value).epsilon(1e-6));
}

TEST_CASE("constrained relaxation is monotone in j") {
  for (int i = 0; i < 5; ++i) {
    const Mat32 xi = random_xi(0.3);
    const double relaxed = fiber_relax(W, xi).value();
    double prev = std::numeric_limits<double>::infinity();
    for (long j : {1L, 2L, 5L, 10L, 100L, 1000L}) {
      const double v = fiber_relax_constrained(W, xi, j).value();
      CHECK(v <= prev + 1e-7);
      CHECK(v >= relaxed - 1e-7);
      prev = v;
    }
    CHECK(prev == doctest::Approx(relaxed).epsilon(1e-3));
  }
  CHECK_THROWS(fiber_relax_constrained(W, Mat32{{1, 0, 0}, {2, 0, 0}}, 1));
}

TEST_CASE("constrained oracle agrees with the constrained solver") {
  BruteForceGrid grid;
  grid.radius = 3.0;
  grid.step = 0.02;
  for (int i = 0; i < 3; ++i) {
    const Mat32 xi = random_xi(0.4);
    for (long j : {1L, 10L}) {
      const double solver = fiber_relax_constrained(W, xi, j).value();
      const double oracle = fiber_relax_bruteforce_constrained(W, xi, j, grid).value();
      CHECK(solver == doctest::Approx(oracle).epsilon(2e-3));
    }
  }
}

TEST_CASE("normal field has unit determinant") {
  const Vec3 phi = normal_field(kCanonical);
  CHECK(phi.z == 1.0);
  const Vec3 phi2 = normal_field(Mat32{{2, 0, 0}, {0, 1, 0}});
  CHECK(phi2.z == doctest::Approx(0.5).epsilon(1e-15));
  for (int i = 0; i < 20; ++i) {
    const Mat32 xi = random_xi(0.1);
    const double d = adjoin_column(xi, normal_field(xi)).det();
    CHECK(d == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS(normal_field(Mat32{{1, 0, 0}, {2, 0, 0}}));
}

TEST_CASE("density property report") {
  DensitySampleSpec spec;
  spec.samples_per_delta = 25;
  spec.ball_samples = 16;
  spec.seed = 11;
  const DensityPropertyReport rep = check_density_properties(W, spec);
  CHECK(rep.growth_violations == 0);
  CHECK(rep.coercivity_margin >= 1.0 - 1e-9);
  REQUIRE(rep.oscillations.size() >= 2);
  // oscillation shrinks with the ball radius
  for (std::size_t i = 1; i < rep.oscillations.size(); ++i)
    CHECK(rep.oscillations[i].max_oscillation <=
          rep.oscillations[i - 1].max_oscillation + 1e-9);
  CHECK(rep.oscillations.back().max_oscillation <= 0.1);
}
