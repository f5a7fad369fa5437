#ifndef MEMBRANE_ENERGY_HPP
#define MEMBRANE_ENERGY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "membrane/density.hpp"
#include "membrane/tensor.hpp"

// 3D stored energies with a determinant barrier, the fiber relaxation
// W0(xi) = inf_zeta W(xi|zeta), its constrained variant over
// {det(xi|zeta) >= 1/j}, and the unit-determinant normal selection.

namespace membrane {

// h : R -> [0,+inf], +inf exactly on (-inf,0], finite and continuous on
// (0,inf), blowing up at 0+ and bounded on every [delta,inf).
struct BarrierProfile {
  std::function<double(double)> finite_part;   // evaluated only for d > 0
  std::function<double(double)> tail_bound;    // delta -> r_delta

  ExtendedEnergy operator()(double d) const {
    if (d <= 0.0) return ExtendedEnergy::infinity();
    return ExtendedEnergy(finite_part(d));
  }
};

// h(d) = (1/d - 1)^2; the default model of the whole toolkit.
BarrierProfile inverse_gap_barrier();

struct StoredEnergy {
  std::function<ExtendedEnergy(const Mat33 &)> evaluate;
  double exponent = 2.0;     // p
  double coercivity = 1.0;   // C in W(F) >= C|F|^p
  std::function<double(double)> growth_constant;  // delta -> c_delta

  // present when the density has the form h(det F) + |F|^p
  struct BarrierForm {
    BarrierProfile h;
    double p;
  };
  std::optional<BarrierForm> barrier;

  ExtendedEnergy operator()(const Mat33 &F) const { return evaluate(F); }
};

// W(F) = h(det F) + |F|^p.  Requires p > 1.
StoredEnergy make_barrier_energy(const BarrierProfile &h, double p);

struct FiberSolverConfig {
  double coarse_radius = 16.0;  // search radius for the fiber magnitude / cube
  double coarse_step = 0.05;    // coarse grid spacing (1D reduction)
  int refine_stages = 90;       // golden-section iterations
  double contraction = 0.5;     // pattern-search contraction (generic path)
  double tolerance = 1e-9;      // absolute, on energy
};

inline constexpr double kDegenerateNormal = 1e-14;

// W0(xi) = inf_zeta W(xi|zeta).  Exactly +inf iff xi1 ^ xi2 = 0.
ExtendedEnergy fiber_relax(const StoredEnergy &W, const Mat32 &xi,
                           const FiberSolverConfig &cfg = {});

// inf { W(xi|zeta) : det(xi|zeta) >= 1/j }.  Throws on degenerate xi.
ExtendedEnergy fiber_relax_constrained(const StoredEnergy &W, const Mat32 &xi,
                                       long j, const FiberSolverConfig &cfg = {});

// Phi = (xi1 ^ xi2)/|xi1 ^ xi2|^2, the continuous selection with
// det(xi|Phi) = 1.  Throws on degenerate xi.
Vec3 normal_field(const Mat32 &xi);

// Brute-force grid oracle over zeta in [-radius,radius]^3, plus one local
// refinement pass around the coarse argmin.  Independent of the 1D reduction
// used by fiber_relax; restricted to barrier models with p = 2 (the SIMD
// kernels assume that form).
struct BruteForceGrid {
  double radius = 5.0;
  double step = 0.01;
  int refine_factor = 10;
};
ExtendedEnergy fiber_relax_bruteforce(const StoredEnergy &W, const Mat32 &xi,
                                      const BruteForceGrid &grid = {});

// Constrained variant of the oracle: candidates with det(xi|zeta) < 1/j are
// infeasible.
ExtendedEnergy fiber_relax_bruteforce_constrained(const StoredEnergy &W,
                                                  const Mat32 &xi, long j,
                                                  const BruteForceGrid &grid = {});

// W0 as a planar density (base of every envelope computation).
PlanarDensity fiber_density(const StoredEnergy &W, const FiberSolverConfig &cfg = {});

struct DensitySampleSpec {
  std::vector<double> deltas{0.5};
  int samples_per_delta = 50;
  double amplitude = 2.0;       // sampling box half-width for xi entries
  int continuity_centers = 5;
  std::vector<double> ball_radii{1e-1, 1e-2, 1e-3};
  int ball_samples = 32;
  unsigned long long seed = 0;
};

struct DensityPropertyReport {
  double coercivity_margin = 0.0;  // min W0(xi)/|xi|^p over the sample
  int growth_violations = 0;
  struct Oscillation {
    double radius;
    double max_oscillation;
  };
  std::vector<Oscillation> oscillations;  // max over centers, per radius
};

// Spot-checks of continuity, coercivity and conditional growth of W0.
DensityPropertyReport check_density_properties(const StoredEnergy &W,
                                               const DensitySampleSpec &spec,
                                               const FiberSolverConfig &cfg = {});

}  // namespace membrane

#endif  // MEMBRANE_ENERGY_HPP
