#ifndef MEMBRANE_ENVELOPES_HPP
#define MEMBRANE_ENVELOPES_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "membrane/density.hpp"
#include "membrane/microstructure.hpp"
#include "membrane/tensor.hpp"

// Sequential lamination envelopes R_i f by grid search plus local refinement
// over one-step splittings, and a cell-problem upper estimate of the
// quasiconvex envelope by piecewise affine minimization on a crossed
// triangulation of the unit square.

namespace membrane {

struct LaminateParams {
  Vec2 a{1.0, 0.0};  // unit splitting direction
  Vec3 b{};          // rank-one partner (zero means the degenerate split)
  double t = 0.0;    // weight in [0,1]
};

struct LaminationSearchConfig {
  // top-level grids; deeper recursion levels shrink them geometrically
  int angle_count = 8;       // a = (cos alpha, sin alpha), alpha in [0, pi)
  int direction_count = 10;  // unit directions for b (axes always included)
  int radius_count = 6;      // |b| grid; 1.0 always included
  int t_count = 7;           // interior t grid (k/(t_count+1))
  int refine_stages = 40;    // pattern-search stages after the grid scan
  double contraction = 0.6;
  double level_decay = 0.4;  // grid shrink factor per recursion tier
  std::size_t cache_bound = std::size_t(1) << 22;
};

struct CacheLimitError : std::runtime_error {
  CacheLimitError() : std::runtime_error("lamination memo cache bound exceeded") {}
};

// (1-t) f(xi - t a@b) + t f(xi + (1-t) a@b) with zero-weight branches skipped.
ExtendedEnergy split_value(const PlanarDensity &f, const Mat32 &xi,
                           const LaminateParams &p);

// One lamination step of f at xi: minimum of split_value over the searched
// (a, b, t), refined locally.  The degenerate candidate t=0 (value f(xi)) is
// always included, so the result is <= f(xi).
std::pair<ExtendedEnergy, LaminateParams> laminate_step(
    const PlanarDensity &f, const Mat32 &xi, const LaminationSearchConfig &cfg = {});

// Memoized recursive evaluator of the lamination sequence.  Values are
// upper approximations; the cache keeps the best value seen per
// (level, quantized xi), which also makes the reported sequence nonincreasing:
// the degenerate candidate of level i+1 reuses the cached level-i value.
class LaminateEnvelope {
 public:
  explicit LaminateEnvelope(PlanarDensity base, LaminationSearchConfig cfg = {});
  ~LaminateEnvelope();
  LaminateEnvelope(LaminateEnvelope &&) noexcept;
  LaminateEnvelope &operator=(LaminateEnvelope &&) noexcept;

  // R_level at xi with the full top-tier search budget.  level 0 is the base.
  ExtendedEnergy value(int level, const Mat32 &xi);
  // same, also reporting the best split found at the top level
  std::pair<ExtendedEnergy, LaminateParams> step_at(int level, const Mat32 &xi);

  std::size_t cache_size() const;
  const PlanarDensity &base() const;

  // R_level wrapped as a density (tag Laminated); keeps the envelope alive
  static PlanarDensity as_density(std::shared_ptr<LaminateEnvelope> env, int level);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// [R_1 f(xi), ..., R_depth f(xi)], nonincreasing by construction.
std::vector<ExtendedEnergy> laminate_envelope(const PlanarDensity &f, const Mat32 &xi,
                                              int depth,
                                              const LaminationSearchConfig &cfg = {});

// True iff f(xi) <= (1-t) f(xi - t a@b) + t f(xi + (1-t) a@b) + tol, i.e. the
// split at params offers no further one-step decrease.
bool rank_one_midpoint_check(const PlanarDensity &f, const Mat32 &xi,
                             const LaminateParams &params, double tol = 1e-6);

struct CellMeshSpec {
  int m = 16;             // subdivisions per side of Y = (0,1)^2
  bool crossed = true;    // 4 triangles per cell through the center node
  int multi_starts = 2;   // random starts besides zero and the optional seed
  int sweeps = 30;        // coordinate-descent sweep cap
  double initial_step = 0.5;
  double contraction = 0.5;
  double tolerance = 1e-7;         // per-sweep improvement threshold
  double random_amplitude = 0.2;   // nodal amplitude of random starts
  unsigned long long seed = 0;
};

// laminate profile used as a warm start: phi = sigma-profile(a.x) * cutoff * b
struct LaminateSeed {
  LaminateGeometry geom;
  Vec3 b_ell;
};

struct CellEstimate {
  ExtendedEnergy value;                 // best over all starts
  double zero_start = 0.0;             // converged energy of the phi = 0 start
  std::optional<double> seed_start;    // converged energy of the laminate start
  int starts_run = 0;
};

// Upper estimate of the cell problem inf over piecewise affine phi vanishing
// on the boundary of int_Y f(xi + grad phi), by multi-start coordinate descent
// on nodal values.  The zero start makes the result <= f(xi) up to roundoff.
CellEstimate cell_quasiconvex_estimate(const PlanarDensity &f, const Mat32 &xi,
                                       const CellMeshSpec &mesh,
                                       const std::optional<LaminateSeed> &seed = {});

}  // namespace membrane

#endif  // MEMBRANE_ENVELOPES_HPP
