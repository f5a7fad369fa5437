#ifndef MEMBRANE_THIN_FILM_HPP
#define MEMBRANE_THIN_FILM_HPP

#include <functional>
#include <optional>
#include <vector>

#include "membrane/density.hpp"
#include "membrane/energy.hpp"
#include "membrane/tensor.hpp"

// Thin-film energies on the rescaled slab Sigma x (-1/2,1/2), transverse
// averaging, recovery-sequence experiments with the determinant margin scan,
// and the planar membrane energy.

namespace membrane {

// closed-form sampled field on Sigma = (0,1)^2 with its gradient
struct PlanarField {
  std::function<Vec3(const Vec2 &)> value;
  std::function<Mat32(const Vec2 &)> gradient;
};

PlanarField affine_field(const Mat32 &grad, const Vec3 &offset = {});

// u(x, x3) = v(x) + x3 phi(x) [+ x3^2 w(x), used to exercise the averaging]
struct FilmAnsatz {
  PlanarField v;
  PlanarField director;
  std::optional<PlanarField> quad_term;

  Vec3 at(const Vec2 &x, double x3) const;
  Mat33 gradient_at(const Vec2 &x, double x3) const;
};

struct FilmQuad {
  int planar_order = 4;      // Gauss points per planar direction
  int transverse_order = 2;  // Gauss points across the thickness
};

struct FilmScan {
  ExtendedEnergy energy;
  double min_det = 0.0;                 // over all slab quadrature nodes
  std::optional<std::array<double, 3>> bad_node;  // first node with det <= 0
};

// (1/eps) integral over Sigma_eps of W(grad u), evaluated on the rescaled
// slab: the integrand at planar node x and transverse node s in (-1/2,1/2) is
// W(grad u(x, eps*s)).  +infinity as soon as a node has det <= 0.
FilmScan film_energy(const StoredEnergy &W, const FilmAnsatz &u, double eps,
                     const FilmQuad &quad = {});

// transverse average (1/eps) int_{-eps/2}^{eps/2} u(x, x3) dx3 at the planar
// quadrature nodes
std::vector<std::pair<Vec2, Vec3>> midplane_average(const FilmAnsatz &u, double eps,
                                                    const FilmQuad &quad = {});

// planar quadrature of density(grad v) over Sigma
ExtendedEnergy membrane_energy(const PlanarField &v, const PlanarDensity &density,
                               const FilmQuad &quad = {});

struct FilmConfig {
  std::vector<double> eps_list{1e-1, 1e-2, 1e-3, 1e-4};
  FilmQuad quad;
  double eta_search_max = 0.5;  // upper end of the thickness-threshold scan
  int eta_bisections = 48;
};

struct ExperimentReport {
  bool precondition_ok = false;  // det(grad v | phi) >= 1/(2j) at planar nodes
  double worst_planar_det = 0.0;
  std::array<double, 2> worst_planar_node{};
  double eta = 0.0;  // largest tested thickness with slab margin >= 1/(4j)
  struct Row {
    double eps;
    double energy;
    double min_det;
    bool margin_ok;  // min_det >= 1/(4j)
  };
  std::vector<Row> rows;
  double limit = 0.0;  // int_Sigma W(grad v | phi)
  double slope = 0.0;  // log-log fit of |E_eps - limit| against eps
};

// Recovery-sequence experiment for u = v + x3 phi at the given constraint
// index j: margin precheck, thickness threshold, energy trace and its
// convergence rate toward the planar energy.
ExperimentReport recovery_experiment(const StoredEnergy &W, const PlanarField &v,
                                     const PlanarField &phi, long j,
                                     const FilmConfig &cfg = {});

struct GammaGapReport {
  double recovery_best = 0.0;            // min over directors of lim_eps E_eps
  std::vector<std::pair<long, double>> constrained;  // (j, |Sigma| * W0^j)
  double relaxed = 0.0;                  // |Sigma| * W0(xi)
  bool ordering_ok = false;              // recovery_best >= relaxed - tol
  bool monotone_ok = false;              // constrained nonincreasing in j
};

// Compares the recovery side (constant directors over an affine film) against
// the constrained and unconstrained fiber relaxations at xi = grad v.
GammaGapReport gamma_gap_report(const StoredEnergy &W, const Mat32 &xi,
                                const std::vector<Vec3> &directors,
                                const std::vector<long> &j_list, double tol = 1e-6,
                                const FiberSolverConfig &solver = {});

}  // namespace membrane

#endif  // MEMBRANE_THIN_FILM_HPP
