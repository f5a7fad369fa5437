#include "membrane/envelopes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <unordered_map>

namespace membrane {

namespace {

using Evaluator = std::function<ExtendedEnergy(const Mat32 &)>;

ExtendedEnergy split_eval(const Evaluator &inner, const Mat32 &xi, const Vec2 &a,
                          const Vec3 &b, double t) {
  const Mat32 per = outer_32(b, a);
  ExtendedEnergy acc(0.0);
  if (t < 1.0) acc = acc + inner(xi - per * t).scaled(1.0 - t);
  if (t > 0.0) acc = acc + inner(xi + per * (1.0 - t)).scaled(t);
  return acc;
}

// search budget for one lamination step; deeper recursion tiers shrink it
struct GridSpec {
  int angles, dirs, radii, ts, stages;
  double contraction;
};

GridSpec tiered(const LaminationSearchConfig &c, int tier) {
  const double f = std::pow(c.level_decay, tier);
  auto shrink = [f](int v, int lo) {
    return std::max(lo, static_cast<int>(std::lround(v * f)));
  };
  return {shrink(c.angle_count, 2), shrink(c.direction_count, 3),
          shrink(c.radius_count, 2),  shrink(c.t_count, 3),
          shrink(c.refine_stages, 6), c.contraction};
}

// coordinate axes first, then a Fibonacci spiral on the upper half-sphere
std::vector<Vec3> direction_grid(int count) {
  std::vector<Vec3> dirs = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const int extra = count - static_cast<int>(dirs.size());
  const double golden = 2.399963229728653;
  for (int i = 0; i < extra; ++i) {
    const double z = (i + 0.5) / extra;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    dirs.push_back({r * std::cos(phi), r * std::sin(phi), z});
  }
  return dirs;
}

std::vector<double> radius_grid(double scale, int count) {
  std::vector<double> r;
  for (int k = 0; k < count; ++k)
    r.push_back(scale * std::ldexp(1.0, k - (count - 1)));
  r.push_back(1.0);  // keep unit-magnitude rank-one directions exactly reachable
  return r;
}

struct StepOut {
  ExtendedEnergy value;
  LaminateParams params;
};

StepOut search_step(const Evaluator &inner, ExtendedEnergy value_at_xi,
                    const Mat32 &xi, const GridSpec &g) {
  StepOut best{value_at_xi, LaminateParams{}};  // degenerate split t = 0
  double best_alpha = 0.0;

  const double scale = 4.0 * (1.0 + xi.frobenius());
  const auto dirs = direction_grid(g.dirs);
  const auto radii = radius_grid(scale, g.radii);
  for (int ia = 0; ia < g.angles; ++ia) {
    const double alpha = M_PI * ia / g.angles;
    const Vec2 a{std::cos(alpha), std::sin(alpha)};
    for (const Vec3 &d : dirs) {
      for (double r : radii) {
        const Vec3 b = d * r;
        for (int it = 0; it < g.ts; ++it) {
          const double t = static_cast<double>(it + 1) / (g.ts + 1);
          const ExtendedEnergy v = split_eval(inner, xi, a, b, t);
          if (v < best.value) {
            best.value = v;
            best.params = {a, b, t};
            best_alpha = alpha;
          }
        }
      }
    }
  }

  // local pattern search over (alpha, b, t)
  double p[5] = {best_alpha, best.params.b.x, best.params.b.y, best.params.b.z,
                 best.params.t};
  double step[5];
  step[0] = M_PI / (4.0 * g.angles);
  step[1] = step[2] = step[3] = 0.1 * std::max(1.0, best.params.b.norm());
  step[4] = 0.05;
  auto eval_p = [&](const double q[5]) {
    const Vec2 a{std::cos(q[0]), std::sin(q[0])};
    return split_eval(inner, xi, a, {q[1], q[2], q[3]},
                      std::clamp(q[4], 0.0, 1.0));
  };
  for (int stage = 0; stage < g.stages; ++stage) {
    bool improved = false;
    for (int k = 0; k < 5; ++k) {
      for (double sgn : {1.0, -1.0}) {
        double q[5] = {p[0], p[1], p[2], p[3], p[4]};
        q[k] += sgn * step[k];
        const ExtendedEnergy v = eval_p(q);
        if (v < best.value) {
          best.value = v;
          std::copy(q, q + 5, p);
          improved = true;
        }
      }
    }
    if (!improved)
      for (double &s : step) s *= g.contraction;
  }
  if (best.params.t > 0.0) {
    best.params.a = {std::cos(p[0]), std::sin(p[0])};
    best.params.b = {p[1], p[2], p[3]};
    best.params.t = std::clamp(p[4], 0.0, 1.0);
  }
  return best;
}

struct CacheKey {
  int level;
  std::array<long long, 6> q;
  bool operator==(const CacheKey &o) const { return level == o.level && q == o.q; }
};

struct CacheKeyHash {
  std::size_t operator()(const CacheKey &k) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(k.level));
    for (long long v : k.q) mix(static_cast<std::uint64_t>(v));
    return static_cast<std::size_t>(h);
  }
};

CacheKey make_key(int level, const Mat32 &xi) {
  auto q = [](double x) { return std::llround(x * 1e9); };
  return {level,
          {q(xi.col1.x), q(xi.col1.y), q(xi.col1.z), q(xi.col2.x), q(xi.col2.y),
           q(xi.col2.z)}};
}

}  // namespace

ExtendedEnergy split_value(const PlanarDensity &f, const Mat32 &xi,
                           const LaminateParams &p) {
  return split_eval([&f](const Mat32 &m) { return f(m); }, xi, p.a, p.b, p.t);
}

std::pair<ExtendedEnergy, LaminateParams> laminate_step(
    const PlanarDensity &f, const Mat32 &xi, const LaminationSearchConfig &cfg) {
  const StepOut out = search_step([&f](const Mat32 &m) { return f(m); }, f(xi), xi,
                                  tiered(cfg, 0));
  return {out.value, out.params};
}

struct LaminateEnvelope::Impl {
  PlanarDensity base;
  LaminationSearchConfig cfg;
  std::unordered_map<CacheKey, double, CacheKeyHash> cache;

  ExtendedEnergy from_cache(double v) const {
    return std::isfinite(v) ? ExtendedEnergy(v) : ExtendedEnergy::infinity();
  }

  ExtendedEnergy value(int level, const Mat32 &xi, int tier) {
    if (level <= 0) return base(xi);
    const CacheKey key = make_key(level, xi);
    auto it = cache.find(key);
    // inner (tier > 0) evaluations reuse cached values verbatim; top-level
    // calls recompute and keep the better of the two
    if (it != cache.end() && tier > 0) return from_cache(it->second);
    ExtendedEnergy v = step(level, xi, tier).value;
    if (it != cache.end() && it->second < v.value_or_inf()) v = from_cache(it->second);
    if (cache.size() >= cfg.cache_bound) throw CacheLimitError();
    cache[key] = v.value_or_inf();
    return v;
  }

  StepOut step(int level, const Mat32 &xi, int tier) {
    // grids shrink both with recursion depth and with the level itself, so a
    // depth-3 evaluation stays a bounded product of small searches
    const GridSpec spec = tiered(cfg, tier + (level - 1));
    Evaluator inner = [this, level, tier](const Mat32 &m) {
      return value(level - 1, m, tier + 1);
    };
    // degenerate candidate: prefer the cached lower-level value (this is what
    // makes the reported sequence nonincreasing)
    ExtendedEnergy at_xi;
    const CacheKey down = make_key(level - 1, xi);
    auto it = cache.find(down);
    at_xi = (level > 1 && it != cache.end()) ? from_cache(it->second)
                                             : value(level - 1, xi, tier + 1);
    return search_step(inner, at_xi, xi, spec);
  }
};

LaminateEnvelope::LaminateEnvelope(PlanarDensity base, LaminationSearchConfig cfg)
    : impl_(new Impl{std::move(base), cfg, {}}) {}
LaminateEnvelope::~LaminateEnvelope() = default;
LaminateEnvelope::LaminateEnvelope(LaminateEnvelope &&) noexcept = default;
LaminateEnvelope &LaminateEnvelope::operator=(LaminateEnvelope &&) noexcept = default;

ExtendedEnergy LaminateEnvelope::value(int level, const Mat32 &xi) {
  if (level < 0) throw std::invalid_argument("LaminateEnvelope: level >= 0");
  return impl_->value(level, xi, 0);
}

std::pair<ExtendedEnergy, LaminateParams> LaminateEnvelope::step_at(int level,
                                                                    const Mat32 &xi) {
  if (level < 1) throw std::invalid_argument("LaminateEnvelope: level >= 1");
  const StepOut out = impl_->step(level, xi, 0);
  const CacheKey key = make_key(level, xi);
  auto it = impl_->cache.find(key);
  ExtendedEnergy v = out.value;
  if (it != impl_->cache.end() && it->second < v.value_or_inf())
    v = impl_->from_cache(it->second);
  impl_->cache[key] = v.value_or_inf();
  return {v, out.params};
}

std::size_t LaminateEnvelope::cache_size() const { return impl_->cache.size(); }

const PlanarDensity &LaminateEnvelope::base() const { return impl_->base; }

PlanarDensity LaminateEnvelope::as_density(std::shared_ptr<LaminateEnvelope> env,
                                           int level) {
  PlanarDensity f;
  f.tag = PlanarDensity::Tag::Laminated;
  f.level = level;
  f.evaluate = [env, level](const Mat32 &xi) { return env->value(level, xi); };
  return f;
}

std::vector<ExtendedEnergy> laminate_envelope(const PlanarDensity &f, const Mat32 &xi,
                                              int depth,
                                              const LaminationSearchConfig &cfg) {
  if (depth < 1) throw std::invalid_argument("laminate_envelope: depth >= 1");
  LaminateEnvelope env(f, cfg);
  std::vector<ExtendedEnergy> out;
  for (int i = 1; i <= depth; ++i) out.push_back(env.value(i, xi));
  return out;
}

bool rank_one_midpoint_check(const PlanarDensity &f, const Mat32 &xi,
                             const LaminateParams &params, double tol) {
  const double combo = split_value(f, xi, params).value_or_inf();
  return f(xi).value_or_inf() <= combo + tol;
}

// ---------------------------------------------------------------------------
// cell-problem estimate

namespace {

struct Mesh {
  int m;
  double h;
  std::vector<Vec2> pos;
  std::vector<char> is_free;
  struct Tri {
    int v0, v1, v2;
    double area;
    double inv[4];  // inverse of the 2x2 edge matrix, row-major
  };
  std::vector<Tri> tris;
  std::vector<std::vector<int>> incident;
};

Mesh build_mesh(const CellMeshSpec &spec) {
  Mesh mesh;
  mesh.m = spec.m;
  mesh.h = 1.0 / spec.m;
  const int m = spec.m;
  const int corners = (m + 1) * (m + 1);
  auto corner = [m](int i, int j) { return j * (m + 1) + i; };
  auto center = [m, corners](int i, int j) { return corners + j * m + i; };

  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) {
      mesh.pos.push_back({i * mesh.h, j * mesh.h});
      mesh.is_free.push_back(i > 0 && i < m && j > 0 && j < m);
    }
  if (spec.crossed)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        mesh.pos.push_back({(i + 0.5) * mesh.h, (j + 0.5) * mesh.h});
        mesh.is_free.push_back(true);
      }

  auto add_tri = [&mesh](int a, int b, int c) {
    const Vec2 e1 = mesh.pos[b] - mesh.pos[a];
    const Vec2 e2 = mesh.pos[c] - mesh.pos[a];
    const double det = e1.x * e2.y - e2.x * e1.y;
    Mesh::Tri t;
    t.v0 = a;
    t.v1 = b;
    t.v2 = c;
    t.area = 0.5 * std::abs(det);
    t.inv[0] = e2.y / det;
    t.inv[1] = -e2.x / det;
    t.inv[2] = -e1.y / det;
    t.inv[3] = e1.x / det;
    mesh.tris.push_back(t);
  };
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const int c00 = corner(i, j), c10 = corner(i + 1, j);
      const int c01 = corner(i, j + 1), c11 = corner(i + 1, j + 1);
      if (spec.crossed) {
        const int ct = center(i, j);
        add_tri(c00, c10, ct);
        add_tri(c10, c11, ct);
        add_tri(c11, c01, ct);
        add_tri(c01, c00, ct);
      } else {
        add_tri(c00, c10, c11);
        add_tri(c00, c11, c01);
      }
    }
  mesh.incident.resize(mesh.pos.size());
  for (int k = 0; k < static_cast<int>(mesh.tris.size()); ++k) {
    mesh.incident[mesh.tris[k].v0].push_back(k);
    mesh.incident[mesh.tris[k].v1].push_back(k);
    mesh.incident[mesh.tris[k].v2].push_back(k);
  }
  return mesh;
}

Mat32 tri_gradient(const Mesh::Tri &t, const std::vector<Vec3> &val) {
  const Vec3 d1 = val[t.v1] - val[t.v0];
  const Vec3 d2 = val[t.v2] - val[t.v0];
  return {d1 * t.inv[0] + d2 * t.inv[2], d1 * t.inv[1] + d2 * t.inv[3]};
}

double tri_energy(const PlanarDensity &f, const Mat32 &xi, const Mesh::Tri &t,
                  const std::vector<Vec3> &val) {
  return t.area * f(xi + tri_gradient(t, val)).value_or_inf();
}

double total_energy(const PlanarDensity &f, const Mat32 &xi, const Mesh &mesh,
                    const std::vector<Vec3> &val) {
  double e = 0.0;
  for (const auto &t : mesh.tris) e += tri_energy(f, xi, t, val);
  return e;
}

double node_energy(const PlanarDensity &f, const Mat32 &xi, const Mesh &mesh,
                   const std::vector<Vec3> &val, int node) {
  double e = 0.0;
  for (int k : mesh.incident[node]) e += tri_energy(f, xi, mesh.tris[k], val);
  return e;
}

double descend(const PlanarDensity &f, const Mat32 &xi, const Mesh &mesh,
               const CellMeshSpec &spec, std::vector<Vec3> &val) {
  double step = spec.initial_step;
  for (int sweep = 0; sweep < spec.sweeps; ++sweep) {
    double drop = 0.0;
    for (int node = 0; node < static_cast<int>(mesh.pos.size()); ++node) {
      if (!mesh.is_free[node]) continue;
      double *comp[3] = {&val[node].x, &val[node].y, &val[node].z};
      for (double *c : comp) {
        double e0 = node_energy(f, xi, mesh, val, node);
        for (double sgn : {1.0, -1.0}) {
          *c += sgn * step;
          const double e1 = node_energy(f, xi, mesh, val, node);
          if (e1 < e0) {
            if (std::isfinite(e0)) drop += e0 - e1;
            e0 = e1;
            break;
          }
          *c -= sgn * step;
        }
      }
    }
    if (drop < spec.tolerance) {
      step *= spec.contraction;
      if (step < 1e-7) break;
    }
  }
  return total_energy(f, xi, mesh, val);
}

// zig-zag profile of one lamination strip pattern (zero at every multiple of
// 1/n, slopes -t and 1-t), with a cutoff vanishing on the boundary of Y
std::vector<Vec3> laminate_start(const Mesh &mesh, const LaminateSeed &seed) {
  const int n = seed.geom.strips;
  const double t = seed.geom.t;
  const double split = (1.0 - t) / n;
  std::vector<Vec3> val(mesh.pos.size());
  for (std::size_t i = 0; i < mesh.pos.size(); ++i) {
    const Vec2 &x = mesh.pos[i];
    const double u = seed.geom.a.dot(x);
    const double w = u - std::floor(u * n) / n;
    const double prof = (w <= split) ? -t * w : (1.0 - t) * (w - 1.0 / n);
    const double cut = std::clamp(
        n * std::min(std::min(x.x, 1.0 - x.x), std::min(x.y, 1.0 - x.y)), 0.0, 1.0);
    val[i] = seed.b_ell * (prof * cut);
  }
  return val;
}

}  // namespace

CellEstimate cell_quasiconvex_estimate(const PlanarDensity &f, const Mat32 &xi,
                                       const CellMeshSpec &spec,
                                       const std::optional<LaminateSeed> &seed) {
  if (spec.m < 1) throw std::invalid_argument("cell_quasiconvex_estimate: m >= 1");
  const Mesh mesh = build_mesh(spec);

  CellEstimate out;
  double best = std::numeric_limits<double>::infinity();

  {
    std::vector<Vec3> val(mesh.pos.size());
    out.zero_start = descend(f, xi, mesh, spec, val);
    best = std::min(best, out.zero_start);
    ++out.starts_run;
  }
  if (seed) {
    std::vector<Vec3> val = laminate_start(mesh, *seed);
    out.seed_start = descend(f, xi, mesh, spec, val);
    best = std::min(best, *out.seed_start);
    ++out.starts_run;
  }
  for (int s = 0; s < spec.multi_starts; ++s) {
    std::mt19937_64 rng(spec.seed + 0x9e3779b97f4a7c15ull * (s + 1));
    std::uniform_real_distribution<double> amp(-spec.random_amplitude,
                                               spec.random_amplitude);
    std::vector<Vec3> val(mesh.pos.size());
    for (std::size_t i = 0; i < val.size(); ++i)
      if (mesh.is_free[i]) val[i] = {amp(rng), amp(rng), amp(rng)};
    best = std::min(best, descend(f, xi, mesh, spec, val));
    ++out.starts_run;
  }

  out.value = std::isfinite(best) ? ExtendedEnergy(std::max(0.0, best))
                                  : ExtendedEnergy::infinity();
  return out;
}

}  // namespace membrane
