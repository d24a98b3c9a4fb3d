#pragma once

// Wavefunctions on the half line: bound-state tables built from the two-term
// Gauss combination about the far singular point, L2 normalization with an
// analytic exponential tail, and the threshold (zero-energy) solution built
// from the two power-prefactored series branches with the coefficient ratio
// fixed by the hard-wall condition psi(0) = 0.
//
// Numerical note on the threshold construction: the regular branch's series
// is well conditioned over its whole convergence range, but the second
// branch's series cancels catastrophically near z = 0 once the well is deep
// (the function value is exponentially smaller than the largest term). The
// second branch is therefore summed only in the far field, where its terms
// stay O(10), and carried inward by adaptive integration; this is stable
// because at zero energy the whole half line is classically allowed, so
// neither solution grows exponentially against the other.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sqrtwell/errors.hpp"
#include "sqrtwell/heun.hpp"
#include "sqrtwell/model.hpp"
#include "sqrtwell/ode.hpp"
#include "sqrtwell/spectrum_types.hpp"
#include "sqrtwell/util.hpp"

namespace sqrtwell {

struct Sample {
  double x = 0.0;
  double z = 0.0;
  double psi = 0.0;
};

// Tabulated wavefunction. An empty `level` marks the zero-energy threshold
// solution, which is not square-integrable; its `norm` stays 0. For bound
// levels `norm` is the integral of psi^2 over the half line as sampled
// *before* rescaling, and the stored samples integrate to one.
struct WavefunctionTable {
  PhysParams params{};
  std::optional<EnergyLevel> level{};
  std::vector<Sample> samples{};
  double norm = 0.0;
  std::vector<double> nodes{};  // sign-change positions, x > 0, ascending
};

namespace detail {

inline void require_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw DomainError("grid needs at least two points");
  double prev = 0.0;
  for (double x : grid) {
    if (!std::isfinite(x) || !(x > prev))
      throw DomainError("grid must be finite, positive and strictly increasing");
    prev = x;
  }
}

// d/dx of psi' = ... at fixed energy: y = (psi, psi').
inline auto schrodinger_rhs(const PhysParams& p, double E) {
  const double k = 2.0 * p.m / (p.hbar * p.hbar);
  return [p, k, E](double x, const std::array<double, 2>& y,
                   std::array<double, 2>& dy) {
    dy[0] = y[1];
    dy[1] = k * (potential(p, x) - E) * y[0];
  };
}

// Scan mesh for node detection: quadratically graded through the
// inverse-square-root region near the origin, then uniform at sigma/40 —
// far below the shortest local half wavelength for any well this library
// resolves in double precision.
inline std::vector<double> node_scan_mesh(const PhysParams& p, double x_max) {
  const double knee = std::min(p.sigma, 0.5 * x_max);
  const int n_uniform =
      std::max(1, static_cast<int>(std::ceil((x_max - knee) * 40.0 / p.sigma)));
  return graded_mesh(x_max, knee, 400, n_uniform);
}

struct NodeScan {
  std::vector<double> nodes;
  double max_abs = 0.0;
  double first_sign = 0.0;  // sign of the first significant sample
};

// Counts (and optionally refines) sign changes of the sampled values.
// Samples below 1e-12 of the peak are treated as touches, not crossings.
template <typename PsiAt>
NodeScan scan_for_nodes(const std::vector<double>& mesh, const std::vector<double>& vals,
                        double sigma, bool refine, PsiAt&& psi_at) {
  NodeScan r;
  for (double v : vals) r.max_abs = std::max(r.max_abs, std::fabs(v));
  if (!(r.max_abs > 0.0))
    throw NumericalError("wavefunction vanished identically on the scan mesh");
  const double floor_ = 1e-12 * r.max_abs;
  std::size_t i = 0;
  while (i < vals.size() && std::fabs(vals[i]) <= floor_) ++i;
  r.first_sign = (vals[i] > 0.0) ? 1.0 : -1.0;
  double px = mesh[i], pv = vals[i];
  for (++i; i < vals.size(); ++i) {
    if (std::fabs(vals[i]) <= floor_) continue;
    if ((vals[i] > 0.0) != (pv > 0.0)) {
      if (refine)
        r.nodes.push_back(
            refine_root(psi_at, px, pv, mesh[i], vals[i], 1e-8 * sigma, 1e-12));
      else
        r.nodes.push_back(0.5 * (px + mesh[i]));
    }
    px = mesh[i];
    pv = vals[i];
  }
  return r;
}

// Raw (unnormalized) bound-state amplitude at one x for the eigenparameter
// set h mapped with both signs positive. Real for E < 0. The coordinate
// complement keeps the decaying prefactor accurate far beyond the point
// where z itself rounds to 1.
inline double bound_amplitude(const PhysParams& p, const HeunParams& h, double x) {
  const double c = coord_map_complement(p, x);
  const double z = 1.0 - c;
  const double a1 = h.alpha1.real(), a2 = h.alpha2.real();
  return std::pow(1.0 + z, a1) * std::pow(c, a2) * u2_gauss_combo(h, z).real();
}

inline double bound_scan_extent(const PhysParams& p, double rate, double x_min_need) {
  return std::min(std::max({10.0 * p.sigma, 18.0 / rate, x_min_need}),
                  1500.0 * p.sigma);
}

// Node count of the (+,+) bound-type solution at energy E < 0; used both for
// table construction and for validating spectrum roots against the node
// theorem.
inline NodeScan scan_bound_nodes(const PhysParams& p, double E, double x_min_need,
                                 bool refine) {
  const HeunParams h = map_to_heun(p, E, +1, +1);
  const double rate = h.alpha2.real() / p.sigma;
  const std::vector<double> mesh = node_scan_mesh(p, bound_scan_extent(p, rate, x_min_need));
  std::vector<double> vals(mesh.size());
  parallel_for(static_cast<int>(mesh.size()),
               [&](int i) { vals[static_cast<std::size_t>(i)] =
                                bound_amplitude(p, h, mesh[static_cast<std::size_t>(i)]); });
  return scan_for_nodes(mesh, vals, p.sigma, refine,
                        [&](double x) { return bound_amplitude(p, h, x); });
}

inline int count_bound_nodes(const PhysParams& p, double E) {
  return static_cast<int>(scan_bound_nodes(p, E, 0.0, false).nodes.size());
}

// ---------------------------------------------------------------------------
// Threshold (E = 0) machinery.
// ---------------------------------------------------------------------------

struct ZeroEnergyContext {
  PhysParams p{};
  HeunParams hp{};  // signs (+,+): regular-branch parameters
  HeunParams hm{};  // signs (-,+): second-branch parameters
  double A = 0.0;   // growth/decay exponent of the power prefactors
  double r0 = 0.0;  // second/first branch coefficient ratio from psi(0) = 0
  double switch_z = 0.5;
  double x_switch = 0.0;  // analytic form used at or below this x
  double x_far = 0.0;     // second-branch series seeded here
  std::vector<double> bx;                    // backward mesh (ascending)
  std::vector<std::array<double, 2>> bs;     // second-branch states on bx
  double psi2_origin = 0.0;                  // second-branch value at x -> 0+
  std::vector<double> fx;                    // forward mesh from x_switch
  std::vector<std::array<double, 2>> fs;     // full-solution states on fx
};

// Second branch psi2 = (1+z)^(-A) * (its Clausen series), with the series
// summed at x only when x is at or beyond the far seed; below that the value
// comes from the stored backward sweep, re-integrated over the short gap to
// the query point. Returns (value, derivative).
inline std::array<double, 2> psi2_state(const ZeroEnergyContext& ctx, double x) {
  auto rhs = schrodinger_rhs(ctx.p, 0.0);
  OdeOptions opt;
  opt.rtol = 1e-12;
  if (x <= ctx.bx.front()) {
    std::array<double, 2> y = ctx.bs.front();
    if (x < ctx.bx.front()) ode_integrate<2>(rhs, ctx.bx.front(), x, y, opt);
    return y;
  }
  const auto it = std::lower_bound(ctx.bx.begin(), ctx.bx.end(), x);
  if (it == ctx.bx.end())
    throw DomainError("psi2_state: query beyond the far seed point");
  const std::size_t j = static_cast<std::size_t>(it - ctx.bx.begin());
  std::array<double, 2> y = ctx.bs[j];
  if (ctx.bx[j] > x) ode_integrate<2>(rhs, ctx.bx[j], x, y, opt);
  return y;
}

// Analytic form psi = (1+z)^A u1 + r0 * psi2 for x at or below the switch.
inline std::array<double, 2> zero_energy_analytic_state(const ZeroEnergyContext& ctx,
                                                        double x) {
  const double z = coord_map(ctx.p, x);
  const double gp = std::pow(1.0 + z, ctx.A);
  const double u1 = u1_clausen(ctx.hp, z).real();
  const double du1 = du1_clausen_dz(ctx.hp, z).real();
  const std::array<double, 2> s2 = psi2_state(ctx, x);
  const double dzdx = (1.0 - z * z) / (2.0 * ctx.p.sigma * z);
  return {gp * u1 + ctx.r0 * s2[0],
          (ctx.A * gp / (1.0 + z) * u1 + gp * du1) * dzdx + ctx.r0 * s2[1]};
}

inline ZeroEnergyContext make_zero_energy_context(const PhysParams& p,
                                                  double switch_z) {
  require_vanishing_well(p);
  if (!(switch_z >= 0.2 && switch_z <= 0.5))
    throw DomainError("threshold switch coordinate must lie in [0.2, 0.5]");
  ZeroEnergyContext ctx;
  ctx.p = p;
  ctx.hp = map_to_heun(p, 0.0, +1, +1);
  ctx.hm = map_to_heun(p, 0.0, -1, +1);
  ctx.A = ctx.hp.alpha1.real();
  ctx.switch_z = switch_z;
  ctx.x_switch = coord_inverse(p, switch_z);

  // Far seed: the second-branch series' first term ratio is A(1+A)w (the
  // upper parameters multiply to A^2 while (1+A)/A survives the lower ones),
  // so cap that product at 1/2 to keep every term below the leading one and
  // the summation cancellation-free regardless of depth.
  const double wA = std::min(0.02, 0.5 / (1.0 + ctx.A * (1.0 + ctx.A)));
  ctx.x_far = std::max(-p.sigma * std::log(4.0 * wA * (1.0 - wA)),
                       ctx.x_switch + p.sigma);

  ctx.bx = node_scan_mesh(p, ctx.x_far);
  ctx.bs.resize(ctx.bx.size());
  {
    const double c = coord_map_complement(p, ctx.x_far);
    const double z = 1.0 - c;
    const double u2 = u2_clausen(ctx.hm, z).real();
    const double du2 = du2_clausen_dz(ctx.hm, z).real();
    const double gm = std::pow(1.0 + z, -ctx.A);
    const double dzdx = c * (2.0 - c) / (2.0 * p.sigma * z);
    std::array<double, 2> y = {gm * u2,
                               (-ctx.A * gm / (1.0 + z) * u2 + gm * du2) * dzdx};
    auto rhs = schrodinger_rhs(p, 0.0);
    OdeOptions opt;
    // The origin value of this branch sets the mixing ratio r0; run the long
    // backward sweep a decade tighter than the pointwise sweeps.
    opt.rtol = 1e-13;
    ctx.bs.back() = y;
    for (std::size_t i = ctx.bx.size() - 1; i-- > 0;) {
      ode_integrate<2>(rhs, ctx.bx[i + 1], ctx.bx[i], y, opt);
      ctx.bs[i] = y;
    }
    // V(x) ~ x^(-1/2) blocks integrating to x = 0 exactly; stop just short
    // and Taylor-step the rest (psi'' is integrable, remainder O(x^{3/2})).
    const double x0 = 1e-10 * p.sigma;
    ode_integrate<2>(rhs, ctx.bx.front(), x0, y, opt);
    ctx.psi2_origin = y[0] - x0 * y[1];
  }
  if (!(std::fabs(ctx.psi2_origin) > 0.0))
    throw NumericalError("threshold second branch vanished at the origin");
  ctx.r0 = -u1_clausen(ctx.hp, 0.0).real() / ctx.psi2_origin;

  ctx.fx = {ctx.x_switch};
  ctx.fs = {zero_energy_analytic_state(ctx, ctx.x_switch)};
  return ctx;
}

// Extends the forward sweep of the full solution beyond the switch point.
inline void ensure_forward_states(ZeroEnergyContext& ctx, double X) {
  const double h = ctx.p.sigma / 40.0;
  auto rhs = schrodinger_rhs(ctx.p, 0.0);
  OdeOptions opt;
  opt.rtol = 1e-12;
  std::array<double, 2> y = ctx.fs.back();
  double x = ctx.fx.back();
  while (x < X - 1e-12 * ctx.p.sigma) {
    const double xn = std::min(x + h, X);
    ode_integrate<2>(rhs, x, xn, y, opt);
    ctx.fx.push_back(xn);
    ctx.fs.push_back(y);
    x = xn;
  }
}

// Full threshold solution (construction sign) anywhere up to the forward
// sweep's reach.
inline double zero_energy_value(const ZeroEnergyContext& ctx, double x) {
  if (x <= ctx.x_switch) return zero_energy_analytic_state(ctx, x)[0];
  const auto it = std::upper_bound(ctx.fx.begin(), ctx.fx.end(), x);
  if (it == ctx.fx.begin())
    throw DomainError("zero_energy_value: query below the switch point");
  const std::size_t j = static_cast<std::size_t>(it - ctx.fx.begin()) - 1;
  std::array<double, 2> y = ctx.fs[j];
  if (x > ctx.fx[j]) {
    auto rhs = schrodinger_rhs(ctx.p, 0.0);
    OdeOptions opt;
    opt.rtol = 1e-12;
    ode_integrate<2>(rhs, ctx.fx[j], x, y, opt);
  }
  return y[0];
}

inline void sweep_zero_energy(ZeroEnergyContext& ctx, double X,
                              std::vector<double>& mesh, std::vector<double>& vals) {
  ensure_forward_states(ctx, X);
  mesh = node_scan_mesh(ctx.p, X);
  vals.resize(mesh.size());
  const ZeroEnergyContext& cctx = ctx;
  parallel_for(static_cast<int>(mesh.size()), [&](int i) {
    vals[static_cast<std::size_t>(i)] =
        zero_energy_value(cctx, mesh[static_cast<std::size_t>(i)]);
  });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Default sampling grid: graded through the singular region, uniform at
// sigma/200 out to where a bound level has decayed below double-precision
// relevance (or 30 sigma for the threshold solution, E = 0).
// ---------------------------------------------------------------------------
inline std::vector<double> default_wavefunction_grid(const PhysParams& p, double E) {
  require_vanishing_well(p);
  double x_max = 0.0;
  if (E == 0.0) {
    x_max = 30.0 * p.sigma;
  } else if (E < 0.0) {
    const double rate = std::sqrt(p.coupling() * (-E)) / p.sigma;
    x_max = detail::bound_scan_extent(p, rate, 0.0);
  } else {
    throw DomainError("default_wavefunction_grid: E must be <= 0");
  }
  const int n_uniform =
      std::max(1, static_cast<int>(std::ceil((x_max - p.sigma) * 200.0 / p.sigma)));
  return graded_mesh(x_max, p.sigma, 400, n_uniform);
}

// ---------------------------------------------------------------------------
// L2 normalization. Integrates psi^2 over the stored samples (compensated
// composite quadrature), adds the analytic head (psi is linear through the
// origin) and the analytic exponential tail with decay 2*alpha2/sigma, and
// certifies both the quadrature (coarse/fine comparison, 1e-8) and the tail
// model (next-order correction, 1e-10). Returns a rescaled copy whose `norm`
// is the integral of the *input* samples; applying it twice is therefore a
// no-op on the sample values.
// ---------------------------------------------------------------------------
inline WavefunctionTable normalize(const WavefunctionTable& t) {
  validate(t.params);
  if (!t.level)
    throw ValidationError("normalize: threshold tables are not square-integrable");
  const double E = t.level->E;
  if (!(E < 0.0)) throw ValidationError("normalize: level energy must be negative");
  const std::size_t n = t.samples.size();
  if (n < 9) throw GridError("normalize: too few samples for certified quadrature");
  std::vector<double> x(n), f(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = t.samples[i].x;
    const double psi = t.samples[i].psi;
    if (!std::isfinite(x[i]) || !std::isfinite(psi))
      throw GridError("normalize: non-finite sample");
    if (i > 0 && !(x[i] > x[i - 1]))
      throw GridError("normalize: sample positions must increase");
    f[i] = psi * psi;
  }
  if (!(x.front() > 0.0) || x.front() > 0.05 * t.params.sigma)
    throw GridError("normalize: grid must begin within 0.05 sigma of the origin");

  const double fine = simpson_nonuniform(x, f);
  std::vector<double> xc, fc;
  for (std::size_t i = 0; i < n; i += 2) {
    xc.push_back(x[i]);
    fc.push_back(f[i]);
  }
  if (xc.back() != x.back()) {
    xc.push_back(x.back());
    fc.push_back(f.back());
  }
  const double coarse = simpson_nonuniform(xc, fc);
  const double quad_err = std::fabs(fine - coarse) / 15.0;

  const double a2 = std::sqrt(t.params.coupling() * (-E));
  const double rate = a2 / t.params.sigma;
  const double head = f.front() * x.front() / 3.0;
  const double tail = f.back() / (2.0 * rate);
  const double total = fine + head + tail;
  if (!(total > 0.0) || !std::isfinite(total))
    throw GridError("normalize: non-positive norm integral");
  if (quad_err > 1e-8 * total)
    throw GridError("normalize: quadrature error estimate exceeds 1e-8 of the norm");
  const double tail_model_err =
      tail * std::min(1.0, (2.0 * a2 + 1.0) * std::exp(-x.back() / t.params.sigma));
  if (tail_model_err > 1e-10 * total)
    throw GridError("normalize: tail model error exceeds 1e-10 of the norm");

  WavefunctionTable out = t;
  out.norm = total;
  const double s = 1.0 / std::sqrt(total);
  for (Sample& smp : out.samples) smp.psi *= s;
  return out;
}

// ---------------------------------------------------------------------------
// Bound-state table at a converged level. Samples the closed-form amplitude
// on the caller's grid, fixes the overall sign so psi > 0 just right of the
// origin, locates nodes on an internal scan mesh (bisection to 1e-8 sigma),
// and returns the unit-norm table.
// ---------------------------------------------------------------------------
inline WavefunctionTable bound_wavefunction(const PhysParams& p, const EnergyLevel& level,
                                            const std::vector<double>& grid) {
  require_vanishing_well(p);
  detail::require_grid(grid);
  if (!std::isfinite(level.E) || !(level.E < 0.0))
    throw DomainError("bound_wavefunction: level energy must be negative");
  const HeunParams h = map_to_heun(p, level.E, +1, +1);
  const detail::NodeScan scan = detail::scan_bound_nodes(p, level.E, grid.back(), true);
  const double sign_fix = (scan.first_sign < 0.0) ? -1.0 : 1.0;

  WavefunctionTable t;
  t.params = p;
  t.level = level;
  t.nodes = scan.nodes;
  t.samples.resize(grid.size());
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    t.samples[k] = {grid[k], coord_map(p, grid[k]),
                    sign_fix * detail::bound_amplitude(p, h, grid[k])};
  });
  return normalize(t);
}

// ---------------------------------------------------------------------------
// Threshold (zero-energy) solution. Analytic two-branch form up to the
// switch coordinate, adaptive continuation beyond, overall sign fixed so
// psi > 0 just right of the origin. Not normalizable: norm stays 0.
// ---------------------------------------------------------------------------
inline WavefunctionTable zero_energy_solution(const PhysParams& p,
                                              const std::vector<double>& grid,
                                              double switch_z = 0.5) {
  detail::require_grid(grid);
  if (grid.back() < 2.0 * p.sigma)
    throw GridError("zero_energy_solution: grid must extend past 2 sigma");
  detail::ZeroEnergyContext ctx = detail::make_zero_energy_context(p, switch_z);
  std::vector<double> mesh, vals;
  detail::sweep_zero_energy(ctx, grid.back(), mesh, vals);
  const detail::NodeScan scan = detail::scan_for_nodes(
      mesh, vals, p.sigma, true,
      [&](double x) { return detail::zero_energy_value(ctx, x); });
  const double sign_fix = (scan.first_sign < 0.0) ? -1.0 : 1.0;

  WavefunctionTable t;
  t.params = p;
  t.nodes = scan.nodes;
  t.samples.resize(grid.size());
  const detail::ZeroEnergyContext& cctx = ctx;
  parallel_for(static_cast<int>(grid.size()), [&](int i) {
    const std::size_t k = static_cast<std::size_t>(i);
    t.samples[k] = {grid[k], coord_map(p, grid[k]),
                    sign_fix * detail::zero_energy_value(cctx, grid[k])};
  });
  return t;
}

// Coefficient ratio (second branch over regular branch) imposed by the wall.
inline double zero_energy_coefficient_ratio(const PhysParams& p) {
  return detail::make_zero_energy_context(p, 0.5).r0;
}

// ---------------------------------------------------------------------------
// Node count of the threshold solution — by the node theorem, the exact
// number of bound states. The scan domain doubles from 20 sigma until one
// more doubling adds no nodes; the count must respect the integral bound.
// ---------------------------------------------------------------------------
inline int zero_energy_node_count(const PhysParams& p) {
  detail::ZeroEnergyContext ctx = detail::make_zero_energy_context(p, 0.5);
  const int cap = static_cast<int>(std::ceil(chadan_bound(p)));
  std::vector<double> mesh, vals;
  double X = 20.0 * p.sigma;
  detail::sweep_zero_energy(ctx, X, mesh, vals);
  int prev = static_cast<int>(
      detail::scan_for_nodes(mesh, vals, p.sigma, false, [](double) { return 0.0; })
          .nodes.size());
  for (int round = 1; round < 5; ++round) {
    X *= 2.0;
    detail::sweep_zero_energy(ctx, X, mesh, vals);
    const int cur = static_cast<int>(
        detail::scan_for_nodes(mesh, vals, p.sigma, false, [](double) { return 0.0; })
            .nodes.size());
    if (cur == prev) {
      if (cur > cap)
        throw ValidationError("zero_energy_node_count: count exceeds the integral bound");
      return cur;
    }
    prev = cur;
  }
  throw NumericalError(
      "zero_energy_node_count: count failed to stabilize under domain doubling");
}

}  // namespace sqrtwell
