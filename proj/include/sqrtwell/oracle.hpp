#pragma once

// Brute-force cross-check path, fully independent of the special-function
// machinery: integrate psi'' = (2m/hbar^2)(V(x) - E) psi outward from the
// regular inner data psi(x0) = x0, psi'(x0) = 1 (the inverse-square-root
// spike of V at the origin is integrable, so the regular solution rises
// linearly with an O(x^{3/2}) correction). Eigenvalues are the energies
// where the outward solution's node count steps up, isolated by bisection;
// scattering phases come from fitting the far oscillatory tail.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sqrtwell/errors.hpp"
#include "sqrtwell/model.hpp"
#include "sqrtwell/ode.hpp"
#include "sqrtwell/util.hpp"

namespace sqrtwell {

struct ShootingConfig {
  double x0 = 0.0;     // inner start; 0 selects 1e-8 * sigma
  double X_max = 0.0;  // outer cutoff; 0 selects 40 * sigma (auto-extended)
  double rtol = 1e-10;
  int max_bisections = 200;
};

using PotentialFn = std::function<double(double)>;

namespace detail {

inline std::pair<double, double> resolve_extents(const ShootingConfig& cfg,
                                                 double sigma) {
  const double x0 = cfg.x0 > 0.0 ? cfg.x0 : 1e-8 * sigma;
  const double Xm = cfg.X_max > 0.0 ? cfg.X_max : 40.0 * sigma;
  if (!(x0 > 0.0) || !(x0 < Xm))
    throw DomainError("shooting: need 0 < x0 < X_max");
  if (!(cfg.rtol > 0.0)) throw DomainError("shooting: rtol must be positive");
  if (cfg.max_bisections < 8)
    throw DomainError("shooting: max_bisections too small");
  return {x0, Xm};
}

struct Shot {
  int nodes = 0;
  double end_value = 0.0;  // psi(X), possibly rescaled (sign is meaningful)
};

// Outward integration with node counting. Exponentially growing states are
// rescaled in flight so deep wells cannot overflow; only signs and node
// counts survive rescaling, which is all the callers use.
inline Shot shoot(const PotentialFn& V, double fac, double E, double x0,
                  double X, double rtol, double h_max = 0.0) {
  std::array<double, 2> y = {x0, 1.0};
  Shot out;
  double prev = y[0];
  auto rhs = [&](double x, const std::array<double, 2>& s,
                 std::array<double, 2>& d) {
    d[0] = s[1];
    d[1] = fac * (V(x) - E) * s[0];
  };
  OdeOptions opt;
  opt.rtol = rtol;
  if (h_max > 0.0) opt.h_max = h_max;
  ode_integrate<2>(rhs, x0, X, y, opt,
                   [&](double, std::array<double, 2>& s) {
                     if (s[0] != 0.0) {
                       if ((s[0] > 0.0) != (prev > 0.0)) ++out.nodes;
                       prev = s[0];
                     }
                     const double m =
                         std::max(std::fabs(s[0]), std::fabs(s[1]));
                     if (m > 1e200) {
                       s[0] /= m;
                       s[1] /= m;
                     }
                   });
  out.end_value = y[0];
  return out;
}

// Energies inside (E_lo, E_hi) where the node count of the outward solution
// steps k -> k+1; by Sturm oscillation these are the eigenvalues. The count
// is monotone in E, so plain bisection on it isolates each transition.
inline std::vector<double> transition_energies(
    const PotentialFn& V, double fac, double E_lo, double E_hi, double x0,
    const std::function<double(double)>& extent_of, double rtol,
    int max_bisections) {
  const int n_lo = shoot(V, fac, E_lo, x0, extent_of(E_lo), rtol).nodes;
  const int n_hi = shoot(V, fac, E_hi, x0, extent_of(E_hi), rtol).nodes;
  if (n_hi <= n_lo) return {};

  std::vector<double> out(static_cast<std::size_t>(n_hi - n_lo));
  parallel_for(n_hi - n_lo, [&](int j) {
    const int k = n_lo + j;
    double lo = E_lo, hi = E_hi;
    int it = 0;
    while (hi - lo > 1e-9 * std::max(1.0, std::fabs(hi)) &&
           it < max_bisections) {
      const double mid = 0.5 * (lo + hi);
      const int nm = shoot(V, fac, mid, x0, extent_of(mid), rtol).nodes;
      if (nm <= k)
        lo = mid;
      else
        hi = mid;
      ++it;
    }
    if (hi - lo > 1e-8 * std::max(1.0, std::fabs(hi)))
      throw NumericalError(
          "oracle: failed to isolate a node-count transition within the "
          "bisection budget");
    out[static_cast<std::size_t>(j)] = 0.5 * (lo + hi);
  });
  return out;
}

// Far-field cutoff for the well at negative energy: past the larger of the
// classical turning distance and one width, plus enough decay lengths for
// the tail to dominate; capped so near-threshold energies stay finite.
inline double well_extent(const PhysParams& p, double E, double X_base) {
  if (!(E < 0.0)) return X_base;
  const double kappa = std::sqrt(2.0 * p.m * std::fabs(E)) / p.hbar;
  const double x_turn =
      std::max(p.sigma, p.sigma * std::log(p.V0 / (2.0 * std::fabs(E))));
  return std::min(std::max(X_base, x_turn + 32.0 / kappa), 600.0 * p.sigma);
}

struct FarFieldFit {
  double phase = 0.0;     // phi in  psi ~ R sin(k x + phi)
  double residual = 0.0;  // relative rms misfit
};

// Least-squares fit of a sin(kx) + b cos(kx) over the trailing quarter of
// the integration range.
inline FarFieldFit fit_far_field(const PotentialFn& V, double fac, double E,
                                 double k, double x0, double X, double rtol) {
  const double x_fit = 0.75 * X;
  std::vector<double> xs, ys;
  std::array<double, 2> y = {x0, 1.0};
  auto rhs = [&](double x, const std::array<double, 2>& s,
                 std::array<double, 2>& d) {
    d[0] = s[1];
    d[1] = fac * (V(x) - E) * s[0];
  };
  OdeOptions opt;
  opt.rtol = rtol;
  opt.h_max = (2.0 * pi / k) / 12.0;  // enough samples per wavelength
  ode_integrate<2>(rhs, x0, X, y, opt, [&](double x, std::array<double, 2>& s) {
    if (x >= x_fit) {
      xs.push_back(x);
      ys.push_back(s[0]);
    }
  });
  if (xs.size() < 16)
    throw FitError("oracle far-field fit: too few samples in the fit window");

  double Sss = 0.0, Ssc = 0.0, Scc = 0.0, Ssy = 0.0, Scy = 0.0, Syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double s = std::sin(k * xs[i]), c = std::cos(k * xs[i]);
    Sss += s * s;
    Ssc += s * c;
    Scc += c * c;
    Ssy += s * ys[i];
    Scy += c * ys[i];
    Syy += ys[i] * ys[i];
  }
  const double det = Sss * Scc - Ssc * Ssc;
  if (!(std::fabs(det) > 1e-12 * (Sss * Scc + 1e-300)))
    throw FitError("oracle far-field fit: degenerate normal equations");
  const double a = (Scc * Ssy - Ssc * Scy) / det;
  const double b = (Sss * Scy - Ssc * Ssy) / det;

  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r =
        a * std::sin(k * xs[i]) + b * std::cos(k * xs[i]) - ys[i];
    rss += r * r;
  }
  FarFieldFit fit;
  fit.residual = std::sqrt(rss / (Syy + 1e-300));
  if (!(fit.residual <= 1e-4))
    throw FitError("oracle far-field fit: relative residual " +
                   std::to_string(fit.residual) + " exceeds 1e-4");
  fit.phase = std::atan2(b, a);
  return fit;
}

}  // namespace detail

// All bound levels of the well, found without any special functions.
inline std::vector<double> oracle_eigenvalues(const PhysParams& p,
                                              const ShootingConfig& cfg = {}) {
  require_vanishing_well(p);
  const auto [x0, Xm] = detail::resolve_extents(cfg, p.sigma);
  const double fac = 2.0 * p.m / (p.hbar * p.hbar);
  const PotentialFn V = [p](double x) { return potential(p, x); };
  const auto extent = [&p, Xm = Xm](double E) {
    return detail::well_extent(p, E, Xm);
  };

  const double c2 = p.coupling();
  const double E_hi = -1e-9 / c2;
  double E_lo = -(2.0 * c2 * p.V0 + 10.0) / c2;
  for (int i = 0; i < 3; ++i) {
    if (detail::shoot(V, fac, E_lo, x0, extent(E_lo), cfg.rtol).nodes == 0)
      break;
    E_lo *= 2.0;
    if (i == 2)
      throw NumericalError(
          "oracle_eigenvalues: could not find a node-free floor energy");
  }
  return detail::transition_energies(V, fac, E_lo, E_hi, x0, extent, cfg.rtol,
                                     cfg.max_bisections);
}

// Same machinery for an arbitrary potential hook (self-tests); both extents
// must be set explicitly since there is no intrinsic width to default to.
inline std::vector<double> oracle_eigenvalues_custom(
    const PotentialFn& V, double two_m_over_h2, double E_lo, double E_hi,
    const ShootingConfig& cfg) {
  if (!(cfg.x0 > 0.0) || !(cfg.X_max > cfg.x0))
    throw DomainError("oracle_eigenvalues_custom: explicit 0 < x0 < X_max required");
  if (!(cfg.rtol > 0.0) || cfg.max_bisections < 8)
    throw DomainError("oracle_eigenvalues_custom: bad tolerance settings");
  if (!(E_lo < E_hi))
    throw DomainError("oracle_eigenvalues_custom: need E_lo < E_hi");
  const auto extent = [&cfg](double) { return cfg.X_max; };
  return detail::transition_energies(V, two_m_over_h2, E_lo, E_hi, cfg.x0,
                                     extent, cfg.rtol, cfg.max_bisections);
}

// Raw fitted phase of the far field against sin(kx), in (-pi, pi]: zero for
// a free particle. Carries the overall sign of the fitted amplitude, so it
// is only defined mod pi as a physical phase.
inline double oracle_far_field_phase_custom(const PotentialFn& V,
                                            double two_m_over_h2, double E,
                                            double k,
                                            const ShootingConfig& cfg) {
  if (!(std::isfinite(E)) || !(E > 0.0))
    throw DomainError("oracle_far_field_phase_custom: E must be positive");
  if (!(cfg.x0 > 0.0) || !(cfg.X_max > cfg.x0) || !(cfg.rtol > 0.0))
    throw DomainError("oracle_far_field_phase_custom: bad shooting settings");
  const detail::FarFieldFit fit = detail::fit_far_field(
      V, two_m_over_h2, E, k, cfg.x0, cfg.X_max, cfg.rtol);
  return fit.phase;
}

namespace detail {

inline FarFieldFit well_far_field(const PhysParams& p, double E,
                                  const ShootingConfig& cfg) {
  require_vanishing_well(p);
  if (!(std::isfinite(E)) || !(E > 0.0))
    throw DomainError("oracle scattering: E must be positive");
  const auto [x0, Xm] = resolve_extents(cfg, p.sigma);
  const double fac = 2.0 * p.m / (p.hbar * p.hbar);
  const double k = std::sqrt(2.0 * p.m * E) / p.hbar;
  // Reach far enough that the potential has died and the window holds a few
  // wavelengths.
  const double X = std::max({Xm, 20.0 * p.sigma, 8.0 * 2.0 * pi / k});
  const PotentialFn V = [p](double x) { return potential(p, x); };
  return fit_far_field(V, fac, E, k, x0, X, cfg.rtol);
}

}  // namespace detail

// Fitted far-field phase of the well's regular solution relative to the
// free regular solution sin(kx), in (-pi, pi] (raw atan2 of the fit).
inline double oracle_far_field_phase(const PhysParams& p, double E,
                                     const ShootingConfig& cfg = {}) {
  return detail::well_far_field(p, E, cfg).phase;
}

// Scattering phase shift in the convention of the analytic module, whose
// far field is a cosine wave: subtract the quarter turn from the sine-fit
// phase, then reduce to (-pi/2, pi/2].
inline double oracle_scattering_phase(const PhysParams& p, double E,
                                      const ShootingConfig& cfg = {}) {
  return reduce_phase(detail::well_far_field(p, E, cfg).phase - 0.5 * pi);
}

}  // namespace sqrtwell
