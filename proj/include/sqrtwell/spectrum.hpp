#pragma once

// Exact bound-state spectrum. The spectral function S(E) is the coefficient
// of the growing component of the wall-satisfying solution, expressed through
// regularized Gauss functions at argument 1/2; its zeros on E < 0 are the
// bound levels. The solver brackets sign changes of S on a scan grid (linear
// deep, logarithmic shallow), rejects spurious brackets at poles of S by the
// growth of |S| under bisection, refines the survivors, and validates every
// root against the node theorem before returning.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sqrtwell/errors.hpp"
#include "sqrtwell/heun.hpp"
#include "sqrtwell/model.hpp"
#include "sqrtwell/specfun.hpp"
#include "sqrtwell/spectrum_types.hpp"
#include "sqrtwell/states.hpp"
#include "sqrtwell/util.hpp"

namespace sqrtwell {

// S(E) in the regularized form, finite for every E < 0 (no lower-parameter
// degeneracies); diverges only at genuine poles, where the denominator
// function vanishes.
inline double spectral_function(const PhysParams& p, double E) {
  require_vanishing_well(p);
  if (!std::isfinite(E) || !(E < 0.0))
    throw DomainError("spectral_function: E must be negative");
  const HeunParams h = map_to_heun(p, E, +1, +1);
  const Complex num = hyp2f1_regularized(h.alpha_h, h.beta_h, h.delta_h, 0.5).value;
  const Complex den =
      hyp2f1_regularized(h.alpha_h, h.beta_h, h.delta_h - 1.0, 0.5).value;
  if (!(std::abs(den) > 0.0))
    throw PoleError("spectral_function: pole of the spectral ratio", h.delta_h - 1.0);
  const Complex coeff = (h.alpha_h * h.beta_h + 2.0 * h.alpha2 * h.q_h) / h.q_h;
  return (1.0 - coeff * num / den).real();
}

// The equivalent single-series form: the second Clausen-type solution
// evaluated at the wall. Shares its zero set with spectral_function but
// degenerates when the series' lower parameter hits a non-positive integer
// (outside the rescued window); the regularized form has no such holes.
inline double spectral_function_3f2(const PhysParams& p, double E) {
  require_vanishing_well(p);
  if (!std::isfinite(E) || !(E < 0.0))
    throw DomainError("spectral_function_3f2: E must be negative");
  const HeunParams h = map_to_heun(p, E, +1, +1);
  return u2_clausen(h, 0.0).real();
}

namespace detail {

// One refinement candidate: a sign-change bracket on the scan grid.
struct SpectralBracket {
  double e_lo = 0.0, e_hi = 0.0;  // scaled energies, e = coupling * E
  double f_lo = 0.0, f_hi = 0.0;
};

// Distinguishes roots from poles of S inside a bracket: bisect, following
// the sign change; at a root |S| at the midpoints collapses, at a pole it
// blows up.
template <typename F>
bool bracket_is_root(F&& f, double a, double fa, double b, double fb) {
  const double start = std::min(std::fabs(fa), std::fabs(fb));
  double fm = fa;
  for (int i = 0; i < 8; ++i) {
    const double m = 0.5 * (a + b);
    fm = f(m);
    if (fm == 0.0) return true;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return std::fabs(fm) < start;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Full spectrum. The expected level count comes from the threshold node
// count; the scan window and density double (up to three attempts) until
// exactly that many validated roots are found.
// ---------------------------------------------------------------------------
inline SpectrumResult find_spectrum(const PhysParams& p, double tol = 1e-10) {
  require_vanishing_well(p);
  if (!(tol > 0.0 && tol < 1e-2)) throw DomainError("find_spectrum: bad tolerance");
  const int target = zero_energy_node_count(p);
  const double c2 = p.coupling();
  const double v = c2 * p.V0;

  // S as a function of the scaled energy e = c2 * E; an evaluation that
  // fails inside a degeneracy window is retried a hair away.
  auto S_at = [&](double e) {
    try {
      return spectral_function(p, e / c2);
    } catch (const NumericalError&) {
      return spectral_function(p, (e - 1e-9) / c2);
    }
  };

  std::ostringstream trace;
  double e_min_base = -(2.0 * v + 10.0);
  const double e_max = -1e-9;
  SpectrumResult result;
  result.chadan_bound = chadan_bound(p);
  result.exact_count = target;

  for (int attempt = 0; attempt < 3; ++attempt) {
    const double e_min = e_min_base * std::pow(2.0, attempt);
    const int n_lin = 500 << attempt;
    const int n_log = 200 << attempt;
    result.scan_window = {e_min / c2, e_max / c2};

    // Deep part linear, shallow part logarithmic in |e|.
    std::vector<double> grid;
    const double e_knee = std::max(e_min, -1.0);
    for (double e : linspace(e_min, e_knee, n_lin)) grid.push_back(e);
    for (double a : logspace(1e-9, -e_knee, n_log)) grid.push_back(-a);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<double> fv(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
      fv[static_cast<std::size_t>(i)] = S_at(grid[static_cast<std::size_t>(i)]);
    });

    std::vector<detail::SpectralBracket> brackets;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (!std::isfinite(fv[i]) || !std::isfinite(fv[i + 1])) continue;
      if (fv[i] == 0.0 || (fv[i] > 0.0) != (fv[i + 1] > 0.0))
        brackets.push_back({grid[i], grid[i + 1], fv[i], fv[i + 1]});
    }

    std::vector<double> roots;
    for (const detail::SpectralBracket& b : brackets) {
      if (!detail::bracket_is_root(S_at, b.e_lo, b.f_lo, b.e_hi, b.f_hi)) continue;
      auto S_E = [&](double E) { return S_at(E * c2); };
      const double E = refine_root(S_E, b.e_lo / c2, b.f_lo, b.e_hi / c2, b.f_hi,
                                   1e-3 * std::max(1.0, std::fabs(b.e_lo / c2)), tol);
      roots.push_back(E);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) {
                              return std::fabs(a - b) <=
                                     1e-9 * std::max(1.0, std::fabs(a));
                            }),
                roots.end());

    trace << "attempt " << attempt << ": window e=[" << e_min << "," << e_max
          << "] grid=" << grid.size() << " brackets=" << brackets.size()
          << " roots=" << roots.size() << " expected=" << target << "; ";

    if (static_cast<int>(roots.size()) != target) continue;

    bool valid = true;
    std::vector<EnergyLevel> levels(roots.size());
    parallel_for(static_cast<int>(roots.size()), [&](int i) {
      const std::size_t k = static_cast<std::size_t>(i);
      EnergyLevel lvl;
      lvl.index = i;
      lvl.E = roots[k];
      lvl.spectral_residual = std::fabs(spectral_function(p, roots[k]));
      lvl.node_count = detail::count_bound_nodes(p, roots[k]);
      levels[k] = lvl;
    });
    for (const EnergyLevel& lvl : levels) {
      if (lvl.node_count != lvl.index || !(lvl.spectral_residual < 1e-9)) {
        trace << "level " << lvl.index << " at E=" << lvl.E << " has "
              << lvl.node_count << " nodes, residual " << lvl.spectral_residual
              << "; ";
        valid = false;
      }
    }
    if (!valid) continue;
    result.levels = std::move(levels);
    return result;
  }
  throw CountMismatchError("find_spectrum: could not locate the expected level count",
                           trace.str());
}

}  // namespace sqrtwell
