#pragma once

// Positive-energy scattering on the half line. The wall condition psi(0) = 0
// fixes the mixing ratio of the two basis solutions; eliminating the mapped
// coordinate in favor of x at large distance splits the solution into
// counter-propagating exponentials with complex coefficients A and B. The
// phase shift is the real part of (i/2) ln(A/B), reduced to (-pi/2, pi/2];
// it hops by pi exactly where A = -B, and the number of hops is one less
// than the number of bound states.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sqrtwell/errors.hpp"
#include "sqrtwell/heun.hpp"
#include "sqrtwell/model.hpp"
#include "sqrtwell/specfun.hpp"
#include "sqrtwell/states.hpp"
#include "sqrtwell/util.hpp"

namespace sqrtwell {

struct PhaseShiftPoint {
  double E = 0.0;
  double k = 0.0;         // physical wavenumber sqrt(2mE)/hbar
  double k_scaled = 0.0;  // sigma*k/2, the mapped-equation wavenumber
  double delta = 0.0;     // phase shift in (-pi/2, pi/2]
  double phase_imag = 0.0;  // Im of the raw phase; reality diagnostic
  Complex A{};
  Complex B{};
};

struct PhaseShiftCurve {
  std::vector<PhaseShiftPoint> points;
  // Continuous lifting of delta along the grid (the mod-pi ambiguity resolved
  // by nearest continuation); monotone through the hops.
  std::vector<double> delta_unwrapped;
  // Energies where the reduced phase wraps across +-pi/2, i.e. where A = -B.
  std::vector<double> jumps;
};

namespace detail {

inline void require_positive_energy(double E, const char* who) {
  if (!std::isfinite(E) || !(E > 0.0))
    throw DomainError(std::string(who) + ": E must be positive and finite");
}

}  // namespace detail

// Mixing ratio c2/c1 imposed by psi(0) = 0, in the series-normalized basis:
// minus the ratio of the two series at the origin image z = 0.
inline Complex origin_coefficient_ratio(const PhysParams& p, double E) {
  require_vanishing_well(p);
  detail::require_positive_energy(E, "origin_coefficient_ratio");
  const HeunParams h = map_to_heun(p, E, +1, +1);
  const Complex num = u1_clausen(h, 0.0);
  const Complex den = u2_clausen(h, 0.0);
  if (std::abs(den) < 1e-12)
    throw PoleError(
        "origin_coefficient_ratio: denominator series vanishes at this "
        "(exceptional) energy",
        den);
  return -num / den;
}

// Same ratio through the two-term Gauss representation of each series. The
// normalization constants of the two bases are opposite, which absorbs the
// minus sign; used as an independent cross-check path.
inline Complex origin_coefficient_ratio_gauss(const PhysParams& p, double E) {
  require_vanishing_well(p);
  detail::require_positive_energy(E, "origin_coefficient_ratio_gauss");
  const HeunParams h = map_to_heun(p, E, +1, +1);
  const Complex num = u1_gauss_combo(h, 0.0);
  const Complex den = u2_gauss_combo(h, 0.0);
  if (std::abs(den) < 1e-12)
    throw PoleError(
        "origin_coefficient_ratio_gauss: denominator combination vanishes at "
        "this (exceptional) energy",
        den);
  return num / den;
}

namespace detail {

// Far-field coefficients for the solution (u1 + ratio*u2) of the given
// parameter set. A multiplies the exponential carrying exp(-2*alpha2*x'),
// B the one carrying exp(+2*alpha2*x') (alpha2 is purely imaginary here).
inline std::pair<Complex, Complex> amplitudes_from(const HeunParams& h,
                                                   const Complex& ratio) {
  const Complex a1 = h.alpha1, a2 = h.alpha2;
  const Complex al = h.alpha_h, be = h.beta_h;
  const Complex one(1.0, 0.0);
  const Complex A =
      ratio - (a1 + a2) * cgamma(one + 2.0 * a1) * cgamma(-2.0 * a2) /
                  (cgamma(one - al + 2.0 * a1) * cgamma(one + al - 2.0 * a2));
  const Complex B = std::pow(Complex(16.0, 0.0), a2) * (a2 - a1) *
                    cgamma(one + 2.0 * a1) * cgamma(2.0 * a2) /
                    (cgamma(one + al) * cgamma(one + be));
  return {A, B};
}

}  // namespace detail

inline std::pair<Complex, Complex> asymptotic_amplitudes(const PhysParams& p,
                                                         double E) {
  detail::require_positive_energy(E, "asymptotic_amplitudes");
  const HeunParams h = map_to_heun(p, E, +1, +1);
  return detail::amplitudes_from(h, origin_coefficient_ratio(p, E));
}

inline PhaseShiftPoint phase_shift(const PhysParams& p, double E) {
  const auto [A, B] = asymptotic_amplitudes(p, E);
  if (!(std::abs(A) > 0.0) || !(std::abs(B) > 0.0))
    throw NumericalError("phase_shift: vanishing far-field amplitude");
  const Complex raw = Complex(0.0, 0.5) * std::log(A / B);
  if (!(std::fabs(raw.imag()) < 1e-8))
    throw NumericalError(
        "phase_shift: raw phase is not real (|A/B| deviates from 1): imag = " +
        std::to_string(raw.imag()));
  PhaseShiftPoint pt;
  pt.E = E;
  pt.k = std::sqrt(2.0 * p.m * E) / p.hbar;
  pt.k_scaled = 0.5 * p.sigma * pt.k;
  pt.delta = reduce_phase(raw.real());
  pt.phase_imag = raw.imag();
  pt.A = A;
  pt.B = B;
  return pt;
}

namespace detail {

// Signed angle that crosses zero exactly at a phase hop (A = -B).
inline double hop_indicator(const PhysParams& p, double E) {
  const auto [A, B] = asymptotic_amplitudes(p, E);
  return std::arg(-A / B);
}

// Localizes the hop inside (e_lo, e_hi) by bisection on the indicator sign.
inline double locate_hop(const PhysParams& p, double e_lo, double e_hi) {
  double f_lo = hop_indicator(p, e_lo);
  for (int i = 0; i < 200 && e_hi - e_lo > 1e-13 * std::max(1.0, e_hi); ++i) {
    const double mid = 0.5 * (e_lo + e_hi);
    const double fm = hop_indicator(p, mid);
    if ((fm > 0.0) == (f_lo > 0.0)) {
      e_lo = mid;
      f_lo = fm;
    } else {
      e_hi = mid;
    }
  }
  return 0.5 * (e_lo + e_hi);
}

}  // namespace detail

// Evaluates the phase shift over an increasing positive grid, lifts it to a
// continuous curve, localizes every pi hop, and checks the hop count against
// the bound-state count (threshold node count) minus one.
inline PhaseShiftCurve phase_shift_curve(const PhysParams& p,
                                         const std::vector<double>& E_grid) {
  require_vanishing_well(p);
  if (E_grid.size() < 2)
    throw DomainError("phase_shift_curve: need at least two grid energies");
  for (std::size_t i = 0; i < E_grid.size(); ++i) {
    detail::require_positive_energy(E_grid[i], "phase_shift_curve");
    if (i > 0 && !(E_grid[i] > E_grid[i - 1]))
      throw DomainError("phase_shift_curve: grid must be strictly increasing");
  }

  PhaseShiftCurve curve;
  curve.points.resize(E_grid.size());
  parallel_for(static_cast<int>(E_grid.size()), [&](int i) {
    curve.points[static_cast<std::size_t>(i)] =
        phase_shift(p, E_grid[static_cast<std::size_t>(i)]);
  });

  // Continuous lifting: each reduced value is defined mod pi; pick the
  // representative nearest the previous lifted value.
  curve.delta_unwrapped.resize(curve.points.size());
  curve.delta_unwrapped[0] = curve.points[0].delta;
  std::vector<long> turns(curve.points.size(), 0);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const double prev = curve.delta_unwrapped[i - 1];
    const double raw = curve.points[i].delta;
    const long m = std::lround((prev - raw) / pi);
    turns[i] = m;
    curve.delta_unwrapped[i] = raw + static_cast<double>(m) * pi;
  }

  // A hop lives in every segment where the winding multiple steps by one.
  std::ostringstream diag;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const long d = turns[i] - turns[i - 1];
    if (d == 0) continue;
    if (d != 1 && d != -1) {
      diag << "segment [" << E_grid[i - 1] << ", " << E_grid[i]
           << "] winds by " << d << " (grid too coarse); ";
      continue;
    }
    curve.jumps.push_back(detail::locate_hop(p, E_grid[i - 1], E_grid[i]));
  }

  const int nodes = zero_energy_node_count(p);
  const int expected = std::max(0, nodes - 1);
  if (static_cast<int>(curve.jumps.size()) != expected) {
    diag << "threshold node count " << nodes << ", expected " << expected
         << " hops, found " << curve.jumps.size() << " at {";
    for (double e : curve.jumps) diag << e << ", ";
    diag << "}";
    throw CountMismatchError(
        "phase_shift_curve: hop count disagrees with the bound-state count",
        diag.str());
  }
  return curve;
}

}  // namespace sqrtwell
