#pragma once

// Physical problem definition: a short-range well on the half line x > 0,
//
//   V(x) = V0 + V1 / sqrt(1 - exp(-x/sigma)),      sigma > 0,
//
// together with its natural coordinate z(x) = sqrt(1 - exp(-x/sigma)) on
// [0, 1) and the two asymptotes of the V1 = -V0 (vanishing-at-infinity)
// specialization: an attractive inverse-square-root divergence at the origin
// and an exponential tail at infinity.

#include <cmath>

#include "sqrtwell/errors.hpp"

namespace sqrtwell {

struct PhysParams {
  double m = 1.0;      // particle mass, > 0
  double hbar = 1.0;   // reduced Planck constant, > 0
  double V0 = 0.0;     // well strength / offset
  double sigma = 1.0;  // range, > 0
  double V1 = -V0;     // strength of the singular term; defaults to -V0

  // 2 m sigma^2 / hbar^2 — the coupling that converts energies to the
  // dimensionless combinations appearing in every exponent downstream.
  double coupling() const { return 2.0 * m * sigma * sigma / (hbar * hbar); }
};

inline void validate(const PhysParams& p) {
  if (!(p.m > 0.0)) throw DomainError("PhysParams: m must be positive");
  if (!(p.hbar > 0.0)) throw DomainError("PhysParams: hbar must be positive");
  if (!(p.sigma > 0.0)) throw DomainError("PhysParams: sigma must be positive");
  if (!std::isfinite(p.V0) || !std::isfinite(p.V1))
    throw DomainError("PhysParams: V0 and V1 must be finite");
}

// True when the potential vanishes at infinity (V1 = -V0) and the well
// actually attracts (V0 > 0). Bound-state and scattering operations require
// this configuration; general-solution machinery does not.
inline bool is_vanishing_well(const PhysParams& p) {
  return p.V1 == -p.V0 && p.V0 > 0.0;
}

inline void require_vanishing_well(const PhysParams& p) {
  validate(p);
  if (!is_vanishing_well(p))
    throw DomainError("operation requires V1 = -V0 with V0 > 0");
}

// V(x) for x > 0. With V1 < 0 the value diverges to -infinity as x -> 0+;
// no clamping is applied, callers own the divergence.
inline double potential(const PhysParams& p, double x) {
  validate(p);
  if (!(x > 0.0)) throw DomainError("potential: x must be positive");
  return p.V0 + p.V1 / std::sqrt(-std::expm1(-x / p.sigma));
}

// z(x) = sqrt(1 - exp(-x/sigma)), strictly increasing from z(0) = 0 toward 1.
// The double result saturates at 1.0 once exp(-x/sigma) drops below the
// rounding threshold; use coord_map_complement for the far tail.
inline double coord_map(const PhysParams& p, double x) {
  validate(p);
  if (x < 0.0) throw DomainError("coord_map: x must be non-negative");
  return std::sqrt(-std::expm1(-x / p.sigma));
}

// 1 - z(x) computed without cancellation:
//   1 - z = exp(-x/sigma) / (1 + sqrt(1 - exp(-x/sigma))).
// Meaningful far beyond the point where coord_map rounds to 1.
inline double coord_map_complement(const PhysParams& p, double x) {
  validate(p);
  if (x < 0.0) throw DomainError("coord_map_complement: x must be non-negative");
  const double u = std::exp(-x / p.sigma);
  return u / (1.0 + std::sqrt(1.0 - u));
}

// Inverse transformation x(z) = -sigma ln(1 - z^2) on [0, 1).
inline double coord_inverse(const PhysParams& p, double z) {
  validate(p);
  if (!(z >= 0.0 && z < 1.0)) throw DomainError("coord_inverse: z must lie in [0,1)");
  return -p.sigma * std::log1p(-z * z);
}

// Inverse transformation in terms of the complement c = 1 - z on (0, 1].
// Since 1 - z^2 = c (2 - c), this stays accurate in the far tail where z
// itself is no longer representable below 1.
inline double coord_inverse_complement(const PhysParams& p, double c) {
  validate(p);
  if (!(c > 0.0 && c <= 1.0))
    throw DomainError("coord_inverse_complement: complement must lie in (0,1]");
  if (c < 0.5) return -p.sigma * std::log(c * (2.0 - c));
  const double z = 1.0 - c;  // exact: c >= 0.5
  return -p.sigma * std::log1p(-z * z);
}

// Overlay asymptotes of the V1 = -V0 well:
//   near the origin  V ~ -V0 / sqrt(x/sigma),
//   in the far field V ~ -(V0/2) exp(-x/sigma).
struct Asymptotes {
  double near_origin = 0.0;
  double far_field = 0.0;
};

inline Asymptotes asymptotes(const PhysParams& p, double x) {
  validate(p);
  if (p.V1 != -p.V0) throw DomainError("asymptotes: requires V1 = -V0");
  if (!(x > 0.0)) throw DomainError("asymptotes: x must be positive");
  return {-p.V0 / std::sqrt(x / p.sigma), -(p.V0 / 2.0) * std::exp(-x / p.sigma)};
}

}  // namespace sqrtwell
