#pragma once

// Maps a physical parameter set and an energy to the parameters of a general
// Heun equation with regular singularities at z = 0, 1, -1 (the origin being
// merely apparent), and evaluates the two fundamental solutions u1, u2 around
// z = -1 and z = +1, in two algebraically equivalent forms each:
//
//   * a single 3F2 series (the "clausen" form), and
//   * an irreducible combination of two Gauss 2F1 functions (the "combo"
//     form), related by a constant factor (alpha2-alpha1)/(alpha2+alpha1).
//
// A third, "scaled", form divides the combo by Gamma of its lower parameter
// so it stays finite when that parameter degenerates to a non-positive
// integer; root finders use it to pass smoothly through such energies.

#include <cmath>
#include <complex>

#include "sqrtwell/errors.hpp"
#include "sqrtwell/model.hpp"
#include "sqrtwell/specfun.hpp"

namespace sqrtwell {

struct HeunParams {
  Complex gamma_h{};    // always -1
  Complex delta_h{};    // 1 + 2 alpha2
  Complex epsilon_h{};  // 1 + 2 alpha1
  Complex alpha_h{};
  Complex beta_h{};
  Complex q_h{};        // accessory parameter, alpha2 - alpha1
  double a_sing = -1.0; // third finite singularity
  Complex alpha1{};
  Complex alpha2{};
  double E = 0.0;
};

struct SolutionCoefficients {
  Complex c1{};
  Complex c2{};
};

namespace detail {

inline constexpr double kDegeneracyWindow = 1e-10;

// Principal square root of a real number; the +0.0 imaginary part keeps
// negative reals on the upper side of the branch cut (Im >= 0).
inline Complex sqrt_principal(double x) { return std::sqrt(Complex(x, 0.0)); }

// True when w lies within eps of an integer not exceeding `upper`.
inline bool near_integer_at_most(const Complex& w, long upper, double eps) {
  const double n = std::round(w.real());
  if (n > static_cast<double>(upper) + 0.5) return false;
  return std::abs(w - Complex(n, 0.0)) <= eps;
}

// Degeneracy gate for a 3F2 parameter set: a lower parameter within the
// window of a non-positive integer is fatal unless an upper parameter
// terminates the series strictly before the pole index.
inline void gate_clausen(const Complex& a1, const Complex& a2,
                         const Complex& a3, const Complex& b1,
                         const Complex& b2, const char* who) {
  long stop_after = -1;
  for (const Complex* u : {&a1, &a2, &a3}) {
    long k = 0;
    if (near_nonpositive_integer(*u, kDegeneracyWindow, &k)) {
      const long idx = -k;
      if (stop_after < 0 || idx < stop_after) stop_after = idx;
    }
  }
  for (const Complex* l : {&b1, &b2}) {
    long k = 0;
    if (near_nonpositive_integer(*l, kDegeneracyWindow, &k)) {
      const long pole_idx = -k;
      if (stop_after < 0 || stop_after >= pole_idx)
        throw DegeneracyError(std::string(who) +
                              ": lower series parameter degenerates to a "
                              "non-positive integer");
    }
  }
}

inline void require_u1_range(double z) {
  if (!(z >= -1.0 && z <= 0.5))
    throw DomainError("u1 branch: z must lie in [-1, 0.5]");
}

inline void require_u2_range(double z) {
  if (!(z >= -0.5 && z <= 1.0))
    throw DomainError("u2 branch: z must lie in [-0.5, 1]");
}

inline Complex combo_denominator(const HeunParams& h, const char* who) {
  const Complex d = h.alpha1 + h.alpha2;
  if (std::abs(d) < kDegeneracyWindow)
    throw DegeneracyError(std::string(who) + ": alpha1 + alpha2 vanishes");
  return d;
}

inline Complex clausen_ratio(const HeunParams& h, const char* who) {
  if (std::abs(h.q_h) < kDegeneracyWindow)
    throw DegeneracyError(std::string(who) +
                          ": accessory parameter q vanishes");
  return h.alpha_h * h.beta_h / h.q_h;  // equals -q up to rounding
}

}  // namespace detail

// Builds the Heun parameter set for energy E.  sign1 and sign2 select the
// branches of the exponents alpha1, alpha2 on top of the principal root.
inline HeunParams map_to_heun(const PhysParams& p, double E, int sign1 = 1,
                              int sign2 = 1) {
  validate(p);
  if (sign1 * sign1 != 1 || sign2 * sign2 != 1)
    throw DomainError("map_to_heun: sign selectors must be +1 or -1");
  const double c2 = p.coupling();
  const Complex a1 =
      static_cast<double>(sign1) *
      detail::sqrt_principal(c2 * (-E + p.V0 - p.V1));
  const Complex a2 =
      static_cast<double>(sign2) *
      detail::sqrt_principal(c2 * (-E + p.V0 + p.V1));
  const Complex s = detail::sqrt_principal(4.0 * c2 * (-E + p.V0));
  HeunParams h;
  h.gamma_h = Complex(-1.0, 0.0);
  h.delta_h = Complex(1.0, 0.0) + 2.0 * a2;
  h.epsilon_h = Complex(1.0, 0.0) + 2.0 * a1;
  h.alpha_h = a1 + a2 + s;
  h.beta_h = a1 + a2 - s;
  h.q_h = a2 - a1;
  h.a_sing = -1.0;
  h.alpha1 = a1;
  h.alpha2 = a2;
  h.E = E;
  return h;
}

// Scaled residual of the condition that makes z = 0 an apparent (rather than
// logarithmic) singularity; identically zero for mapped parameters.
inline double apparent_singularity_check(const HeunParams& h) {
  const Complex ab = h.alpha_h * h.beta_h;
  const Complex res = h.q_h * h.q_h +
                      h.q_h * (h.epsilon_h - Complex(1.0, 0.0) +
                               h.a_sing * (h.delta_h - Complex(1.0, 0.0))) +
                      h.a_sing * ab;
  const double scale =
      std::max({1.0, std::norm(h.q_h), std::abs(ab)});
  return std::abs(res) / scale;
}

// ---------------------------------------------------------------------------
// u1: the solution attached to z = -1, analytic for z in [-1, 0.5].
// ---------------------------------------------------------------------------

// Single-series form.
inline Complex u1_clausen(const HeunParams& h, double z) {
  detail::require_u1_range(z);
  const Complex r = detail::clausen_ratio(h, "u1_clausen");
  const Complex one(1.0, 0.0);
  detail::gate_clausen(h.alpha_h, h.beta_h, one + r, r, h.epsilon_h,
                       "u1_clausen");
  return hyp3f2(h.alpha_h, h.beta_h, one + r, r, h.epsilon_h, (1.0 + z) / 2.0)
      .value;
}

inline Complex du1_clausen_dz(const HeunParams& h, double z) {
  detail::require_u1_range(z);
  const Complex r = detail::clausen_ratio(h, "du1_clausen_dz");
  const Complex one(1.0, 0.0);
  detail::gate_clausen(h.alpha_h + one, h.beta_h + one, Complex(2.0, 0.0) + r,
                       one + r, h.epsilon_h + one, "du1_clausen_dz");
  const Complex pref =
      h.alpha_h * h.beta_h * (one + r) / (r * h.epsilon_h) * 0.5;
  return pref * hyp3f2(h.alpha_h + one, h.beta_h + one, Complex(2.0, 0.0) + r,
                       one + r, h.epsilon_h + one, (1.0 + z) / 2.0)
                    .value;
}

// Two-term Gauss form; equals (q/(alpha1+alpha2)) * u1_clausen.
inline Complex u1_gauss_combo(const HeunParams& h, double z) {
  detail::require_u1_range(z);
  if (detail::near_integer_at_most(h.epsilon_h, 1, detail::kDegeneracyWindow))
    throw DegeneracyError(
        "u1_gauss_combo: epsilon is unity, zero, or a negative integer");
  const Complex d = detail::combo_denominator(h, "u1_gauss_combo");
  const double w = (1.0 + z) / 2.0;
  const Complex one(1.0, 0.0);
  return hyp2f1(h.alpha_h, h.beta_h, h.epsilon_h, w).value -
         2.0 * h.alpha1 / d *
             hyp2f1(h.alpha_h, h.beta_h, h.epsilon_h - one, w).value;
}

// Combo divided by Gamma(epsilon); finite for every epsilon.
inline Complex u1_scaled(const HeunParams& h, double z) {
  detail::require_u1_range(z);
  const Complex d = detail::combo_denominator(h, "u1_scaled");
  const double w = (1.0 + z) / 2.0;
  const Complex one(1.0, 0.0);
  return hyp2f1_regularized(h.alpha_h, h.beta_h, h.epsilon_h, w).value -
         hyp2f1_regularized(h.alpha_h, h.beta_h, h.epsilon_h - one, w).value /
             d;
}

inline Complex du1_scaled_dz(const HeunParams& h, double z) {
  detail::require_u1_range(z);
  const Complex d = detail::combo_denominator(h, "du1_scaled_dz");
  const double w = (1.0 + z) / 2.0;
  const Complex one(1.0, 0.0);
  const Complex ab = h.alpha_h * h.beta_h;
  return 0.5 * ab *
         (hyp2f1_regularized(h.alpha_h + one, h.beta_h + one,
                             h.epsilon_h + one, w)
              .value -
          hyp2f1_regularized(h.alpha_h + one, h.beta_h + one, h.epsilon_h, w)
                  .value /
              d);
}

// ---------------------------------------------------------------------------
// u2: the solution attached to z = +1, analytic for z in [-0.5, 1].
// ---------------------------------------------------------------------------

inline Complex u2_clausen(const HeunParams& h, double z) {
  detail::require_u2_range(z);
  const Complex r = detail::clausen_ratio(h, "u2_clausen");
  const Complex one(1.0, 0.0);
  detail::gate_clausen(h.alpha_h, h.beta_h, one - r, -r, h.delta_h,
                       "u2_clausen");
  return hyp3f2(h.alpha_h, h.beta_h, one - r, -r, h.delta_h, (1.0 - z) / 2.0)
      .value;
}

inline Complex du2_clausen_dz(const HeunParams& h, double z) {
  detail::require_u2_range(z);
  const Complex r = detail::clausen_ratio(h, "du2_clausen_dz");
  const Complex one(1.0, 0.0);
  detail::gate_clausen(h.alpha_h + one, h.beta_h + one, Complex(2.0, 0.0) - r,
                       one - r, h.delta_h + one, "du2_clausen_dz");
  const Complex pref =
      -h.alpha_h * h.beta_h * (one - r) / (-r * h.delta_h) * 0.5;
  return pref * hyp3f2(h.alpha_h + one, h.beta_h + one, Complex(2.0, 0.0) - r,
                       one - r, h.delta_h + one, (1.0 - z) / 2.0)
                    .value;
}

// Two-term Gauss form; equals (-q/(alpha1+alpha2)) * u2_clausen.
inline Complex u2_gauss_combo(const HeunParams& h, double z) {
  detail::require_u2_range(z);
  if (detail::near_integer_at_most(h.delta_h, 1, detail::kDegeneracyWindow))
    throw DegeneracyError(
        "u2_gauss_combo: delta is unity, zero, or a negative integer");
  const Complex d = detail::combo_denominator(h, "u2_gauss_combo");
  const double w = (1.0 - z) / 2.0;
  const Complex one(1.0, 0.0);
  return hyp2f1(h.alpha_h, h.beta_h, h.delta_h, w).value -
         2.0 * h.alpha2 / d *
             hyp2f1(h.alpha_h, h.beta_h, h.delta_h - one, w).value;
}

// Combo divided by Gamma(delta); finite for every delta.
inline Complex u2_scaled(const HeunParams& h, double z) {
  detail::require_u2_range(z);
  const Complex d = detail::combo_denominator(h, "u2_scaled");
  const double w = (1.0 - z) / 2.0;
  const Complex one(1.0, 0.0);
  return hyp2f1_regularized(h.alpha_h, h.beta_h, h.delta_h, w).value -
         hyp2f1_regularized(h.alpha_h, h.beta_h, h.delta_h - one, w).value / d;
}

inline Complex du2_scaled_dz(const HeunParams& h, double z) {
  detail::require_u2_range(z);
  const Complex d = detail::combo_denominator(h, "du2_scaled_dz");
  const double w = (1.0 - z) / 2.0;
  const Complex one(1.0, 0.0);
  const Complex ab = h.alpha_h * h.beta_h;
  return -0.5 * ab *
         (hyp2f1_regularized(h.alpha_h + one, h.beta_h + one, h.delta_h + one,
                             w)
              .value -
          hyp2f1_regularized(h.alpha_h + one, h.beta_h + one, h.delta_h, w)
                  .value /
              d);
}

// ---------------------------------------------------------------------------
// Full solution of the original second-order problem in the mapped variable,
// with the clausen-normalized basis:
//   psi(z) = (1+z)^alpha1 (1-z)^alpha2 (c1 u1 + c2 u2),  z in (0,1).
// The constant phase of the textbook (z-1)^alpha2 factor is absorbed into
// the coefficients, keeping bound-state solutions real.
// ---------------------------------------------------------------------------
inline Complex general_solution(const HeunParams& h,
                                const SolutionCoefficients& coeffs, double z) {
  if (!(z > 0.0 && z < 1.0))
    throw DomainError("general_solution: z must lie strictly inside (0,1)");
  if (std::abs(coeffs.c1) == 0.0 && std::abs(coeffs.c2) == 0.0)
    throw DomainError("general_solution: coefficients must not both vanish");
  Complex acc(0.0, 0.0);
  if (std::abs(coeffs.c1) != 0.0) acc += coeffs.c1 * u1_clausen(h, z);
  if (std::abs(coeffs.c2) != 0.0) acc += coeffs.c2 * u2_clausen(h, z);
  const Complex pref = std::pow(Complex(1.0 + z, 0.0), h.alpha1) *
                       std::pow(Complex(1.0 - z, 0.0), h.alpha2);
  return pref * acc;
}

}  // namespace sqrtwell
