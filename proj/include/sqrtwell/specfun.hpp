#pragma once

// Self-contained complex special functions: complex gamma (with reciprocal),
// the Gauss hypergeometric series 2F1 (plain and regularized by 1/Gamma(c)),
// and the Clausen series 3F2.  All hypergeometric evaluations use the direct
// power series with a rigorous geometric tail bound; arguments are restricted
// to |w| <= 0.75 where that strategy converges comfortably.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include "sqrtwell/errors.hpp"
#include "sqrtwell/util.hpp"

namespace sqrtwell {

using Complex = std::complex<double>;

// Bookkeeping returned with every series evaluation.  On success tail_bound
// is a rigorous upper bound on the truncation error and lies below the
// requested relative tolerance times the magnitude of the sum.
struct SeriesDiagnostics {
  std::size_t terms_used = 0;
  double tail_bound = 0.0;
  double max_term_magnitude = 0.0;
};

struct SeriesResult {
  Complex value{};
  SeriesDiagnostics diag{};
};

namespace detail {

inline constexpr double kPoleWindow = 1e-12;

// True when w lies within eps of a non-positive integer; reports which one.
inline bool near_nonpositive_integer(const Complex& w, double eps,
                                     long* which = nullptr) {
  const double n = std::round(w.real());
  if (n > 0.5) return false;
  if (std::abs(w - Complex(n, 0.0)) > eps) return false;
  if (which) *which = static_cast<long>(n);
  return true;
}

// Lanczos rational approximation (g = 607/128, 15 coefficients), accurate to
// better than 1e-13 relative for Re w >= 1/2.
inline Complex gamma_lanczos(const Complex& w) {
  constexpr double kG = 607.0 / 128.0;
  constexpr double kCoeff[15] = {
      0.99999999999999709182,     57.156235665862923517,
      -59.597960355475491248,     14.136097974741747174,
      -0.49191381609762019978,    3.3994649984811888699e-5,
      4.6523628927048575665e-5,   -9.8374475304879564677e-5,
      1.5808870322491248884e-4,   -2.1026444172410488319e-4,
      2.1743961811521264320e-4,   -1.6431810653676389022e-4,
      8.4418223983852743293e-5,   -2.6190838401581408670e-5,
      3.6899182659531622704e-6,
  };
  Complex s(kCoeff[0], 0.0);
  for (int k = 1; k < 15; ++k) s += kCoeff[k] / (w + Complex(k - 1, 0.0));
  const Complex t = w + Complex(kG - 0.5, 0.0);
  // Fold the power into the exponential to limit intermediate overflow.
  return std::sqrt(2.0 * pi) *
         std::exp((w - Complex(0.5, 0.0)) * std::log(t) - t) * s;
}

}  // namespace detail

// Complex gamma function.  Reflection is used for Re w < 1/2; arguments
// within 1e-12 of a non-positive integer are reported as poles.
inline Complex cgamma(const Complex& w) {
  long n = 0;
  if (detail::near_nonpositive_integer(w, detail::kPoleWindow, &n))
    throw PoleError("cgamma: argument at non-positive integer " +
                        std::to_string(n),
                    w);
  if (w.real() < 0.5)
    return pi / (sinpi(w) * detail::gamma_lanczos(Complex(1.0, 0.0) - w));
  return detail::gamma_lanczos(w);
}

// Reciprocal gamma 1/Gamma(w).  Entire: evaluates to exactly zero at
// non-positive integers instead of raising, which is what the regularized
// hypergeometric series relies on.
inline Complex rgamma(const Complex& w) {
  if (w.real() < 0.5)
    return sinpi(w) * detail::gamma_lanczos(Complex(1.0, 0.0) - w) / pi;
  return Complex(1.0, 0.0) / detail::gamma_lanczos(w);
}

// Gauss hypergeometric 2F1(a,b;c;w) by direct series.
inline SeriesResult hyp2f1(const Complex& a, const Complex& b, const Complex& c,
                           double w, double tol = 1e-12,
                           std::size_t max_terms = 10000) {
  if (!(w >= 0.0 && w <= 0.75))
    throw DomainError("hyp2f1: argument must lie in [0, 0.75]");
  if (!(tol > 0.0)) throw DomainError("hyp2f1: tolerance must be positive");
  if (detail::near_nonpositive_integer(c, detail::kPoleWindow))
    throw PoleError("hyp2f1: lower parameter at non-positive integer", c);

  KahanSum<Complex> sum;
  SeriesDiagnostics diag;
  Complex t(1.0, 0.0);
  const double amag = std::abs(a), bmag = std::abs(b), cmag = std::abs(c);
  bool prev_small = false;
  for (std::size_t n = 0; n < max_terms; ++n) {
    sum.add(t);
    diag.terms_used = n + 1;
    const double tn = std::abs(t);
    diag.max_term_magnitude = std::max(diag.max_term_magnitude, tn);
    if (tn == 0.0) {  // terminating series (upper parameter hit an integer)
      diag.tail_bound = 0.0;
      return {sum.value(), diag};
    }
    const double scale =
        std::max(std::abs(sum.value()), std::numeric_limits<double>::min());
    const double nd = static_cast<double>(n);
    if (nd >= cmag + 2.0 && nd >= 2.0) {
      // For every m >= n the term ratio is bounded by this rho, so the
      // remainder after term n is geometric.
      const double rho =
          w * (1.0 + amag / nd) * (1.0 + bmag / nd) / (1.0 - cmag / nd);
      if (rho > 0.0 && rho < 1.0) {
        const double tail = tn * rho / (1.0 - rho);
        diag.tail_bound = tail;
        if (tail <= tol * scale && tn <= tol * scale && prev_small)
          return {sum.value(), diag};
      }
    }
    prev_small = tn <= tol * scale;
    t *= (a + Complex(nd, 0.0)) * (b + Complex(nd, 0.0)) * w /
         ((c + Complex(nd, 0.0)) * (nd + 1.0));
  }
  throw ConvergenceError("hyp2f1: tail bound not met within term cap");
}

// Regularized Gauss function F~ = 2F1(a,b;c;w)/Gamma(c), summed term-by-term
// against 1/Gamma(c+n) so the result is analytic in c, including at
// non-positive integers where the leading terms vanish.
inline SeriesResult hyp2f1_regularized(const Complex& a, const Complex& b,
                                       const Complex& c, double w,
                                       double tol = 1e-12,
                                       std::size_t max_terms = 10000) {
  if (!(std::abs(w) <= 0.75))
    throw DomainError("hyp2f1_regularized: argument must satisfy |w| <= 0.75");
  if (!(tol > 0.0))
    throw DomainError("hyp2f1_regularized: tolerance must be positive");

  // While Re(c+n) < 1 the factor 1/Gamma(c+n) may sit at or near a pole, so
  // those leading terms are assembled directly from the reciprocal gamma.
  // Beyond that point the plain multiplicative term recurrence is safe.
  std::size_t n_direct = 0;
  if (c.real() < 1.0)
    n_direct = static_cast<std::size_t>(std::ceil(1.0 - c.real()));

  KahanSum<Complex> sum;
  SeriesDiagnostics diag;
  Complex p(1.0, 0.0);  // (a)_n (b)_n w^n / n!
  Complex t = rgamma(c);
  const double aw = std::abs(w);
  const double amag = std::abs(a), bmag = std::abs(b), cmag = std::abs(c);
  bool prev_small = false;
  for (std::size_t n = 0; n < max_terms; ++n) {
    sum.add(t);
    diag.terms_used = n + 1;
    const double tn = std::abs(t);
    diag.max_term_magnitude = std::max(diag.max_term_magnitude, tn);
    const double scale =
        std::max(std::abs(sum.value()), std::numeric_limits<double>::min());
    // A zero term only ends the series when the Pochhammer prefactor itself
    // vanished; a zero from 1/Gamma at a pole of the leading terms does not.
    if (tn == 0.0 && (std::abs(p) == 0.0 || n >= n_direct)) {
      diag.tail_bound = 0.0;
      return {sum.value(), diag};
    }
    const double nd = static_cast<double>(n);
    if (tn > 0.0 && nd >= cmag + 2.0 && nd >= 2.0) {
      const double rho =
          aw * (1.0 + amag / nd) * (1.0 + bmag / nd) / (1.0 - cmag / nd);
      if (rho > 0.0 && rho < 1.0) {
        const double tail = tn * rho / (1.0 - rho);
        diag.tail_bound = tail;
        if (tail <= tol * scale && tn <= tol * scale && prev_small)
          return {sum.value(), diag};
      }
    }
    prev_small = tn <= tol * scale;
    if (n < n_direct) {
      p *= (a + Complex(nd, 0.0)) * (b + Complex(nd, 0.0)) * w / (nd + 1.0);
      t = p * rgamma(c + Complex(nd + 1.0, 0.0));
    } else {
      t *= (a + Complex(nd, 0.0)) * (b + Complex(nd, 0.0)) * w /
           ((c + Complex(nd, 0.0)) * (nd + 1.0));
    }
  }
  throw ConvergenceError(
      "hyp2f1_regularized: tail bound not met within term cap");
}

// Clausen hypergeometric 3F2(a1,a2,a3;b1,b2;w) by direct series.  A lower
// parameter at a non-positive integer is a pole unless an upper parameter
// terminates the series strictly before the pole index is reached.
inline SeriesResult hyp3f2(const Complex& a1, const Complex& a2,
                           const Complex& a3, const Complex& b1,
                           const Complex& b2, double w, double tol = 1e-12,
                           std::size_t max_terms = 10000) {
  if (!(w >= 0.0 && w <= 0.75))
    throw DomainError("hyp3f2: argument must lie in [0, 0.75]");
  if (!(tol > 0.0)) throw DomainError("hyp3f2: tolerance must be positive");

  long stop_after = -1;  // index of the last non-zero term, if terminating
  for (const Complex* u : {&a1, &a2, &a3}) {
    long k = 0;
    if (detail::near_nonpositive_integer(*u, detail::kPoleWindow, &k)) {
      const long idx = -k;
      if (stop_after < 0 || idx < stop_after) stop_after = idx;
    }
  }
  for (const Complex* l : {&b1, &b2}) {
    long k = 0;
    if (detail::near_nonpositive_integer(*l, detail::kPoleWindow, &k)) {
      const long pole_idx = -k;  // the factor (l + n) vanishes at n = pole_idx
      if (stop_after < 0 || stop_after >= pole_idx)
        throw PoleError("hyp3f2: lower parameter at non-positive integer", *l);
    }
  }

  KahanSum<Complex> sum;
  SeriesDiagnostics diag;
  Complex t(1.0, 0.0);
  const double a1m = std::abs(a1), a2m = std::abs(a2), a3m = std::abs(a3);
  const double b1m = std::abs(b1), b2m = std::abs(b2);
  const double bmax = std::max(b1m, b2m);
  bool prev_small = false;
  for (std::size_t n = 0; n < max_terms; ++n) {
    sum.add(t);
    diag.terms_used = n + 1;
    const double tn = std::abs(t);
    diag.max_term_magnitude = std::max(diag.max_term_magnitude, tn);
    if (tn == 0.0 || (stop_after >= 0 && static_cast<long>(n) == stop_after)) {
      diag.tail_bound = 0.0;
      return {sum.value(), diag};
    }
    const double scale =
        std::max(std::abs(sum.value()), std::numeric_limits<double>::min());
    const double nd = static_cast<double>(n);
    if (nd >= bmax + 2.0 && nd >= 2.0) {
      const double rho = w * (1.0 + a1m / nd) * (1.0 + a2m / nd) *
                         (1.0 + a3m / nd) /
                         ((1.0 - b1m / nd) * (1.0 - b2m / nd));
      if (rho > 0.0 && rho < 1.0) {
        const double tail = tn * rho / (1.0 - rho);
        diag.tail_bound = tail;
        if (tail <= tol * scale && tn <= tol * scale && prev_small)
          return {sum.value(), diag};
      }
    }
    prev_small = tn <= tol * scale;
    t *= (a1 + Complex(nd, 0.0)) * (a2 + Complex(nd, 0.0)) *
         (a3 + Complex(nd, 0.0)) * w /
         ((b1 + Complex(nd, 0.0)) * (b2 + Complex(nd, 0.0)) * (nd + 1.0));
  }
  throw ConvergenceError("hyp3f2: tail bound not met within term cap");
}

}  // namespace sqrtwell
