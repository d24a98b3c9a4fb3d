#pragma once

// Generic adaptive Runge-Kutta integration (Cash-Karp 4(5) embedded pair)
// for small fixed-size real systems. Step size is controlled by the embedded
// error estimate against a purely relative tolerance; an optional observer
// runs after every accepted step and may rescale the state in place (used by
// shooting integrations to keep exponentially growing solutions in range).

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

#include "sqrtwell/errors.hpp"

namespace sqrtwell {

struct OdeOptions {
  double rtol = 1e-10;      // relative error target per step
  double h_init = 0.0;      // initial trial step (0 = span / 100)
  double h_max = std::numeric_limits<double>::infinity();  // step size cap
  std::size_t max_steps = 4000000;  // accepted + rejected attempts
};

// Integrates y' = f(x, y) from x0 to x1 (either direction), advancing y in
// place. f has signature f(double x, const std::array<double, N>& y,
// std::array<double, N>& dydx); observe(double x, std::array<double, N>& y)
// is invoked after each accepted step and may modify y.
template <std::size_t N, typename F, typename Obs>
void ode_integrate(F&& f, double x0, double x1, std::array<double, N>& y,
                   const OdeOptions& opt, Obs&& observe) {
  using A = std::array<double, N>;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 3.0 / 10.0, a42 = -9.0 / 10.0, a43 = 6.0 / 5.0;
  static constexpr double a51 = -11.0 / 54.0, a52 = 5.0 / 2.0,
                          a53 = -70.0 / 27.0, a54 = 35.0 / 27.0;
  static constexpr double a61 = 1631.0 / 55296.0, a62 = 175.0 / 512.0,
                          a63 = 575.0 / 13824.0, a64 = 44275.0 / 110592.0,
                          a65 = 253.0 / 4096.0;
  // 5th-order weights and the (5th - 4th) difference weights.
  static constexpr double c1 = 37.0 / 378.0, c3 = 250.0 / 621.0,
                          c4 = 125.0 / 594.0, c6 = 512.0 / 1771.0;
  static constexpr double e1 = c1 - 2825.0 / 27648.0, e3 = c3 - 18575.0 / 48384.0,
                          e4 = c4 - 13525.0 / 55296.0, e5 = -277.0 / 14336.0,
                          e6 = c6 - 1.0 / 4.0;

  const double span = std::fabs(x1 - x0);
  if (span == 0.0) return;
  if (!(opt.rtol > 0.0)) throw DomainError("ode_integrate: rtol must be positive");
  const double dir = (x1 >= x0) ? 1.0 : -1.0;
  double h = (opt.h_init > 0.0) ? opt.h_init : span / 100.0;
  h = std::min({h, opt.h_max, span});
  double x = x0;

  A k1, k2, k3, k4, k5, k6, yt, ynew;
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    h = std::min(h, std::fabs(x1 - x));
    const double hs = dir * h;

    f(x, y, k1);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + hs * a21 * k1[i];
    f(x + hs * a21, yt, k2);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
    f(x + hs * (3.0 / 10.0), yt, k3);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(x + hs * (3.0 / 5.0), yt, k4);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(x + hs, yt, k5);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                           a65 * k5[i]);
    f(x + hs * (7.0 / 8.0), yt, k6);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      ynew[i] = y[i] + hs * (c1 * k1[i] + c3 * k3[i] + c4 * k4[i] + c6 * k6[i]);
      const double di = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                              e6 * k6[i]);
      const double scale =
          std::fabs(y[i]) + std::fabs(hs * k1[i]) + std::numeric_limits<double>::min();
      err = std::max(err, std::fabs(di) / (opt.rtol * scale));
    }

    if (err <= 1.0 || h <= 1e-14 * span) {
      x += hs;
      y = ynew;
      observe(x, y);
      if (std::fabs(x1 - x) <= 1e-14 * span) return;
      const double grow = (err > 1e-30) ? 0.9 * std::pow(err, -0.2) : 5.0;
      h = std::min({h * std::min(5.0, grow), opt.h_max, span});
    } else {
      h *= std::max(0.1, 0.9 * std::pow(err, -0.25));
      if (!(h > 0.0) || !std::isfinite(h))
        throw NumericalError("ode_integrate: step size underflow");
    }
  }
  throw NumericalError("ode_integrate: accepted-step cap exceeded");
}

template <std::size_t N, typename F>
void ode_integrate(F&& f, double x0, double x1, std::array<double, N>& y,
                   const OdeOptions& opt = {}) {
  ode_integrate<N>(static_cast<F&&>(f), x0, x1, y, opt,
                   [](double, std::array<double, N>&) {});
}

}  // namespace sqrtwell
