#pragma once

// Shared numeric helpers: compensated summation, phase reduction, sin(pi w)
// with argument reduction, grid builders, composite quadrature on non-uniform
// meshes, bracketed root refinement, and a small deterministic parallel map.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "sqrtwell/errors.hpp"

namespace sqrtwell {

inline constexpr double pi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Compensated (Kahan) summation; works for double and std::complex<double>.
// ---------------------------------------------------------------------------
template <typename T>
class KahanSum {
 public:
  void add(const T& x) {
    const T y = x - c_;
    const T t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  const T& value() const { return s_; }

 private:
  T s_{};
  T c_{};
};

// ---------------------------------------------------------------------------
// Phase reduction to the half-open interval (-pi/2, pi/2].
// ---------------------------------------------------------------------------
inline double reduce_phase(double phi) {
  double r = std::remainder(phi, pi);  // r in [-pi/2, pi/2]
  if (r <= -0.5 * pi) r += pi;         // left endpoint folds to +pi/2
  return r;
}

// ---------------------------------------------------------------------------
// sin(pi w) with argument reduction on the real part; accurate near the
// integers, where the naive std::sin(pi * w) loses all precision.
// ---------------------------------------------------------------------------
inline std::complex<double> sinpi(std::complex<double> w) {
  const double n = std::round(w.real());
  const std::complex<double> r(w.real() - n, w.imag());
  std::complex<double> s = std::sin(pi * r);
  if (std::fmod(std::fabs(n), 2.0) == 1.0) s = -s;
  return s;
}

inline double sinpi(double x) { return sinpi(std::complex<double>(x, 0.0)).real(); }

// ---------------------------------------------------------------------------
// Grid builders.
// ---------------------------------------------------------------------------
inline std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw DomainError("linspace: need at least two points");
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1);
  x.back() = b;
  return x;
}

// Geometric progression from a to b; both must be positive.
inline std::vector<double> logspace(double a, double b, int n) {
  if (a <= 0.0 || b <= 0.0) throw DomainError("logspace: endpoints must be positive");
  if (n < 2) throw DomainError("logspace: need at least two points");
  const double la = std::log(a), lb = std::log(b);
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    x[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));
  x.front() = a;
  x.back() = b;
  return x;
}

// Graded mesh on [0, x_max]: points go like k^2 out to x_knee (resolving an
// integrable inverse-square-root singularity at the origin), uniform beyond.
inline std::vector<double> graded_mesh(double x_max, double x_knee, int n_graded,
                                       int n_uniform) {
  if (!(x_max > 0.0) || !(x_knee > 0.0) || x_knee > x_max)
    throw DomainError("graded_mesh: need 0 < x_knee <= x_max");
  std::vector<double> x;
  x.reserve(static_cast<size_t>(n_graded + n_uniform) + 1);
  for (int k = 1; k <= n_graded; ++k) {
    const double t = static_cast<double>(k) / n_graded;
    x.push_back(x_knee * t * t);
  }
  if (x_max > x_knee) {
    const double h = (x_max - x_knee) / n_uniform;
    for (int k = 1; k <= n_uniform; ++k) x.push_back(x_knee + h * k);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Composite Simpson quadrature on a (possibly non-uniform) strictly
// increasing mesh. Fits a parabola through each consecutive point triple;
// an odd final interval is handled with the asymmetric three-point rule.
// ---------------------------------------------------------------------------
inline double simpson_nonuniform(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const size_t n = x.size();
  if (n != y.size() || n < 2) throw DomainError("simpson_nonuniform: bad input sizes");
  if (n == 2) return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
  KahanSum<double> acc;
  size_t i = 0;
  while (i + 2 < n) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    if (h0 <= 0.0 || h1 <= 0.0) throw DomainError("simpson_nonuniform: mesh not increasing");
    const double hs = h0 + h1;
    acc.add(hs / 6.0 * ((2.0 - h1 / h0) * y[i] + hs * hs / (h0 * h1) * y[i + 1] +
                        (2.0 - h0 / h1) * y[i + 2]));
    i += 2;
  }
  if (i + 2 == n) {
    // One interval left: integrate the parabola through the last three points
    // over the final interval only.
    const double h0 = x[n - 2] - x[n - 3];
    const double h1 = x[n - 1] - x[n - 2];
    acc.add((2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1)) * y[n - 1] +
            (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0) * y[n - 2] -
            h1 * h1 * h1 / (6.0 * h0 * (h0 + h1)) * y[n - 3]);
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// Bracketed root refinement: bisection to a coarse width, then secant polish
// with a bisection fallback whenever an iterate leaves the bracket.
// ---------------------------------------------------------------------------
template <typename F>
double refine_root(F&& f, double a, double fa, double b, double fb, double coarse_tol,
                   double tol, int max_iterations = 200) {
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0))
    throw DomainError("refine_root: endpoints do not bracket a sign change");
  int it = 0;
  while (std::fabs(b - a) > coarse_tol && it++ < max_iterations) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  // Secant polish inside [a, b].
  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  for (; it < max_iterations; ++it) {
    if (f1 == f0) break;
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 > std::min(a, b) && x2 < std::max(a, b))) x2 = 0.5 * (a + b);
    const double f2 = f(x2);
    if ((f2 > 0.0) == (fa > 0.0)) {
      a = x2;
      fa = f2;
    } else {
      b = x2;
      fb = f2;
    }
    if (std::fabs(x2 - x1) <= tol * std::max(1.0, std::fabs(x2)) || f2 == 0.0) return x2;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
  }
  return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Parallelism cap: hardware concurrency clipped by the SQRTWELL_THREADS
// environment variable (values < 1 mean serial execution).
// ---------------------------------------------------------------------------
inline int thread_limit() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("SQRTWELL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v < 1024) n = std::min(n, static_cast<int>(v));
    if (end != env && v < 1) n = 1;
  }
  return n;
}

// Ordered parallel map: calls f(i) for i in [0, n). The callable writes its
// result into caller-owned storage indexed by i, so the outcome is identical
// to serial execution regardless of the thread count or schedule. The first
// exception thrown by any worker is rethrown to the caller.
template <typename F>
void parallel_for(int n, F&& f) {
  const int workers = std::min(thread_limit(), std::max(n, 1));
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int i = w; i < n; i += workers) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace sqrtwell
