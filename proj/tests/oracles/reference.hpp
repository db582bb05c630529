#pragma once

#include <cmath>
#include <functional>

// Deliberately plain reference methods, kept apart from the library kernels.
namespace relaycast::oracle {

inline double bisect(const std::function<double(double)>& g, double lo, double hi,
                     double tol = 1e-14) {
  double g_lo = g(lo);
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g_mid = g(mid);
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  if (n % 2 == 1) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

/// Richardson-extrapolated Simpson: two resolutions combined.
inline double simpson_fine(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double coarse = simpson(f, a, b, n);
  const double fine = simpson(f, a, b, 2 * n);
  return fine + (fine - coarse) / 15.0;
}

/// Newton iteration on w e^w - x = 0.
inline double lambert_w_newton(double x) {
  double w = x < 1.0 ? x : std::log(x);
  for (int i = 0; i < 200; ++i) {
    const double e = std::exp(w);
    const double step = (w * e - x) / (e * (w + 1.0));
    w -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

}  // namespace relaycast::oracle
