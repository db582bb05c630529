#include "relaycast/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "relaycast/error.hpp"

namespace relaycast {
namespace {

// Kronrod abscissae and weights for the 15-point rule, with the embedded 7-point Gauss weights.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel kronrod_panel(const F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_center = f(center);

  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> f_left{};
  std::array<double, 7> f_right{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f_left[j] = f(center - dx);
    f_right[j] = f(center + dx);
    const double pair = f_left[j] + f_right[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f_left[j]) + std::abs(f_right[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_center - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f_left[j] - mean) + std::abs(f_right[j] - mean));
  }

  const double result = kronrod * half;
  const double res_abs = abs_sum * std::abs(half);
  const double res_asc = asc * std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && error != 0.0) {
    error = res_asc * std::min(1.0, std::pow(200.0 * error / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    error = std::max(50.0 * eps * res_abs, error);
  }
  return {lo, hi, result, error};
}

template <typename F>
IntegrationResult adaptive_kronrod(const F& f, double lo, double hi, const IntegrationOptions& opt) {
  std::priority_queue<Panel> heap;
  Panel first = kronrod_panel(f, lo, hi);
  if (!std::isfinite(first.value)) {
    throw Error(ErrorCode::domain_error, "integrand is not finite on the integration range");
  }
  double total = first.value;
  double total_error = first.error;
  double frozen_error = 0.0;
  int evaluations = 15;
  heap.push(first);

  auto converged = [&] {
    return total_error + frozen_error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  };

  int subdivisions = 0;
  while (!converged()) {
    if (heap.empty() || subdivisions >= opt.max_subdivisions) {
      std::ostringstream msg;
      msg << "adaptive quadrature did not converge after " << subdivisions
          << " subdivisions (estimate " << total << ", error bound " << total_error + frozen_error
          << ")";
      throw IntegrationError(total, total_error + frozen_error, msg.str());
    }
    const Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Cannot be split further in double precision; its error is irreducible.
      total_error -= worst.error;
      frozen_error += worst.error;
      continue;
    }
    const Panel left = kronrod_panel(f, worst.lo, mid);
    const Panel right = kronrod_panel(f, mid, worst.hi);
    evaluations += 30;
    ++subdivisions;
    if (!std::isfinite(left.value) || !std::isfinite(right.value)) {
      throw Error(ErrorCode::domain_error, "integrand is not finite on the integration range");
    }
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);

    // Refresh the running sums now and then so cancellation does not accumulate.
    if (subdivisions % 64 == 0) {
      auto copy = heap;
      total = 0.0;
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }
  return {total, total_error + frozen_error, evaluations};
}

}  // namespace

IntegrationResult integrate_with_error(ScalarFunction f, double lo, double hi,
                                       const IntegrationOptions& options) {
  if (!(options.rel_tol > 0.0)) {
    throw Error(ErrorCode::domain_error, "rel_tol must be positive");
  }
  if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo)) {
    throw Error(ErrorCode::domain_error, "integration limits must be finite (upper may be +inf)");
  }
  if (lo == hi) return {};
  if (lo > hi) {
    throw Error(ErrorCode::domain_error, "integration requires lo < hi");
  }
  if (std::isinf(hi)) {
    auto mapped = [&](double t) {
      if (t <= 0.0) return 0.0;
      const double x = lo + (1.0 - t) / t;
      return f(x) / (t * t);
    };
    return adaptive_kronrod(mapped, 0.0, 1.0, options);
  }
  auto direct = [&](double x) { return f(x); };
  return adaptive_kronrod(direct, lo, hi, options);
}

Bracket::Bracket(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo < hi)) {
    std::ostringstream msg;
    msg << "bracket requires lo < hi (got [" << lo << ", " << hi << "])";
    throw Error(ErrorCode::domain_error, msg.str());
  }
}

double find_root(ScalarFunction g, const Bracket& bracket, double abs_tol) {
  if (!(abs_tol > 0.0)) throw Error(ErrorCode::domain_error, "abs_tol must be positive");
  double a = bracket.lo();
  double b = bracket.hi();
  double fa = g(a);
  double fb = g(b);
  if (std::isnan(fa) || std::isnan(fb)) {
    throw Error(ErrorCode::domain_error, "root function is NaN at the bracket ends");
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    std::ostringstream msg;
    msg << "root not bracketed: g(" << a << ") = " << fa << ", g(" << b << ") = " << fb;
    throw Error(ErrorCode::root_not_bracketed, msg.str());
  }

  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < 500; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * abs_tol;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = g(b);
    if (std::isnan(fb)) throw Error(ErrorCode::domain_error, "root function returned NaN");
  }
  return b;
}

double find_root_expanding(ScalarFunction g, double lo, double hi, double abs_tol, double factor,
                           int max_expansions) {
  const double g_lo = g(lo);
  double upper = hi;
  for (int i = 0; i < max_expansions; ++i) {
    const double g_hi = g(upper);
    if (g_hi == 0.0) return upper;
    if ((g_hi > 0.0) != (g_lo > 0.0)) return find_root(g, Bracket(lo, upper), abs_tol);
    upper = lo + factor * (upper - lo);
    if (!std::isfinite(upper)) break;
  }
  throw Error(ErrorCode::root_not_bracketed, "no sign change found while expanding bracket");
}

double minimize_golden(ScalarFunction f, double lo, double hi, double abs_tol) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 400 && b - a > abs_tol; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

}  // namespace relaycast
