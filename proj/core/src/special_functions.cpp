#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "relaycast/error.hpp"
#include "relaycast/numerics.hpp"

namespace relaycast {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxTerms = 100000;

double halley_refine(double x, double w) {
  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double residual = w * ew - x;
    if (residual == 0.0) return w;
    const double wp1 = w + 1.0;
    const double step = residual / (ew * wp1 - (w + 2.0) * residual / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 4.0 * kEps * (1.0 + std::abs(w))) break;
  }
  return w;
}

// gamma(a, x) / (x^a e^-x), the lower incomplete gamma series, a > 0.
double lower_gamma_series_sum(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) return sum;
  }
  throw Error(ErrorCode::domain_error, "incomplete gamma series did not converge");
}

// Legendre continued fraction for Gamma(a, x) / (x^a e^-x), modified Lentz.
double upper_gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = std::abs(b) < kTiny ? 1.0 / kTiny : 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  throw Error(ErrorCode::domain_error, "incomplete gamma continued fraction did not converge");
}

double power_times_exp(double s, double x) { return std::exp(s * std::log(x) - x); }

}  // namespace

double lambert_w(double x) {
  constexpr double branch_point = -1.0 / std::numbers::e;
  if (std::isnan(x)) throw Error(ErrorCode::domain_error, "lambert_w of NaN");
  if (x < branch_point) {
    // Accept values a few ulps below -1/e as the branch point itself.
    if (x >= branch_point * (1.0 + 8.0 * kEps)) return -1.0;
    std::ostringstream msg;
    msg << "lambert_w requires x >= -1/e (got " << x << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w;
  if (x < -0.32) {
    const double p = std::sqrt(2.0 * (std::numbers::e * x + 1.0));
    if (p == 0.0) return -1.0;
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
  } else if (x > std::numbers::e) {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  } else {
    // Winitzki's approximation.
    const double lp = std::log1p(x);
    w = lp * (1.0 - std::log1p(lp) / (2.0 + lp));
  }
  return halley_refine(x, w);
}

double lambert_w_of_exp(double log_x) {
  if (std::isnan(log_x)) throw Error(ErrorCode::domain_error, "lambert_w_of_exp of NaN");
  if (log_x < 700.0) return lambert_w(std::exp(log_x));
  // Solve w + log(w) = log_x by Newton; exp(log_x) would overflow.
  double w = log_x - std::log(log_x);
  for (int iter = 0; iter < 64; ++iter) {
    const double step = (w + std::log(w) - log_x) / (1.0 + 1.0 / w);
    w -= step;
    if (std::abs(step) <= 4.0 * kEps * w) break;
  }
  return w;
}

double exponential_integral_e1(double x) {
  if (!(x > 0.0)) throw Error(ErrorCode::domain_error, "E1 requires x > 0");
  if (x >= 1.5) return std::exp(-x) * upper_gamma_continued_fraction(0.0, x);
  // E1(x) = -gamma_E - ln x - sum_{k>=1} (-x)^k / (k k!)
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= -x / k;
    const double contribution = term / k;
    sum += contribution;
    if (std::abs(contribution) < kEps * std::abs(sum)) break;
  }
  return -std::numbers::egamma - std::log(x) - sum;
}

double upper_incomplete_gamma(double a, double x) {
  if (std::isnan(a) || std::isnan(x)) {
    throw Error(ErrorCode::domain_error, "upper_incomplete_gamma of NaN");
  }
  if (!(x > 0.0)) {
    std::ostringstream msg;
    msg << "upper_incomplete_gamma requires x > 0 (got " << x << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  if (x >= std::max(1.5, a + 1.0)) {
    return power_times_exp(a, x) * upper_gamma_continued_fraction(a, x);
  }
  if (a >= 0.5) {
    return std::tgamma(a) - power_times_exp(a, x) * lower_gamma_series_sum(a, x);
  }

  // a < 0.5 and x < 1.5: walk down from a value in [0.5, 1.5) (or from E1 for
  // non-positive integers) with Gamma(s, x) = (Gamma(s + 1, x) - x^s e^-x) / s.
  const bool non_positive_integer = a <= 0.0 && a == std::nearbyint(a);
  double s;
  double value;
  if (non_positive_integer) {
    s = 0.0;
    value = exponential_integral_e1(x);
  } else {
    s = a + std::ceil(0.5 - a);
    value = std::tgamma(s) - power_times_exp(s, x) * lower_gamma_series_sum(s, x);
  }
  while (s - a > 0.5) {
    s -= 1.0;
    value = (value - power_times_exp(s, x)) / s;
  }
  return value;
}

}  // namespace relaycast
