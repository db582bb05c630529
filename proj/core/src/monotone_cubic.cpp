#include "relaycast/monotone_cubic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaycast/error.hpp"

namespace relaycast {
namespace {

double endpoint_slope(double h0, double h1, double d0, double d1) {
  double slope = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if ((slope > 0.0) != (d0 > 0.0) || d0 == 0.0) {
    slope = 0.0;
  } else if ((d0 > 0.0) != (d1 > 0.0) && std::abs(slope) > 3.0 * std::abs(d0)) {
    slope = 3.0 * d0;
  }
  return slope;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw Error(ErrorCode::invalid_table, "interpolation table needs >= 2 knots with matching sizes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw Error(ErrorCode::invalid_table, "interpolation table contains non-finite values");
    }
    if (i > 0 && !(x_[i] > x_[i - 1])) {
      std::ostringstream msg;
      msg << "knots must be strictly increasing (x[" << i - 1 << "] = " << x_[i - 1] << ", x[" << i
          << "] = " << x_[i] << ")";
      throw Error(ErrorCode::invalid_table, msg.str());
    }
  }

  std::vector<double> h(n - 1);
  std::vector<double> delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    delta[k] = (y_[k + 1] - y_[k]) / h[k];
  }

  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = delta[0];
  } else {
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (delta[k - 1] * delta[k] <= 0.0) continue;
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slope_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
    slope_[0] = endpoint_slope(h[0], h[1], delta[0], delta[1]);
    slope_[n - 1] = endpoint_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  cumulative_.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    cumulative_[k + 1] = cumulative_[k] + integral_from_knot(k, x_[k + 1]);
  }
}

std::size_t MonotoneCubic::segment(double x) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  if (it == x_.begin()) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(it - x_.begin()) - 1, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  x = std::clamp(x, x_.front(), x_.back());
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y_[k] + (t3 - 2.0 * t2 + t) * h * slope_[k] +
         (-2.0 * t3 + 3.0 * t2) * y_[k + 1] + (t3 - t2) * h * slope_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  x = std::clamp(x, x_.front(), x_.back());
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  return ((6.0 * t2 - 6.0 * t) * y_[k] + (-6.0 * t2 + 6.0 * t) * y_[k + 1]) / h +
         (3.0 * t2 - 4.0 * t + 1.0) * slope_[k] + (3.0 * t2 - 2.0 * t) * slope_[k + 1];
}

double MonotoneCubic::integral_from_knot(std::size_t k, double x) const {
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  return h * ((0.5 * t4 - t3 + t) * y_[k] + (0.25 * t4 - 2.0 * t3 / 3.0 + 0.5 * t2) * h * slope_[k] +
              (-0.5 * t4 + t3) * y_[k + 1] + (0.25 * t4 - t3 / 3.0) * h * slope_[k + 1]);
}

double MonotoneCubic::integral(double a, double b) const {
  if (a > b) return -integral(b, a);
  a = std::clamp(a, x_.front(), x_.back());
  b = std::clamp(b, x_.front(), x_.back());
  const std::size_t ka = segment(a);
  const std::size_t kb = segment(b);
  const double upto_b = cumulative_[kb] + integral_from_knot(kb, b);
  const double upto_a = cumulative_[ka] + integral_from_knot(ka, a);
  return upto_b - upto_a;
}

}  // namespace relaycast
