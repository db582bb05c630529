#include "relaycast/single_layer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relaycast/error.hpp"
#include "relaycast/numerics.hpp"

namespace relaycast {
namespace {

constexpr int kGrid = 200;
constexpr double kLogMin = -6.0 * 2.302585092994046;  // ln 1e-6

// Smallest power-of-two strength whose survival is negligible.
double search_ceiling(const FadingDistribution& dist) {
  double x = 1.0;
  while (dist.survival(x) > 1e-14 && x < 1e8) x *= 2.0;
  return std::min(x, dist.support_hi());
}

}  // namespace

double single_layer_objective(const FadingDistribution& dist_t, const FadingDistribution& dist_r,
                              double P_t, double P_r, double b, double gamma0, double l0) {
  const double rate = std::min(std::log1p(gamma0 * P_t), std::log1p(l0 * P_r));
  return 1.0 - dist_t.survival(gamma0) * dist_r.survival(l0) * -std::expm1(-b * rate);
}

SingleLayerResult single_layer_distortion(const FadingDistribution& dist_t,
                                          const FadingDistribution& dist_r, double P_t, double P_r,
                                          double b) {
  if (!(P_t > 0.0) || !(P_r > 0.0) || !(b > 0.0)) {
    std::ostringstream msg;
    msg << "single-layer baseline needs positive powers and b (got P_t = " << P_t
        << ", P_r = " << P_r << ", b = " << b << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  const auto objective = [&](double log_g, double log_l) {
    return single_layer_objective(dist_t, dist_r, P_t, P_r, b, std::exp(log_g), std::exp(log_l));
  };

  const double t_hi = std::log(search_ceiling(dist_t));
  const double r_hi = std::log(search_ceiling(dist_r));
  const double t_step = (t_hi - kLogMin) / (kGrid - 1);
  const double r_step = (r_hi - kLogMin) / (kGrid - 1);

  double best = 2.0;
  double best_t = kLogMin;
  double best_r = kLogMin;
  for (int i = 0; i < kGrid; ++i) {
    const double t = kLogMin + t_step * i;
    for (int j = 0; j < kGrid; ++j) {
      const double r = kLogMin + r_step * j;
      const double value = objective(t, r);
      if (value < best) {
        best = value;
        best_t = t;
        best_r = r;
      }
    }
  }

  // Coordinate descent, one cell either side of the incumbent.
  for (int sweep = 0; sweep < 50; ++sweep) {
    const double previous = best;
    const double t = minimize_golden([&](double x) { return objective(x, best_r); }, best_t - t_step,
                                     best_t + t_step, 1e-12);
    if (objective(t, best_r) < best) {
      best_t = t;
      best = objective(t, best_r);
    }
    const double r = minimize_golden([&](double y) { return objective(best_t, y); }, best_r - r_step,
                                     best_r + r_step, 1e-12);
    if (objective(best_t, r) < best) {
      best_r = r;
      best = objective(best_t, r);
    }
    if (previous - best <= 1e-15) break;
  }

  // The optimum sits where both hop rates agree; search that line in the rate.
  const double rate_guess =
      std::min(std::log1p(std::exp(best_t) * P_t), std::log1p(std::exp(best_r) * P_r));
  const auto on_line = [&](double rate) {
    const double e = std::expm1(rate);
    return single_layer_objective(dist_t, dist_r, P_t, P_r, b, e / P_t, e / P_r);
  };
  const double rate = minimize_golden(on_line, 0.5 * rate_guess, 2.0 * rate_guess + 1e-9, 1e-13);

  SingleLayerResult result{best, std::exp(best_t), std::exp(best_r)};
  if (on_line(rate) < best) {
    const double e = std::expm1(rate);
    result = {on_line(rate), e / P_t, e / P_r};
  }
  result.distortion = std::clamp(result.distortion, 0.0, 1.0);
  return result;
}

}  // namespace relaycast
