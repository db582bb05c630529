#pragma once

#include "relaycast/distributions.hpp"

namespace relaycast {

/// Single-rate decode-and-forward outage baseline.
struct SingleLayerResult {
  double distortion = 1.0;
  double gamma0 = 0.0;  ///< first-hop strength threshold
  double l0 = 0.0;      ///< second-hop strength threshold
};

/// 1 - P[gamma >= gamma0] P[l >= l0] (1 - exp(-b R)),
/// R = min(log(1 + gamma0 P_t), log(1 + l0 P_r)).
double single_layer_objective(const FadingDistribution& dist_t, const FadingDistribution& dist_r,
                              double P_t, double P_r, double b, double gamma0, double l0);

/// Minimises the objective over (gamma0, l0): 200 x 200 log grid, then
/// coordinate descent and a search along the equal-rate line.
SingleLayerResult single_layer_distortion(const FadingDistribution& dist_t,
                                          const FadingDistribution& dist_r, double P_t, double P_r,
                                          double b);

}  // namespace relaycast
