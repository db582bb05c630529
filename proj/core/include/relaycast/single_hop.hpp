#pragma once

#include <optional>

#include "relaycast/distributions.hpp"
#include "relaycast/evaluable_map.hpp"

namespace relaycast {

/// Optimal continuous layering of one hop.
///
/// The auxiliary function I(x) = exp(R(x)) = D(x)^(-1/b) equals 1 below x1,
/// follows (x^2 f(x) / (x1^2 f(x1)))^(1/(b+1)) on [x1, x2] and stays at I(x2)
/// above x2.
struct AllocationSolution {
  double x1 = 0.0;
  double x2 = 0.0;
  EvaluableMap aux = EvaluableMap::closed_form([](double) { return 1.0; }, 0.0, 0.0);
  double expected_distortion = 1.0;
  double power_used = 0.0;
  double b = 1.0;
};

/// (x^2 f(x) / (x1^2 f(x1)))^(1/(b+1)); x and x1 must share a growth region.
double auxiliary_value(const FadingDistribution& dist, double x, double x1, double b);

/// Total layer power of the allocation anchored at x1 and cut at x2:
/// integral_x1^x2 I(l)/l^2 dl + I(x2)/x2 - 1/x1. Exactly 0 when x1 == x2.
double power_of(const FadingDistribution& dist, double x1, double x2, double b);

/// integral_x1^x2 f/I^b + F(x1) + (1 - F(x2)) * terminal, where terminal
/// defaults to I(x2)^-b (the distortion reached by the last layer).
double expected_distortion_of(const FadingDistribution& dist, double x1, double x2, double b,
                              std::optional<double> terminal = std::nullopt);

/// Root of x f(x) = 1 - F(x) inside the given growth interval.
/// Throws boundary_condition_unsolvable if there is none.
double solve_upper_boundary(const FadingDistribution& dist, const Interval& region);

/// Minimum expected distortion D = exp(-bR) over a single hop with layer
/// power budget `power`. Throws infeasible_power_budget or
/// boundary_condition_unsolvable.
AllocationSolution solve_single_hop(const FadingDistribution& dist, double power, double b);

namespace detail {

/// Unchecked evaluation of the allocation shape; callers guarantee x, x1 in
/// the same growth region.
class AllocationShape {
 public:
  AllocationShape(const FadingDistribution& dist, double x1, double b);

  double operator()(double x) const;
  double x1() const noexcept { return x1_; }

 private:
  const FadingDistribution* dist_;
  double x1_;
  double exponent_;
  double log_anchor_;
};

double power_unchecked(const FadingDistribution& dist, double x1, double x2, double b);
double distortion_unchecked(const FadingDistribution& dist, double x1, double x2, double b,
                            double terminal);

/// Solves power_unchecked(x1, x2, b) = power for x1 in (lo_edge, x2), with
/// x1 -> x2 when the budget is below what the narrowest bracket consumes.
/// Throws infeasible_power_budget when even x1 = lo_edge + 1e-9 is short.
double solve_lower_edge(const FadingDistribution& dist, double lo_edge, double x2, double b,
                        double power);

}  // namespace detail

}  // namespace relaycast
