#include "relaycast/single_hop.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "relaycast/error.hpp"
#include "relaycast/numerics.hpp"

namespace relaycast {
namespace {

constexpr double kSolverRelTol = 1e-12;
constexpr int kBoundaryScanPoints = 512;

void validate_b(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    std::ostringstream msg;
    msg << "mismatch factor b must be positive (got " << b << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
}

Interval shared_region(const FadingDistribution& dist, double x1, double x) {
  const auto region = growth_regions(dist).region_of(x1);
  if (!region || !region->contains(x)) {
    std::ostringstream msg;
    msg << "allocation outside growth region: [" << x1 << ", " << x << "] is not inside a region"
        << " where x^2 f(x) increases";
    throw Error(ErrorCode::allocation_outside_growth_region, msg.str());
  }
  return *region;
}

double log_strength_density(const FadingDistribution& dist, double x) {
  return 2.0 * std::log(x) + dist.log_pdf(x);
}

}  // namespace

namespace detail {

AllocationShape::AllocationShape(const FadingDistribution& dist, double x1, double b)
    : dist_(&dist), x1_(x1), exponent_(1.0 / (b + 1.0)), log_anchor_(log_strength_density(dist, x1)) {}

double AllocationShape::operator()(double x) const {
  if (x == x1_) return 1.0;
  return std::exp(exponent_ * (log_strength_density(*dist_, x) - log_anchor_));
}

double power_unchecked(const FadingDistribution& dist, double x1, double x2, double b) {
  if (x1 == x2) return 0.0;
  const AllocationShape shape(dist, x1, b);
  // integral I(l)/l^2 dl with l = e^t, so small x1 keeps full relative accuracy.
  const auto integrand = [&](double t) {
    const double l = std::exp(t);
    return shape(l) / l;
  };
  IntegrationOptions options;
  options.rel_tol = kSolverRelTol;
  const double body = integrate_with_error(integrand, std::log(x1), std::log(x2), options).value;
  return body + shape(x2) / x2 - 1.0 / x1;
}

double distortion_unchecked(const FadingDistribution& dist, double x1, double x2, double b,
                            double terminal) {
  double body = 0.0;
  if (x1 < x2) {
    const AllocationShape shape(dist, x1, b);
    const auto integrand = [&](double l) { return dist.pdf(l) * std::pow(shape(l), -b); };
    IntegrationOptions options;
    options.rel_tol = kSolverRelTol;
    options.abs_tol = 1e-15;
    body = integrate_with_error(integrand, x1, x2, options).value;
  }
  return body + dist.cdf(x1) + dist.survival(x2) * terminal;
}

double solve_lower_edge(const FadingDistribution& dist, double lo_edge, double x2, double b,
                        double power) {
  const auto residual = [&](double x1) { return power_unchecked(dist, x1, x2, b) - power; };

  const double lower = lo_edge + 1e-9;
  if (!(lower < x2)) {
    throw Error(ErrorCode::infeasible_power_budget, "allocation interval is empty");
  }
  const double at_lower = residual(lower);
  if (at_lower < 0.0) {
    std::ostringstream msg;
    msg << "infeasible power budget: " << power << " exceeds " << at_lower + power
        << ", the most any allocation ending at " << x2 << " can use";
    throw Error(ErrorCode::infeasible_power_budget, msg.str());
  }

  // Upper bracket end: step back from x2 until the power falls short of the budget.
  double gap = 1e-9 * std::max(1.0, x2);
  double upper = x2 - gap;
  while (residual(upper) > 0.0) {
    gap *= 0.01;
    if (gap < 4.0 * std::numeric_limits<double>::epsilon() * x2) return x2;
    upper = x2 - gap;
  }
  if (upper <= lower) return x2;
  return find_root(residual, Bracket(lower, upper), 1e-15 * std::max(1.0, x2));
}

}  // namespace detail

double auxiliary_value(const FadingDistribution& dist, double x, double x1, double b) {
  validate_b(b);
  if (x < x1) {
    std::ostringstream msg;
    msg << "auxiliary function is only defined for x >= x1 (x = " << x << ", x1 = " << x1 << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  shared_region(dist, x1, x);
  return detail::AllocationShape(dist, x1, b)(x);
}

double power_of(const FadingDistribution& dist, double x1, double x2, double b) {
  validate_b(b);
  if (!(x1 <= x2)) throw Error(ErrorCode::domain_error, "power_of requires x1 <= x2");
  if (x1 == x2) return 0.0;
  shared_region(dist, x1, x2);
  return detail::power_unchecked(dist, x1, x2, b);
}

double expected_distortion_of(const FadingDistribution& dist, double x1, double x2, double b,
                              std::optional<double> terminal) {
  validate_b(b);
  if (!(x1 <= x2)) throw Error(ErrorCode::domain_error, "expected_distortion_of requires x1 <= x2");
  if (x1 < x2) shared_region(dist, x1, x2);
  const double last = terminal ? *terminal : std::pow(detail::AllocationShape(dist, x1, b)(x2), -b);
  return detail::distortion_unchecked(dist, x1, x2, b, last);
}

double solve_upper_boundary(const FadingDistribution& dist, const Interval& region) {
  const auto h = [&](double x) { return x * dist.pdf(x) - dist.survival(x); };
  const double lo = region.lo;
  const double hi = region.hi;
  const double first = lo + 1e-9 * std::max(1.0, hi - lo);
  double prev_x = first;
  double prev_h = h(first);
  for (int i = 1; i <= kBoundaryScanPoints; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / kBoundaryScanPoints;
    const double hx = h(x);
    if (hx == 0.0) return x;
    if ((hx > 0.0) != (prev_h > 0.0)) {
      return find_root(h, Bracket(prev_x, x), 1e-15 * std::max(1.0, x));
    }
    prev_x = x;
    prev_h = hx;
  }
  std::ostringstream msg;
  msg << "boundary condition x f(x) = 1 - F(x) has no root in growth interval (" << lo << ", " << hi
      << ")";
  throw Error(ErrorCode::boundary_condition_unsolvable, msg.str());
}

AllocationSolution solve_single_hop(const FadingDistribution& dist, double power, double b) {
  validate_b(b);
  if (!(power > 0.0) || !std::isfinite(power)) {
    std::ostringstream msg;
    msg << "power budget must be positive (got " << power << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  const GrowthRegion regions = growth_regions(dist);
  if (regions.empty()) {
    throw Error(ErrorCode::boundary_condition_unsolvable, "distribution has no growth region");
  }

  std::optional<AllocationSolution> best;
  std::optional<Error> last_error;
  for (const auto& region : regions.intervals) {
    try {
      const double x2 = solve_upper_boundary(dist, region);
      const double x1 = detail::solve_lower_edge(dist, region.lo, x2, b, power);
      AllocationSolution solution;
      solution.x1 = x1;
      solution.x2 = x2;
      solution.b = b;
      const detail::AllocationShape shape(dist, x1, b);
      solution.expected_distortion =
          detail::distortion_unchecked(dist, x1, x2, b, std::pow(shape(x2), -b));
      solution.power_used = detail::power_unchecked(dist, x1, x2, b);
      solution.aux = EvaluableMap::closed_form(
          [dist, x1, b](double x) { return detail::AllocationShape(dist, x1, b)(x); }, x1, x2);
      if (!best || solution.expected_distortion < best->expected_distortion) {
        best = std::move(solution);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::boundary_condition_unsolvable &&
          e.code() != ErrorCode::infeasible_power_budget) {
        throw;
      }
      if (!last_error || e.code() == ErrorCode::infeasible_power_budget) last_error = e;
    }
  }
  if (!best) throw *last_error;
  return *best;
}

}  // namespace relaycast
