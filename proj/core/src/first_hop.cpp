#include "relaycast/first_hop.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "relaycast/csv.hpp"
#include "relaycast/error.hpp"
#include "relaycast/numerics.hpp"
#include "relaycast/single_hop.hpp"

namespace relaycast {
namespace {

constexpr double kFixedPointTol = 1e-6;
constexpr int kValidationPoints = 50;

double log_strength_density(const FadingDistribution& dist, double x) {
  return 2.0 * std::log(x) + dist.log_pdf(x);
}

void validate_fit(const ParametricFit& fit) {
  if (!(fit.p_r > 0.0) || !(fit.B > 0.0) || !std::isfinite(fit.p_r) || !std::isfinite(fit.B)) {
    std::ostringstream msg;
    msg << "closed form out of domain: fit parameters must be positive (p_r = " << fit.p_r
        << ", B = " << fit.B << ")";
    throw Error(ErrorCode::closed_form_out_of_domain, msg.str());
  }
}

// Q as a logarithm: log(gamma^2 f(gamma)) - log(gamma1^2 f(gamma1)).
double log_q(const FadingDistribution& dist, double gamma, double gamma1) {
  if (gamma == gamma1) return 0.0;
  return log_strength_density(dist, gamma) - log_strength_density(dist, gamma1);
}

Interval first_region_with_root(const FadingDistribution& dist, double* root) {
  const GrowthRegion regions = growth_regions(dist);
  for (const auto& region : regions.intervals) {
    try {
      *root = solve_upper_boundary(dist, region);
      return region;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::boundary_condition_unsolvable) throw;
    }
  }
  throw Error(ErrorCode::boundary_condition_unsolvable,
              "boundary condition x f(x) = 1 - F(x) has no root in any growth region");
}

}  // namespace

double solve_gamma2(const FadingDistribution& dist_t) {
  double root = 0.0;
  first_region_with_root(dist_t, &root);
  return root;
}

double source_auxiliary_closed_form(double gamma, double gamma1, double b, const ParametricFit& fit) {
  validate_fit(fit);
  if (!(gamma1 > 0.0) || !(gamma >= gamma1) || !(b > 0.0)) {
    std::ostringstream msg;
    msg << "closed form out of domain: needs 0 < gamma1 <= gamma and b > 0 (gamma = " << gamma
        << ", gamma1 = " << gamma1 << ")";
    throw Error(ErrorCode::closed_form_out_of_domain, msg.str());
  }
  if (gamma == gamma1) return 1.0;
  const double p = fit.p_r;
  const double k = b / (fit.B * (b + 1.0));
  const double lq = 2.0 * std::log(gamma / gamma1) + gamma1 - gamma;
  const double w = lambert_w_of_exp(std::log(k / p) + k / p + k * lq);
  return std::pow(p * w / k, fit.B / b);
}

double source_auxiliary_pointwise(const FadingDistribution& dist_t, double gamma, double gamma1,
                                  double b, const ParametricFit& fit) {
  validate_fit(fit);
  const double lq = log_q(dist_t, gamma, gamma1);
  if (lq <= 0.0) return 1.0;
  const double ratio = b / fit.B;
  // In y = log I: (b + 1) y + (e^(ratio y) - 1) / p_r - log Q, increasing from -log Q at 0.
  const auto residual = [&](double y) {
    return (b + 1.0) * y + std::expm1(ratio * y) / fit.p_r - lq;
  };
  const double hi = lq / (b + 1.0);
  return std::exp(find_root(residual, Bracket(0.0, hi), 1e-15 * std::max(1.0, hi)));
}

double source_fixed_point_residual(const FadingDistribution& dist_t, double gamma, double gamma1,
                                   double b, const ParametricFit& fit, double value) {
  const double lq = log_q(dist_t, gamma, gamma1);
  const double log_gd = -std::expm1(b / fit.B * std::log(value)) / fit.p_r;
  const double rhs = std::exp((lq + log_gd) / (b + 1.0));
  return std::abs(value - rhs) / value;
}

SourceAuxiliary::SourceAuxiliary(FadingDistribution dist_t, double gamma1, double gamma2, double b,
                                 ParametricFit fit)
    : dist_(std::move(dist_t)), gamma1_(gamma1), gamma2_(gamma2), b_(b), fit_(fit) {
  validate_fit(fit_);
  if (dist_.kind() != DistributionKind::rayleigh) return;
  closed_form_ = true;
  for (int i = 0; i < kValidationPoints; ++i) {
    const double gamma =
        gamma1_ + (gamma2_ - gamma1_) * static_cast<double>(i) / (kValidationPoints - 1);
    double residual = std::numeric_limits<double>::infinity();
    try {
      residual = source_fixed_point_residual(
          dist_, gamma, gamma1_, b_, fit_, source_auxiliary_closed_form(gamma, gamma1_, b_, fit_));
    } catch (const Error&) {
    }
    if (!(residual <= kFixedPointTol)) {
      std::ostringstream msg;
      msg << "closed-form I_t misses the fixed point at gamma = " << format_number(gamma)
          << " (residual " << format_number(residual) << "); solving pointwise";
      warnings_.push_back(msg.str());
      closed_form_ = false;
      break;
    }
  }
}

double SourceAuxiliary::operator()(double gamma) const {
  if (closed_form_) return source_auxiliary_closed_form(gamma, gamma1_, b_, fit_);
  return source_auxiliary_pointwise(dist_, gamma, gamma1_, b_, fit_);
}

double source_power(const FadingDistribution& dist_t, double gamma1, double gamma2, double b,
                    const ParametricFit& fit) {
  if (gamma1 == gamma2) return 0.0;
  const SourceAuxiliary aux(dist_t, gamma1, gamma2, b, fit);
  const auto integrand = [&](double t) {
    const double g = std::exp(t);
    return aux(g) / g;
  };
  IntegrationOptions options;
  options.rel_tol = 1e-12;
  const double body = integrate_with_error(integrand, std::log(gamma1), std::log(gamma2), options).value;
  return body + aux(gamma2) / gamma2 - 1.0 / gamma1;
}

double solve_gamma1(const FadingDistribution& dist_t, double P_t, double b, const ParametricFit& fit,
                    double gamma2) {
  if (!(P_t > 0.0) || !std::isfinite(P_t)) {
    throw Error(ErrorCode::domain_error, "source power budget must be positive");
  }
  const auto region = growth_regions(dist_t).region_of(gamma2);
  if (!region) {
    throw Error(ErrorCode::allocation_outside_growth_region, "gamma2 lies outside every growth region");
  }
  const double lo = region->lo;
  const auto residual = [&](double g1) { return source_power(dist_t, g1, gamma2, b, fit) - P_t; };

  double lower = 0.5 * (lo + gamma2);
  while (residual(lower) <= 0.0) {
    lower = lo + 0.5 * (lower - lo);
    if (lower - lo < 1e-9 * std::max(1.0, gamma2)) {
      std::ostringstream msg;
      msg << "infeasible power budget: P_t = " << P_t << " cannot be spent on any interval ending at "
          << gamma2;
      throw Error(ErrorCode::infeasible_power_budget, msg.str());
    }
  }

  double gap = 1e-9 * std::max(1.0, gamma2);
  double upper = gamma2 - gap;
  while (residual(upper) > 0.0) {
    gap *= 0.01;
    if (gap < 4.0 * std::numeric_limits<double>::epsilon() * gamma2) return gamma2;
    upper = gamma2 - gap;
  }
  if (upper <= lower) return gamma2;
  return find_root(residual, Bracket(lower, upper), 1e-15 * std::max(1.0, gamma2));
}

void EndToEndSolution::write_csv(std::ostream& out, std::size_t layers) const {
  out << "gamma,I_t,D_r\n";
  if (gamma1 < gamma2 && layers >= 2) {
    for (const auto& [gamma, value] : I_t.sample(layers)) {
      out << format_number(gamma) << ',' << format_number(value) << ','
          << format_number(std::pow(value, -second_hop.b)) << '\n';
    }
  }
  out << "\ngamma1,gamma2,distortion,p_r,B,rms_rel\n"
      << format_number(gamma1) << ',' << format_number(gamma2) << ','
      << format_number(expected_distortion) << ',' << format_number(fit.p_r) << ','
      << format_number(fit.B) << ',' << format_number(fit.rms_rel) << '\n';
}

EndToEndSolution end_to_end_distortion(const FadingDistribution& dist_t, double P_t, double b,
                                       const GProfile& profile, const ParametricFit& fit) {
  if (!(b > 0.0)) throw Error(ErrorCode::domain_error, "mismatch factor b must be positive");
  EndToEndSolution solution;
  solution.fit = fit;
  solution.second_hop = profile;

  solution.gamma2 = solve_gamma2(dist_t);
  solution.gamma1 = solve_gamma1(dist_t, P_t, b, fit, solution.gamma2);
  const double g1 = solution.gamma1;
  const double g2 = solution.gamma2;

  const GInterpolant g_of(profile);
  const double g_top = g_of(1.0);
  if (g1 == g2) {
    solution.expected_distortion = g_top;
    solution.I_t = EvaluableMap::closed_form([](double) { return 1.0; }, g1, g2);
    return solution;
  }

  const auto aux = std::make_shared<const SourceAuxiliary>(dist_t, g1, g2, b, fit);
  solution.warnings = aux->warnings();
  const auto integrand = [&](double gamma) {
    return dist_t.pdf(gamma) * g_of(std::pow((*aux)(gamma), -b));
  };
  IntegrationOptions options;
  options.rel_tol = 1e-10;
  options.abs_tol = 1e-14;
  const double body = integrate_with_error(integrand, g1, g2, options).value;
  solution.expected_distortion =
      body + dist_t.cdf(g1) * g_top + dist_t.survival(g2) * g_of(std::pow((*aux)(g2), -b));
  solution.I_t = EvaluableMap::closed_form([aux](double gamma) { return (*aux)(gamma); }, g1, g2);
  return solution;
}

EndToEndSolution solve_decode_forward(const FadingDistribution& dist_t,
                                      const FadingDistribution& dist_r, double P_t, double P_r,
                                      double b, const GridSpec& grid) {
  // G is flat below the unconstrained terminal distortion, so the grid starts
  // just under it and spends its points where the bound is active.
  GridSpec active = grid;
  const SecondHopSolver probe(dist_r, P_r, b);
  active.dr_min = std::max(grid.dr_min, 0.5 * probe.unconstrained_terminal());
  const GProfile profile = build_g_profile(dist_r, P_r, b, active);
  const ParametricFit fit = fit_g_parametric(profile);
  return end_to_end_distortion(dist_t, P_t, b, profile, fit);
}

}  // namespace relaycast
