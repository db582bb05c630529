#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "relaycast/distributions.hpp"
#include "relaycast/evaluable_map.hpp"
#include "relaycast/second_hop.hpp"

namespace relaycast {

/// Root of x f(x) = 1 - F(x) in the first growth region that has one.
double solve_gamma2(const FadingDistribution& dist_t);

/// Lambert-W closed form of the source auxiliary function for a Rayleigh
/// first hop:
///   I_t = (p_r W(k/p_r e^(k/p_r) Q^k) / k)^(B/b),
///   k = b / (B (b + 1)),  Q = gamma^2 e^(gamma1 - gamma) / gamma1^2.
/// Throws closed_form_out_of_domain for gamma < gamma1 or a non-positive fit.
double source_auxiliary_closed_form(double gamma, double gamma1, double b, const ParametricFit& fit);

/// Solves I^(b+1) exp((I^(b/B) - 1) / p_r) = gamma^2 f(gamma) / (gamma1^2 f(gamma1))
/// for I >= 1 by bracketed root finding.
double source_auxiliary_pointwise(const FadingDistribution& dist_t, double gamma, double gamma1,
                                  double b, const ParametricFit& fit);

/// Relative residual |I - (Q G_D(I^-b))^(1/(b+1))| / I of the fixed point above.
double source_fixed_point_residual(const FadingDistribution& dist_t, double gamma, double gamma1,
                                   double b, const ParametricFit& fit, double value);

/// I_t on [gamma1, gamma2]. Rayleigh first hops use the closed form after
/// checking it against the fixed point on 50 points; any residual above 1e-6
/// switches to pointwise solving and records a warning.
class SourceAuxiliary {
 public:
  SourceAuxiliary(FadingDistribution dist_t, double gamma1, double gamma2, double b,
                  ParametricFit fit);

  double operator()(double gamma) const;

  bool uses_closed_form() const noexcept { return closed_form_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  FadingDistribution dist_;
  double gamma1_;
  double gamma2_;
  double b_;
  ParametricFit fit_;
  bool closed_form_ = false;
  std::vector<std::string> warnings_;
};

/// integral_g1^g2 I_t/g^2 dg + I_t(g2)/g2 - 1/g1 for the allocation anchored at gamma1.
double source_power(const FadingDistribution& dist_t, double gamma1, double gamma2, double b,
                    const ParametricFit& fit);

/// gamma1 whose allocation spends exactly P_t. Throws infeasible_power_budget.
double solve_gamma1(const FadingDistribution& dist_t, double P_t, double b, const ParametricFit& fit,
                    double gamma2);

struct EndToEndSolution {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  EvaluableMap I_t = EvaluableMap::closed_form([](double) { return 1.0; }, 0.0, 0.0);
  double expected_distortion = 1.0;
  ParametricFit fit;
  GProfile second_hop;
  std::vector<std::string> warnings;

  /// Layer table `gamma,I_t,D_r` on `layers` evenly spaced points, a blank
  /// line, then the summary `gamma1,gamma2,distortion,p_r,B,rms_rel`.
  void write_csv(std::ostream& out, std::size_t layers = 101) const;
};

/// Expected end-to-end distortion; G is read from the tabulated profile, the
/// layering shape from the parametric fit.
EndToEndSolution end_to_end_distortion(const FadingDistribution& dist_t, double P_t, double b,
                                       const GProfile& profile, const ParametricFit& fit);

/// Full decode-and-forward pipeline: G profile, fit and first hop. The
/// profile grid starts at max(grid.dr_min, D*/2), D* being the unconstrained
/// relay terminal distortion below which G is constant.
EndToEndSolution solve_decode_forward(const FadingDistribution& dist_t,
                                      const FadingDistribution& dist_r, double P_t, double P_r,
                                      double b, const GridSpec& grid = {});

}  // namespace relaycast
