#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "relaycast/function_ref.hpp"

namespace relaycast {

using ScalarFunction = FunctionRef<double(double)>;

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct IntegrationOptions {
  double rel_tol = 1e-8;
  /// Absolute floor on the error target; lets integrals that are exactly zero converge.
  double abs_tol = 1e-300;
  int max_subdivisions = 4000;
};

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive 15-point Gauss-Kronrod quadrature over [lo, hi].
///
/// `hi` may be +infinity; the tail is mapped onto (0, 1] by x = lo + (1 - t) / t.
/// Throws IntegrationError (carrying the best estimate and its error bound) if
/// the subdivision budget runs out before err <= max(abs_tol, rel_tol * |value|).
IntegrationResult integrate_with_error(ScalarFunction f, double lo, double hi,
                                       const IntegrationOptions& options = {});

inline double integrate(ScalarFunction f, double lo, double hi, double rel_tol = 1e-8) {
  IntegrationOptions options;
  options.rel_tol = rel_tol;
  return integrate_with_error(f, lo, hi, options).value;
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

class Bracket {
 public:
  Bracket(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }

 private:
  double lo_;
  double hi_;
};

/// Brent's method. Requires a sign change across the bracket and returns a
/// point whose enclosing bracket is narrower than abs_tol (plus a few ulps).
double find_root(ScalarFunction g, const Bracket& bracket, double abs_tol = 1e-10);

/// Expands `hi` geometrically (hi <- lo + factor * (hi - lo)) until g changes
/// sign, then solves. Used where only one side of the root is known a priori.
double find_root_expanding(ScalarFunction g, double lo, double hi, double abs_tol = 1e-10,
                           double factor = 2.0, int max_expansions = 200);

/// Golden-section minimisation of a unimodal function on [lo, hi].
double minimize_golden(ScalarFunction f, double lo, double hi, double abs_tol = 1e-10);

// ---------------------------------------------------------------------------
// Special functions
// ---------------------------------------------------------------------------

/// Principal branch W0 of the Lambert W function, x >= -1/e.
double lambert_w(double x);

/// W0(exp(log_x)), usable when exp(log_x) overflows.
double lambert_w_of_exp(double log_x);

/// Upper incomplete gamma function integral_x^inf t^(a-1) e^(-t) dt for any
/// real a and x > 0 (negative and non-positive integer a included).
double upper_incomplete_gamma(double a, double x);

/// Exponential integral E1(x) = Gamma(0, x), x > 0.
double exponential_integral_e1(double x);

// ---------------------------------------------------------------------------
// Two-parameter least squares
// ---------------------------------------------------------------------------

struct FitSample {
  double x;
  double target;
};

using TwoParamModel = std::function<double(double x, double p, double q)>;

struct FitOptions {
  double p_min = 1e-3;
  double p_max = 1e4;
  double q_min = 1e-2;
  double q_max = 1e2;
  std::size_t grid_points = 40;
  int max_refine_iterations = 4000;
  double mismatch_threshold = 0.5;
};

struct TwoParamFit {
  double p = 0.0;
  double q = 0.0;
  double rms_rel = 0.0;
};

/// Fits a positive two-parameter model by minimising the sum of squared
/// relative residuals (model - target) / target: coarse log-grid search over
/// the option box, then Nelder-Mead in log-parameter space (which may leave
/// the box). Throws parametric_family_mismatch when rms_rel exceeds the
/// threshold or the samples carry fewer than two distinct abscissae.
TwoParamFit fit_two_param(const TwoParamModel& model, std::span<const FitSample> samples,
                          const FitOptions& options = {});

}  // namespace relaycast
