#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <vector>

#include "relaycast/distributions.hpp"
#include "relaycast/numerics.hpp"
#include "relaycast/single_hop.hpp"

namespace relaycast {

/// Relay layering interval [l1, l2]. When the destination bound G >= D_r
/// binds, the last relay layer ends exactly at distortion D_r.
struct RelayInterval {
  double l1 = 0.0;
  double l2 = 0.0;
  bool boundary_active = false;
};

/// Relay-side optimizer for one (distribution, P_r, b). The unconstrained
/// single-hop solution is computed once and shared by every D_r query.
class SecondHopSolver {
 public:
  SecondHopSolver(FadingDistribution dist, double relay_power, double b);

  RelayInterval interval(double dr) const;
  /// Conditional expected destination distortion G(D_r).
  double g(double dr) const;
  double g(double dr, const RelayInterval& interval) const;

  const FadingDistribution& distribution() const noexcept { return dist_; }
  double relay_power() const noexcept { return power_; }
  double b() const noexcept { return b_; }
  /// Terminal distortion I(x2)^-b of the unconstrained solution; D_r at or
  /// below it leaves the bound inactive.
  double unconstrained_terminal() const noexcept { return terminal_; }
  const AllocationSolution& unconstrained() const noexcept { return *unconstrained_; }
  const Interval& region() const noexcept { return region_; }

 private:
  double l2_for(double l1, double log_cap) const;

  FadingDistribution dist_;
  double power_;
  double b_;
  std::shared_ptr<const AllocationSolution> unconstrained_;
  Interval region_{0.0, 0.0};
  double terminal_ = 1.0;
};

RelayInterval solve_relay_interval(const FadingDistribution& dist_r, double relay_power, double b,
                                   double dr);
double g_of_dr(const FadingDistribution& dist_r, double relay_power, double b, double dr);

/// dG/dD_r = 1 - l2 f(l2) - F(l2) for a boundary-active interval ending at l2.
double g_derivative(const FadingDistribution& dist_r, double l2);

struct GridSpec {
  std::size_t points = 120;
  double dr_min = 1e-4;
  double dr_max = 1.0;
};

/// Log-spaced grid, ascending, endpoints included.
std::vector<double> dr_grid(const GridSpec& spec);

/// Tabulated G(D_r) on an ascending D_r grid.
struct GProfile {
  std::vector<double> dr;
  std::vector<double> g;
  std::vector<double> g_d;
  std::vector<double> l1;
  std::vector<double> l2;
  std::vector<bool> boundary_active;
  double relay_power = 0.0;
  double b = 1.0;
  /// Grid values whose solve failed; they are left out of the vectors above.
  std::vector<double> failed_dr;

  std::size_t size() const noexcept { return dr.size(); }
  std::size_t active_count() const;
  double min_g() const;

  /// Header `dr,g,g_d,l1,l2,boundary_active`.
  void write_csv(std::ostream& out) const;
};

/// Evaluates every grid point, in parallel when `threads` > 1 (0 picks the
/// hardware concurrency). Failed points are dropped and recorded; more than
/// 10% failures throws profile_failed.
GProfile build_g_profile(const FadingDistribution& dist_r, double relay_power, double b,
                         const GridSpec& grid = {}, unsigned threads = 0);

/// Monotone cubic interpolation of a profile's G in log D_r, held at the end
/// values outside the grid.
class GInterpolant {
 public:
  explicit GInterpolant(const GProfile& profile);

  double operator()(double dr) const;

 private:
  std::shared_ptr<const MonotoneCubic> table_;
};

/// exp(-(D_r^(-1/B) - 1) / p_r).
double gd_parametric(double dr, double p_r, double B);

struct ParametricFit {
  double p_r = 1.0;
  double B = 1.0;
  double rms_rel = 0.0;
  /// Integration constant of the closed-form antiderivative.
  double g_offset = 0.0;
};

/// Antiderivative of gd_parametric:
/// (B / p_r^B) e^(1/p_r) Gamma(-B, D_r^(-1/B) / p_r) + g_offset.
double g_closed_form(double dr, const ParametricFit& fit);

/// Least-squares fit of gd_parametric to the boundary-active points of the
/// profile with g_d > 0 (at least 20 are required). g_offset is the offset
/// minimising the relative residuals of g_closed_form over the whole profile.
ParametricFit fit_g_parametric(const GProfile& profile, const FitOptions& options = {});

/// Relative RMS of g_closed_form against the profile's G over dr in [lo, hi].
double closed_form_rms(const GProfile& profile, const ParametricFit& fit, double lo = 0.0,
                       double hi = 1.0);

}  // namespace relaycast
