#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "relaycast/monotone_cubic.hpp"

namespace relaycast {

enum class DistributionKind { rayleigh, gamma, tabulated };

/// Density of the channel strength |h|^2 of one hop.
///
/// Rayleigh fading is modelled on the strength, i.e. the unit-mean exponential
/// density e^-x. Gamma(alpha, beta) uses the rate parameterisation
/// beta^alpha x^(alpha-1) e^(-beta x) / Gamma(alpha). Tabulated densities are
/// monotone-cubic interpolants of (x, pdf) knots; the cdf is the exact integral
/// of that interpolant plus an optional probability mass below the first knot,
/// spread uniformly over [0, x_0].
class FadingDistribution {
 public:
  static FadingDistribution rayleigh();
  static FadingDistribution gamma(double alpha, double beta);
  /// Rejects tables whose total mass falls outside [0.999, 1.001]; otherwise
  /// renormalises to unit mass.
  static FadingDistribution tabulated(std::vector<double> x, std::vector<double> pdf,
                                      double mass_below_first_knot = 0.0);

  /// Reads a two-column CSV with header `x,pdf`.
  static FadingDistribution load_csv(const std::filesystem::path& path);
  static FadingDistribution read_csv(std::istream& in);
  /// Writes the knots of a tabulated distribution as `x,pdf`.
  void write_csv(std::ostream& out) const;

  DistributionKind kind() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  /// 1 - cdf(x), computed without cancellation for the parametric families.
  double survival(double x) const;

  /// Knot range of a tabulated distribution; [0, inf) otherwise.
  double support_lo() const noexcept;
  double support_hi() const noexcept;
  const MonotoneCubic* table() const noexcept { return table_.get(); }

  std::string describe() const;

 private:
  FadingDistribution() = default;

  DistributionKind kind_ = DistributionKind::rayleigh;
  double alpha_ = 1.0;
  double beta_ = 1.0;
  double log_gamma_alpha_ = 0.0;
  std::shared_ptr<const MonotoneCubic> table_;
  double mass_below_ = 0.0;
  double scale_ = 1.0;
};

struct Interval {
  double lo;
  double hi;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// Maximal open intervals where d/dx (x^2 f(x)) > 0. Only there can a
/// layered allocation put non-zero power.
struct GrowthRegion {
  std::vector<Interval> intervals;

  bool empty() const noexcept { return intervals.empty(); }
  /// The interval containing x (closed-interval test), if any.
  std::optional<Interval> region_of(double x) const;
};

/// Analytic for Rayleigh and Gamma, (0, (1 + alpha) / beta); tabulated
/// densities use central differences of x^2 f(x) on the knots, with the
/// interval edges placed at the linearly interpolated sign changes.
GrowthRegion growth_regions(const FadingDistribution& dist);

/// Parses "rayleigh", "gamma:alpha,beta" or "csv:path".
FadingDistribution parse_distribution(const std::string& spec);

}  // namespace relaycast
