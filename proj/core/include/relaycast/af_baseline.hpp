#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "relaycast/distributions.hpp"
#include "relaycast/single_hop.hpp"

namespace relaycast {

/// Density of the equivalent source-destination strength s of an
/// amplify-and-forward link over two Rayleigh hops, SNR_eq = P_t s.
/// Evaluated with l = P_t s / P_r + u^2, which removes the endpoint singularity.
double af_equivalent_pdf(double s, double P_t, double P_r);
double af_equivalent_cdf(double s, double P_t, double P_r);
/// 1 - af_equivalent_cdf, integrated directly.
double af_equivalent_survival(double s, double P_t, double P_r);

struct EquivalentGridOptions {
  std::size_t points = 400;
  double s_min = 1e-6;
  /// The grid extends until the probability beyond its last point drops below this.
  double tail_mass = 1e-9;
  unsigned threads = 0;
};

/// Equivalent channel tabulated on a log grid, with the probability below the
/// first grid point carried explicitly.
class EquivalentChannel {
 public:
  static EquivalentChannel build(double P_t, double P_r, const EquivalentGridOptions& options = {});

  const std::vector<double>& s() const noexcept { return s_; }
  const std::vector<double>& pdf() const noexcept { return pdf_; }
  const std::vector<double>& cdf() const noexcept { return cdf_; }
  double P_t() const noexcept { return P_t_; }
  double P_r() const noexcept { return P_r_; }
  double mass_below() const noexcept { return mass_below_; }
  /// mass_below plus the integral of the tabulated pdf over the grid.
  double mass() const;

  /// Tabulated strength distribution over s, renormalised to unit mass.
  const FadingDistribution& distribution() const noexcept { return distribution_; }

  /// Header `s,pdf,cdf`.
  void write_csv(std::ostream& out) const;

 private:
  EquivalentChannel(std::vector<double> s, std::vector<double> pdf, std::vector<double> cdf,
                    double P_t, double P_r, double mass_below);

  std::vector<double> s_;
  std::vector<double> pdf_;
  std::vector<double> cdf_;
  double P_t_;
  double P_r_;
  double mass_below_;
  FadingDistribution distribution_;
};

/// Single-hop layering over the equivalent channel. The layering budget is
/// P_t because s is normalised by the source power.
AllocationSolution af_expected_distortion(const EquivalentChannel& channel, double b);
AllocationSolution af_expected_distortion(double P_t, double P_r, double b,
                                          const EquivalentGridOptions& options = {});

}  // namespace relaycast
