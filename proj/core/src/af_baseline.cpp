#include "relaycast/af_baseline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "relaycast/csv.hpp"
#include "relaycast/error.hpp"
#include "relaycast/numerics.hpp"

namespace relaycast {
namespace {

void validate_powers(double s, double P_t, double P_r) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    std::ostringstream msg;
    msg << "equivalent strength must be positive (got " << s << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
  if (!(P_t > 0.0) || !(P_r > 0.0) || !std::isfinite(P_t) || !std::isfinite(P_r)) {
    throw Error(ErrorCode::domain_error, "transmit powers must be positive");
  }
}

// Sums integral_0^inf h(u) du over pieces split at the scale where the
// singular exponent is of order one.
template <typename H>
double integrate_u(const H& h, double scale) {
  IntegrationOptions options;
  options.rel_tol = 1e-11;
  options.abs_tol = 1e-300;
  const double a = scale;
  const double b = std::max(10.0 * scale, 1.0);
  return integrate_with_error(h, 0.0, a, options).value +
         integrate_with_error(h, a, b, options).value +
         integrate_with_error(h, b, std::numeric_limits<double>::infinity(), options).value;
}

struct Substitution {
  double s;
  double c;    // P_t s / P_r, the lower end of l
  double P_r;
  double scale;

  Substitution(double s_, double P_t, double P_r_) : s(s_), c(P_t * s_ / P_r_), P_r(P_r_) {
    scale = std::sqrt(s * (1.0 + c * P_r) / P_r);
  }

  // Exponent -l - s (1 + l P_r) / (l P_r - s P_t) at l = c + u^2.
  double exponent(double u) const {
    const double u2 = u * u;
    const double l = c + u2;
    return -l - s * (1.0 + l * P_r) / (u2 * P_r);
  }
};

}  // namespace

double af_equivalent_pdf(double s, double P_t, double P_r) {
  validate_powers(s, P_t, P_r);
  const Substitution sub(s, P_t, P_r);
  const auto h = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double e = sub.exponent(u);
    if (e < -745.0) return 0.0;
    const double l = sub.c + u * u;
    // l P_r (1 + l P_r) / (u^2 P_r)^2 * 2u
    return 2.0 * l * (1.0 + l * P_r) / (u * u * u * P_r) * std::exp(e);
  };
  return integrate_u(h, sub.scale);
}

double af_equivalent_survival(double s, double P_t, double P_r) {
  validate_powers(s, P_t, P_r);
  const Substitution sub(s, P_t, P_r);
  const auto h = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double e = sub.exponent(u);
    if (e < -745.0) return 0.0;
    return 2.0 * u * std::exp(e);
  };
  return integrate_u(h, sub.scale);
}

double af_equivalent_cdf(double s, double P_t, double P_r) {
  return 1.0 - af_equivalent_survival(s, P_t, P_r);
}

EquivalentChannel::EquivalentChannel(std::vector<double> s, std::vector<double> pdf,
                                     std::vector<double> cdf, double P_t, double P_r,
                                     double mass_below)
    : s_(std::move(s)),
      pdf_(std::move(pdf)),
      cdf_(std::move(cdf)),
      P_t_(P_t),
      P_r_(P_r),
      mass_below_(mass_below),
      distribution_(FadingDistribution::tabulated(s_, pdf_, mass_below)) {}

EquivalentChannel EquivalentChannel::build(double P_t, double P_r,
                                           const EquivalentGridOptions& options) {
  validate_powers(1.0, P_t, P_r);
  if (options.points < 2 || !(options.s_min > 0.0) || !(options.tail_mass > 0.0)) {
    throw Error(ErrorCode::domain_error, "equivalent grid needs >= 2 points, s_min > 0, tail_mass > 0");
  }
  double s_max = 1.0;
  while (af_equivalent_survival(s_max, P_t, P_r) >= options.tail_mass) {
    s_max *= 2.0;
    if (s_max > 1e6) throw Error(ErrorCode::domain_error, "equivalent channel tail does not decay");
  }
  s_max = std::max(s_max, 10.0 * options.s_min);

  const std::size_t n = options.points;
  std::vector<double> s(n);
  const double a = std::log(options.s_min);
  const double step = (std::log(s_max) - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) s[i] = std::exp(a + step * static_cast<double>(i));
  s.front() = options.s_min;
  s.back() = s_max;

  std::vector<double> pdf(n);
  std::vector<double> cdf(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      pdf[i] = af_equivalent_pdf(s[i], P_t, P_r);
      cdf[i] = af_equivalent_cdf(s[i], P_t, P_r);
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  const double mass_below = cdf.front();
  return EquivalentChannel(std::move(s), std::move(pdf), std::move(cdf), P_t, P_r, mass_below);
}

double EquivalentChannel::mass() const {
  const MonotoneCubic table(s_, pdf_);
  return mass_below_ + table.integral(table.front(), table.back());
}

void EquivalentChannel::write_csv(std::ostream& out) const {
  out << "s,pdf,cdf\n";
  for (std::size_t i = 0; i < s_.size(); ++i) {
    out << format_number(s_[i]) << ',' << format_number(pdf_[i]) << ',' << format_number(cdf_[i])
        << '\n';
  }
}

AllocationSolution af_expected_distortion(const EquivalentChannel& channel, double b) {
  return solve_single_hop(channel.distribution(), channel.P_t(), b);
}

AllocationSolution af_expected_distortion(double P_t, double P_r, double b,
                                          const EquivalentGridOptions& options) {
  if (!(b > 0.0)) throw Error(ErrorCode::domain_error, "mismatch factor b must be positive");
  return af_expected_distortion(EquivalentChannel::build(P_t, P_r, options), b);
}

}  // namespace relaycast
