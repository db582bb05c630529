#include "relaycast/second_hop.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "relaycast/csv.hpp"
#include "relaycast/error.hpp"

namespace relaycast {
namespace {

double log_strength_density(const FadingDistribution& dist, double x) {
  return 2.0 * std::log(x) + dist.log_pdf(x);
}

void validate_dr(double dr) {
  if (!(dr > 0.0 && dr <= 1.0)) {
    std::ostringstream msg;
    msg << "relay distortion D_r must lie in (0, 1] (got " << dr << ")";
    throw Error(ErrorCode::domain_error, msg.str());
  }
}

Error collapse(double dr, const std::string& why) {
  std::ostringstream msg;
  msg << "relay interval collapse at D_r = " << dr << ": " << why;
  return Error(ErrorCode::relay_interval_collapse, msg.str());
}

}  // namespace

SecondHopSolver::SecondHopSolver(FadingDistribution dist, double relay_power, double b)
    : dist_(std::move(dist)), power_(relay_power), b_(b) {
  unconstrained_ = std::make_shared<const AllocationSolution>(solve_single_hop(dist_, power_, b_));
  region_ = *growth_regions(dist_).region_of(unconstrained_->x1);
  terminal_ = std::pow(unconstrained_->aux(unconstrained_->x2), -b_);
}

double SecondHopSolver::l2_for(double l1, double log_cap) const {
  // Last layer of an allocation anchored at l1 that reaches I = cap.
  const double x2 = unconstrained_->x2;
  const double target = log_strength_density(dist_, l1) + (b_ + 1.0) * log_cap;
  const auto residual = [&](double x) { return log_strength_density(dist_, x) - target; };
  // At l1 = l1_max the residual at x2 is zero up to rounding.
  if (l1 >= x2 || residual(x2) <= 0.0) return x2;
  return find_root(residual, Bracket(l1, x2), 1e-15 * std::max(1.0, x2));
}

RelayInterval SecondHopSolver::interval(double dr) const {
  validate_dr(dr);
  if (dr <= terminal_) {
    return {unconstrained_->x1, unconstrained_->x2, false};
  }
  const double lo = region_.lo;
  if (dr == 1.0) return {lo, lo, true};

  const double log_cap = -std::log(dr) / b_;
  const double x2 = unconstrained_->x2;
  const double floor = lo > 0.0 ? lo : std::numeric_limits<double>::min();

  // Largest l1: the one whose l2 lands on the unconstrained upper edge.
  const double anchor = log_strength_density(dist_, x2) - (b_ + 1.0) * log_cap;
  const auto edge = [&](double l1) { return log_strength_density(dist_, l1) - anchor; };
  if (edge(floor) > 0.0) throw collapse(dr, "no anchor reaches the required rate");
  const double l1_max = find_root(edge, Bracket(floor, x2), 1e-15 * std::max(1.0, x2));

  const auto power_residual = [&](double l1) {
    return detail::power_unchecked(dist_, l1, l2_for(l1, log_cap), b_) - power_;
  };
  if (power_residual(l1_max) >= 0.0) throw collapse(dr, "budget exceeds the unconstrained optimum");

  double lower = 0.5 * (lo + l1_max);
  while (power_residual(lower) <= 0.0) {
    lower = lo + 0.5 * (lower - lo);
    if (lower - lo < 1e-300 || lower <= floor) {
      throw collapse(dr, "power budget cannot be spent on any interval");
    }
  }
  const double l1 =
      find_root(power_residual, Bracket(lower, l1_max), 1e-15 * std::max(1.0, l1_max));
  return {l1, l2_for(l1, log_cap), true};
}

double SecondHopSolver::g(double dr) const { return g(dr, interval(dr)); }

double SecondHopSolver::g(double dr, const RelayInterval& iv) const {
  if (!iv.boundary_active) return unconstrained_->expected_distortion;
  if (iv.l1 == iv.l2) return dist_.cdf(iv.l1) + dist_.survival(iv.l2) * dr;
  return detail::distortion_unchecked(dist_, iv.l1, iv.l2, b_, dr);
}

RelayInterval solve_relay_interval(const FadingDistribution& dist_r, double relay_power, double b,
                                   double dr) {
  validate_dr(dr);
  return SecondHopSolver(dist_r, relay_power, b).interval(dr);
}

double g_of_dr(const FadingDistribution& dist_r, double relay_power, double b, double dr) {
  validate_dr(dr);
  return SecondHopSolver(dist_r, relay_power, b).g(dr);
}

double g_derivative(const FadingDistribution& dist_r, double l2) {
  return dist_r.survival(l2) - l2 * dist_r.pdf(l2);
}

std::vector<double> dr_grid(const GridSpec& spec) {
  if (spec.points < 2 || !(spec.dr_min > 0.0) || !(spec.dr_min < spec.dr_max) ||
      spec.dr_max > 1.0) {
    throw Error(ErrorCode::domain_error, "D_r grid needs >= 2 points with 0 < dr_min < dr_max <= 1");
  }
  std::vector<double> grid(spec.points);
  const double a = std::log(spec.dr_min);
  const double step = (std::log(spec.dr_max) - a) / static_cast<double>(spec.points - 1);
  for (std::size_t i = 0; i < spec.points; ++i) grid[i] = std::exp(a + step * static_cast<double>(i));
  grid.front() = spec.dr_min;
  grid.back() = spec.dr_max;
  return grid;
}

std::size_t GProfile::active_count() const {
  return static_cast<std::size_t>(std::count(boundary_active.begin(), boundary_active.end(), true));
}

double GProfile::min_g() const {
  if (g.empty()) throw Error(ErrorCode::invalid_table, "empty G profile");
  return *std::min_element(g.begin(), g.end());
}

void GProfile::write_csv(std::ostream& out) const {
  out << "dr,g,g_d,l1,l2,boundary_active\n";
  for (std::size_t i = 0; i < dr.size(); ++i) {
    out << format_number(dr[i]) << ',' << format_number(g[i]) << ',' << format_number(g_d[i]) << ','
        << format_number(l1[i]) << ',' << format_number(l2[i]) << ','
        << (boundary_active[i] ? 1 : 0) << '\n';
  }
}

GProfile build_g_profile(const FadingDistribution& dist_r, double relay_power, double b,
                         const GridSpec& grid, unsigned threads) {
  const std::vector<double> drs = dr_grid(grid);
  const SecondHopSolver solver(dist_r, relay_power, b);

  struct Point {
    RelayInterval interval;
    double g = 0.0;
    double g_d = 0.0;
    bool ok = false;
  };
  std::vector<Point> points(drs.size());
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < drs.size(); i = next++) {
      try {
        Point p;
        p.interval = solver.interval(drs[i]);
        p.g = solver.g(drs[i], p.interval);
        p.g_d = p.interval.boundary_active ? g_derivative(dist_r, p.interval.l2) : 0.0;
        p.ok = true;
        points[i] = p;
      } catch (const Error&) {
        points[i].ok = false;
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(drs.size()));
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }

  GProfile profile;
  profile.relay_power = relay_power;
  profile.b = b;
  for (std::size_t i = 0; i < drs.size(); ++i) {
    const Point& p = points[i];
    if (!p.ok) {
      profile.failed_dr.push_back(drs[i]);
      continue;
    }
    profile.dr.push_back(drs[i]);
    profile.g.push_back(p.g);
    profile.g_d.push_back(p.g_d);
    profile.l1.push_back(p.interval.l1);
    profile.l2.push_back(p.interval.l2);
    profile.boundary_active.push_back(p.interval.boundary_active);
  }
  if (10 * profile.failed_dr.size() > drs.size() || profile.size() < 2) {
    std::ostringstream msg;
    msg << profile.failed_dr.size() << " of " << drs.size() << " D_r grid points failed";
    if (!profile.failed_dr.empty()) msg << " (first at D_r = " << profile.failed_dr.front() << ")";
    throw Error(ErrorCode::profile_failed, msg.str());
  }
  return profile;
}

GInterpolant::GInterpolant(const GProfile& profile) {
  if (profile.size() < 2) throw Error(ErrorCode::invalid_table, "G profile needs >= 2 points");
  std::vector<double> x(profile.size());
  std::transform(profile.dr.begin(), profile.dr.end(), x.begin(), [](double v) { return std::log(v); });
  table_ = std::make_shared<const MonotoneCubic>(std::move(x), profile.g);
}

double GInterpolant::operator()(double dr) const {
  // MonotoneCubic clamps outside its knots, which holds the end values.
  return (*table_)(std::log(dr));
}

double gd_parametric(double dr, double p_r, double B) {
  return std::exp(-(std::pow(dr, -1.0 / B) - 1.0) / p_r);
}

double g_closed_form(double dr, const ParametricFit& fit) {
  const double p = fit.p_r;
  const double B = fit.B;
  const double u = std::pow(dr, -1.0 / B) / p;
  // (B / p^B) e^(1/p) Gamma(-B, u), with the prefactor kept in log form.
  const double gamma = upper_incomplete_gamma(-B, u);
  if (gamma == 0.0) return fit.g_offset;
  return std::exp(std::log(B) - B * std::log(p) + 1.0 / p) * gamma + fit.g_offset;
}

ParametricFit fit_g_parametric(const GProfile& profile, const FitOptions& options) {
  std::vector<FitSample> samples;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile.boundary_active[i] && profile.g_d[i] > 0.0) {
      samples.push_back({profile.dr[i], profile.g_d[i]});
    }
  }
  if (samples.size() < 20) {
    std::ostringstream msg;
    msg << "parametric family mismatch: only " << samples.size()
        << " boundary-active profile points (need >= 20)";
    throw Error(ErrorCode::parametric_family_mismatch, msg.str());
  }
  const TwoParamFit raw = fit_two_param(
      [](double x, double p, double q) { return gd_parametric(x, p, q); }, samples, options);

  ParametricFit fit;
  fit.p_r = raw.p;
  fit.B = raw.q;
  fit.rms_rel = raw.rms_rel;

  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double w = 1.0 / (profile.g[i] * profile.g[i]);
    numerator += w * (profile.g[i] - g_closed_form(profile.dr[i], fit));
    denominator += w;
  }
  fit.g_offset = numerator / denominator;
  return fit;
}

double closed_form_rms(const GProfile& profile, const ParametricFit& fit, double lo, double hi) {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile.dr[i] < lo || profile.dr[i] > hi) continue;
    const double rel = (g_closed_form(profile.dr[i], fit) - profile.g[i]) / profile.g[i];
    sum += rel * rel;
    ++n;
  }
  if (n == 0) throw Error(ErrorCode::domain_error, "no profile points in the requested D_r range");
  return std::sqrt(sum / static_cast<double>(n));
}

}  // namespace relaycast
