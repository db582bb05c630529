#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "discrete_layers.hpp"
#include "reference.hpp"
#include "relaycast/distributions.hpp"
#include "relaycast/numerics.hpp"
#include "relaycast/second_hop.hpp"
#include "relaycast/single_hop.hpp"
#include "test_support.hpp"

using namespace relaycast;
using relaycast::test::code_of;

namespace {

const FadingDistribution kRayleigh = FadingDistribution::rayleigh();

const GProfile& profile_p100() {
  static const GProfile profile = build_g_profile(kRayleigh, 100.0, 1.0);
  return profile;
}

const ParametricFit& fit_p100() {
  static const ParametricFit fit = fit_g_parametric(profile_p100());
  return fit;
}

// Eq. (19) in log form, relative to its right-hand side.
double boundary_residual(double l1, double l2, double b, double dr) {
  const double lhs = 2.0 * std::log(l2) - l2;
  const double rhs = -(b + 1.0) / b * std::log(dr) + 2.0 * std::log(l1) - l1;
  return lhs - rhs;
}

double oracle_power(double l1, double l2, double b, int panels) {
  const auto I = [&](double l) {
    return std::pow(l * l * std::exp(-l) / (l1 * l1 * std::exp(-l1)), 1.0 / (b + 1.0));
  };
  return oracle::simpson([&](double l) { return I(l) / (l * l); }, l1, l2, panels) + I(l2) / l2 -
         1.0 / l1;
}

}  // namespace

TEST_CASE("D_r = 1 collapses the relay interval") {
  const RelayInterval iv = solve_relay_interval(kRayleigh, 100.0, 1.0, 1.0);
  CHECK(iv.l1 == iv.l2);
  CHECK(g_of_dr(kRayleigh, 100.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(code_of([] { solve_relay_interval(kRayleigh, 100.0, 1.0, 0.0); }) == ErrorCode::domain_error);
  CHECK(code_of([] { solve_relay_interval(kRayleigh, 100.0, 1.0, 1.5); }) == ErrorCode::domain_error);
}

TEST_CASE("boundary-active intervals end at or below 1 for Rayleigh") {
  const SecondHopSolver solver(kRayleigh, 1000.0, 1.0);
  for (double dr : {0.01, 0.05, 0.2, 0.5, 0.9}) {
    CAPTURE(dr);
    const RelayInterval iv = solver.interval(dr);
    if (iv.boundary_active) CHECK(iv.l2 <= 1.0 + 1e-9);
    CHECK(iv.l1 <= iv.l2);
  }
}

TEST_CASE("P_r = 10, D_r = 0.1 lies below the unconstrained terminal distortion") {
  const SecondHopSolver solver(kRayleigh, 10.0, 1.0);
  CHECK(solver.unconstrained_terminal() > 0.1);
  const RelayInterval iv = solver.interval(0.1);
  CHECK_FALSE(iv.boundary_active);
  CHECK(std::abs(power_of(kRayleigh, iv.l1, iv.l2, 1.0) - 10.0) <= 1e-8 * 10.0);
  CHECK(iv.l2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(solver.g(0.1) == doctest::Approx(solve_single_hop(kRayleigh, 10.0, 1.0).expected_distortion));
}

TEST_CASE("P_r = 10, D_r = 0.3 satisfies both coupled equations") {
  const double b = 1.0;
  const double dr = 0.3;
  const RelayInterval iv = solve_relay_interval(kRayleigh, 10.0, b, dr);
  REQUIRE(iv.boundary_active);
  CHECK(std::abs(boundary_residual(iv.l1, iv.l2, b, dr)) <= 1e-8);
  CHECK(std::abs(power_of(kRayleigh, iv.l1, iv.l2, b) - 10.0) <= 1e-8 * 10.0);

  // Dense scan of both residuals over (0, 2)^2 with a plain Simpson power.
  const int n = 200;
  double best = std::numeric_limits<double>::infinity();
  double best_l1 = 0.0;
  double best_l2 = 0.0;
  std::vector<std::pair<double, double>> near_minimal;
  for (int i = 1; i < n; ++i) {
    const double l1 = 2.0 * i / n;
    for (int j = i + 1; j < n; ++j) {
      const double l2 = 2.0 * j / n;
      const double r1 = boundary_residual(l1, l2, b, dr);
      const double r2 = std::log(std::max(oracle_power(l1, l2, b, 60), 1e-300) / 10.0);
      const double r = r1 * r1 + r2 * r2;
      if (r < best) {
        best = r;
        best_l1 = l1;
        best_l2 = l2;
      }
      if (r < 0.05) near_minimal.emplace_back(l1, l2);
    }
  }
  CHECK(std::abs(best_l1 - iv.l1) <= 0.02);
  CHECK(std::abs(best_l2 - iv.l2) <= 0.02);
  for (const auto& [l1, l2] : near_minimal) {
    CHECK(std::hypot(l1 - iv.l1, l2 - iv.l2) <= 0.25);
  }
}

TEST_CASE("g_of_dr limits") {
  CHECK(g_of_dr(kRayleigh, 1e-9, 1.0, 0.3) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(g_of_dr(kRayleigh, 1e-9, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (double dr : {0.01, 0.1, 0.6}) {
    const double g = g_of_dr(kRayleigh, 30.0, 2.0, dr);
    CHECK(g >= dr);
    CHECK(g <= 1.0);
  }
}

TEST_CASE("g_of_dr at P_r = 100, D_r = 0.05 agrees with 40 floored layers") {
  const double continuous = g_of_dr(kRayleigh, 100.0, 1.0, 0.05);
  const auto discrete = oracle::optimize_layers(oracle::geometric_strengths(40), 100.0, 1.0, 0.05);
  CHECK(std::abs(continuous - discrete.distortion) <= 0.01 * discrete.distortion);
  CHECK(continuous <= discrete.distortion + 1e-4);
}

TEST_CASE("g_derivative examples") {
  CHECK(std::abs(g_derivative(kRayleigh, 1.0)) <= 1e-15);
  CHECK(g_derivative(kRayleigh, 0.5) == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-14));

  const SecondHopSolver solver(kRayleigh, 100.0, 1.0);
  const RelayInterval iv = solver.interval(0.2);
  REQUIRE(iv.boundary_active);
  const double h = 1e-4;
  const double fd = (solver.g(0.2 + h) - solver.g(0.2 - h)) / (2.0 * h);
  CHECK(std::abs(g_derivative(kRayleigh, iv.l2) - fd) <= 1e-3 * std::abs(fd));
}

TEST_CASE("profile invariants over relay power and mismatch") {
  for (double P_r : {1.0, 10.0, 100.0}) {
    for (double b : {0.5, 1.0, 2.0}) {
      CAPTURE(P_r);
      CAPTURE(b);
      const GProfile profile = build_g_profile(kRayleigh, P_r, b);
      REQUIRE(profile.size() == 120);
      CHECK(profile.failed_dr.empty());
      for (std::size_t i = 0; i < profile.size(); ++i) {
        CHECK(profile.g[i] > 0.0);
        CHECK(profile.g[i] <= 1.0 + 1e-12);
        CHECK(profile.g[i] >= profile.dr[i] - 1e-12);
        CHECK(profile.g_d[i] >= -1e-9);
        if (i > 0) CHECK(profile.g[i] - profile.g[i - 1] >= -1e-9);
        if (!profile.boundary_active[i]) continue;
        const double l1 = profile.l1[i];
        const double l2 = profile.l2[i];
        CHECK(l2 <= 1.0 + 1e-9);
        CHECK(l2 <= 2.0);
        if (profile.dr[i] < 1.0) {
          CHECK(l1 > 0.0);
          CHECK(std::abs(boundary_residual(l1, l2, b, profile.dr[i])) <= 1e-8);
          CHECK(std::abs(power_of(kRayleigh, l1, l2, b) - P_r) <= 1e-8 * std::max(1.0, P_r));
          double prev = 1.0;
          for (int k = 1; k < 200; ++k) {
            const double v = auxiliary_value(kRayleigh, l1 + (l2 - l1) * k / 200.0, l1, b);
            CHECK(v > prev);
            prev = v;
          }
        }
      }
    }
  }
}

TEST_CASE("profile derivative matches differences of the tabulated G") {
  // 960 points put neighbours 1% apart, fine enough for second-order differences.
  const GProfile profile = build_g_profile(kRayleigh, 100.0, 1.0, {960, 1e-4, 1.0});
  int checked = 0;
  for (std::size_t i = 1; i + 1 < profile.size(); ++i) {
    if (!profile.boundary_active[i - 1] || !profile.boundary_active[i + 1]) continue;
    if (profile.g_d[i] < 1e-3) continue;
    const double h0 = profile.dr[i] - profile.dr[i - 1];
    const double h1 = profile.dr[i + 1] - profile.dr[i];
    const double fd = (-h1 / (h0 * (h0 + h1))) * profile.g[i - 1] +
                      ((h1 - h0) / (h0 * h1)) * profile.g[i] + (h0 / (h1 * (h0 + h1))) * profile.g[i + 1];
    CAPTURE(profile.dr[i]);
    CHECK(std::abs(profile.g_d[i] - fd) <= 1e-3 * profile.g_d[i]);
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("profile endpoints and monotonicity in relay power") {
  const GProfile& p100 = profile_p100();
  const GInterpolant g(p100);
  CHECK(g(1e-4) < g(0.5));
  CHECK(g(0.5) < g(1.0));
  CHECK(g(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p100.g.back() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p100.min_g() == doctest::Approx(solve_single_hop(kRayleigh, 100.0, 1.0).expected_distortion));

  const GProfile p10 = build_g_profile(kRayleigh, 10.0, 1.0);
  REQUIRE(p10.size() == p100.size());
  for (std::size_t i = 0; i < p10.size(); ++i) CHECK(p100.g[i] <= p10.g[i] + 1e-9);
}

TEST_CASE("parallel and serial profiles are identical") {
  GridSpec grid;
  grid.points = 40;
  const GProfile serial = build_g_profile(kRayleigh, 30.0, 1.0, grid, 1);
  const GProfile parallel = build_g_profile(kRayleigh, 30.0, 1.0, grid, 4);
  CHECK(serial.g == parallel.g);
  CHECK(serial.l2 == parallel.l2);
}

TEST_CASE("dr_grid") {
  const auto grid = dr_grid({});
  REQUIRE(grid.size() == 120);
  CHECK(grid.front() == doctest::Approx(1e-4));
  CHECK(grid.back() == 1.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
  CHECK(code_of([] { dr_grid({1, 1e-4, 1.0}); }) == ErrorCode::domain_error);
  CHECK(code_of([] { dr_grid({10, 0.0, 1.0}); }) == ErrorCode::domain_error);
}

TEST_CASE("Eq 33 closed form tracks the tabulated G") {
  const ParametricFit& fit = fit_p100();
  CHECK(closed_form_rms(profile_p100(), fit, 1e-3, 1.0) <= 0.05);
  CHECK(gd_parametric(1.0, fit.p_r, fit.B) == 1.0);
  CHECK(gd_parametric(1.0, 3.0, 0.2) == 1.0);
}

TEST_CASE("fit baseline at P_r = 100, b = 1") {
  const ParametricFit& fit = fit_p100();
  CHECK(fit.p_r == doctest::Approx(377.598).epsilon(0.01));
  CHECK(fit.B == doctest::Approx(0.438594).epsilon(0.01));
  CHECK(fit.rms_rel == doctest::Approx(0.0728).epsilon(0.02));
  CHECK(fit.rms_rel <= 0.5);
}

TEST_CASE("fit of the relay G_D reaches 5% relative rms" * doctest::should_fail()) {
  CHECK(fit_p100().rms_rel <= 0.05);
}

TEST_CASE("closed form differentiates to the parametric derivative") {
  const ParametricFit& fit = fit_p100();
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double dr = std::pow(10.0, -3.0 + 3.0 * i / 60.0) * (i == 60 ? 0.999 : 1.0);
    const double h = 1e-5 * dr;
    const double derivative = (g_closed_form(dr + h, fit) - g_closed_form(dr - h, fit)) / (2.0 * h);
    worst = std::max(worst, std::abs(derivative - gd_parametric(dr, fit.p_r, fit.B)));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("fit needs enough boundary-active points") {
  GridSpec grid;
  grid.points = 15;
  const GProfile small = build_g_profile(kRayleigh, 100.0, 1.0, grid);
  CHECK(code_of([&] { fit_g_parametric(small); }) == ErrorCode::parametric_family_mismatch);
}

TEST_CASE("profile CSV") {
  GridSpec grid;
  grid.points = 5;
  const GProfile profile = build_g_profile(kRayleigh, 10.0, 1.0, grid);
  std::ostringstream out;
  profile.write_csv(out);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "dr,g,g_d,l1,l2,boundary_active");
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("Gamma relay hop keeps l2 inside its growth region") {
  const auto dist = FadingDistribution::gamma(2.0, 1.0);
  const GProfile profile = build_g_profile(dist, 50.0, 1.0, {60, 1e-3, 1.0});
  for (std::size_t i = 0; i < profile.size(); ++i) {
    CHECK(profile.l2[i] <= 3.0);
    CHECK(profile.g[i] >= profile.dr[i] - 1e-12);
    if (i > 0) CHECK(profile.g[i] >= profile.g[i - 1] - 1e-9);
  }
}
