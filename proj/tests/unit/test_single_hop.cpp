#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "discrete_layers.hpp"
#include "reference.hpp"
#include "relaycast/distributions.hpp"
#include "relaycast/numerics.hpp"
#include "relaycast/single_hop.hpp"
#include "test_support.hpp"

using namespace relaycast;
using relaycast::test::code_of;

namespace {

const FadingDistribution kRayleigh = FadingDistribution::rayleigh();

double rayleigh_aux(double x, double x1, double b) {
  return std::pow(x * x * std::exp(-x) / (x1 * x1 * std::exp(-x1)), 1.0 / (b + 1.0));
}

const oracle::LayeredOptimum& oracle_p100_k40() {
  static const oracle::LayeredOptimum result =
      oracle::optimize_layers(oracle::geometric_strengths(40), 100.0, 1.0);
  return result;
}

}  // namespace

TEST_CASE("auxiliary_value examples") {
  CHECK(auxiliary_value(kRayleigh, 0.2, 0.2, 1.0) == 1.0);
  CHECK(auxiliary_value(kRayleigh, 0.5, 0.2, 1.0) ==
        doctest::Approx(std::sqrt(0.25 * std::exp(-0.5) / (0.04 * std::exp(-0.2)))).epsilon(1e-14));
  const auto g21 = FadingDistribution::gamma(2.0, 1.0);
  const auto f = [](double x) { return x * std::exp(-x); };
  CHECK(auxiliary_value(g21, 1.0, 0.3, 2.0) ==
        doctest::Approx(std::cbrt(f(1.0) / (0.09 * f(0.3)))).epsilon(1e-13));
}

TEST_CASE("auxiliary_value outside the growth region is rejected") {
  CHECK(code_of([] { auxiliary_value(kRayleigh, 2.5, 0.2, 1.0); }) ==
        ErrorCode::allocation_outside_growth_region);
  CHECK(code_of([] { auxiliary_value(kRayleigh, 0.5, 0.2, 0.0); }) == ErrorCode::domain_error);
}

TEST_CASE("power_of examples") {
  CHECK(power_of(kRayleigh, 0.7, 0.7, 1.0) == 0.0);

  const double oracle_power =
      oracle::simpson_fine([](double l) { return rayleigh_aux(l, 0.2, 1.0) / (l * l); }, 0.2, 1.0, 4000) +
      rayleigh_aux(1.0, 0.2, 1.0) - 1.0 / 0.2;
  CHECK(power_of(kRayleigh, 0.2, 1.0, 1.0) == doctest::Approx(oracle_power).epsilon(1e-9));

  CHECK(code_of([] { power_of(kRayleigh, 1.0, 0.2, 1.0); }) == ErrorCode::domain_error);
}

TEST_CASE("single-layer allocation telescopes to its power") {
  // I = 1 below x0 and 1 + x0 P above it: the power terms collapse to P.
  const double x1 = 0.1;
  const double x0 = 0.6;
  const double x2 = 1.4;
  for (double P : {0.5, 3.0, 80.0}) {
    const auto I = [&](double l) { return l < x0 ? 1.0 : 1.0 + x0 * P; };
    const double total = integrate([&](double l) { return I(l) / (l * l); }, x1, x0, 1e-12) +
                         integrate([&](double l) { return I(l) / (l * l); }, x0, x2, 1e-12) +
                         I(x2) / x2 - 1.0 / x1;
    CHECK(total == doctest::Approx(P).epsilon(1e-10));
  }
}

TEST_CASE("expected_distortion_of against a Simpson oracle") {
  const double x1 = 0.3;
  const double x2 = 1.0;
  const double b = 2.0;
  const double terminal = std::pow(rayleigh_aux(x2, x1, b), -b);
  const double oracle_value =
      oracle::simpson_fine([&](double l) { return std::exp(-l) * std::pow(rayleigh_aux(l, x1, b), -b); },
                           x1, x2, 4000) +
      (1.0 - std::exp(-x1)) + std::exp(-x2) * terminal;
  CHECK(expected_distortion_of(kRayleigh, x1, x2, b) == doctest::Approx(oracle_value).epsilon(1e-9));
  CHECK(expected_distortion_of(kRayleigh, x1, x2, b, 0.5) ==
        doctest::Approx(oracle_value + std::exp(-x2) * (0.5 - terminal)).epsilon(1e-9));
}

TEST_CASE("upper boundary of the Rayleigh and Gamma(2,1) hops") {
  const auto ray = solve_single_hop(kRayleigh, 10.0, 1.0);
  CHECK(std::abs(ray.x2 - 1.0) <= 1e-12);
  const auto region = growth_regions(FadingDistribution::gamma(2.0, 1.0)).intervals.front();
  const double golden = solve_upper_boundary(FadingDistribution::gamma(2.0, 1.0), region);
  CHECK(golden == doctest::Approx(std::numbers::phi).epsilon(1e-10));
  CHECK(code_of([] { solve_upper_boundary(kRayleigh, Interval{1.5, 2.0}); }) ==
        ErrorCode::boundary_condition_unsolvable);
}

TEST_CASE("reference values of the Rayleigh single hop") {
  CHECK(solve_single_hop(kRayleigh, 1.0, 1.0).expected_distortion == doctest::Approx(0.79022).epsilon(1e-4));
  CHECK(solve_single_hop(kRayleigh, 10.0, 1.0).expected_distortion ==
        doctest::Approx(0.412358).epsilon(1e-5));
  const auto sol = solve_single_hop(kRayleigh, 100.0, 1.0);
  CHECK(sol.expected_distortion == doctest::Approx(0.131351).epsilon(1e-5));
  CHECK(sol.x1 == doctest::Approx(0.028038).epsilon(1e-4));
}

TEST_CASE("vanishing power leaves the distortion at 1") {
  const auto sol = solve_single_hop(kRayleigh, 1e-8, 1.0);
  CHECK(sol.expected_distortion == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sol.x2 - sol.x1 < 1e-3);
  CHECK(code_of([] { solve_single_hop(kRayleigh, 0.0, 1.0); }) == ErrorCode::domain_error);
}

TEST_CASE("solution invariants over power and mismatch") {
  for (double b : {0.5, 1.0, 2.0}) {
    for (double P : {0.3, 5.0, 200.0}) {
      CAPTURE(b);
      CAPTURE(P);
      const auto sol = solve_single_hop(kRayleigh, P, b);
      CHECK(sol.x1 < sol.x2);
      CHECK(sol.x1 > 0.0);
      CHECK(sol.aux(sol.x1) == doctest::Approx(1.0).epsilon(1e-12));
      double prev = sol.aux(sol.x1);
      for (int i = 1; i <= 200; ++i) {
        const double x = sol.x1 + (sol.x2 - sol.x1) * i / 200.0;
        const double v = sol.aux(x);
        CHECK(v >= prev);
        prev = v;
      }
      CHECK(sol.expected_distortion > 0.0);
      CHECK(sol.expected_distortion <= 1.0);
      CHECK(std::abs(power_of(kRayleigh, sol.x1, sol.x2, b) - P) <= 1e-6 * std::max(1.0, P));
      CHECK(sol.power_used <= P + 1e-6);
      CHECK(std::abs(sol.x2 * std::exp(-sol.x2) - std::exp(-sol.x2)) <= 1e-8);
    }
  }
}

TEST_CASE("distortion is nonincreasing in power") {
  double prev = 1.0;
  for (int i = 0; i < 10; ++i) {
    const double P = std::pow(10.0, -1.0 + 4.0 * i / 9.0);
    const double d = solve_single_hop(kRayleigh, P, 1.0).expected_distortion;
    CHECK(d <= prev);
    prev = d;
  }
}

TEST_CASE("continuous layering dominates finite layering") {
  for (double P : {10.0, 100.0}) {
    const double continuous = solve_single_hop(kRayleigh, P, 1.0).expected_distortion;
    for (std::size_t k : {2, 5, 10}) {
      CAPTURE(P);
      CAPTURE(k);
      const auto discrete = oracle::optimize_layers(oracle::geometric_strengths(k), P, 1.0);
      CHECK(continuous <= discrete.distortion + 1e-4);
    }
  }
  const double continuous = solve_single_hop(kRayleigh, 100.0, 1.0).expected_distortion;
  CHECK(continuous <= oracle_p100_k40().distortion + 1e-4);
}

TEST_CASE("P = 100 continuous distortion is within 1% of 40 layers") {
  const double continuous = solve_single_hop(kRayleigh, 100.0, 1.0).expected_distortion;
  const double discrete = oracle_p100_k40().distortion;
  CHECK(std::abs(continuous - discrete) <= 0.01 * discrete);
}

TEST_CASE("other families and tabulated tables") {
  const auto gamma = solve_single_hop(FadingDistribution::gamma(2.0, 1.0), 20.0, 1.0);
  CHECK(gamma.x2 == doctest::Approx(std::numbers::phi).epsilon(1e-9));
  CHECK(gamma.expected_distortion < 1.0);

  std::vector<double> x;
  std::vector<double> p;
  for (int i = 0; i <= 800; ++i) {
    x.push_back(40.0 * i / 800.0);
    p.push_back(std::exp(-x.back()));
  }
  const auto tab = solve_single_hop(FadingDistribution::tabulated(x, p), 10.0, 1.0);
  CHECK(tab.expected_distortion == doctest::Approx(0.412358).epsilon(2e-3));
}

TEST_CASE("budget larger than the region can absorb is infeasible") {
  // Support starts at 0.5, so the allocation cannot reach below it.
  std::vector<double> x;
  std::vector<double> p;
  for (int i = 0; i <= 600; ++i) {
    x.push_back(0.5 + 30.0 * i / 600.0);
    p.push_back(std::exp(-(x.back() - 0.5)));
  }
  const auto dist = FadingDistribution::tabulated(x, p);
  CHECK(solve_single_hop(dist, 0.5, 1.0).expected_distortion < 1.0);
  CHECK(code_of([&] { solve_single_hop(dist, 10.0, 1.0); }) == ErrorCode::infeasible_power_budget);
}
