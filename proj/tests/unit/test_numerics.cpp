#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "reference.hpp"
#include "relaycast/error.hpp"
#include "relaycast/numerics.hpp"
#include "test_support.hpp"

using namespace relaycast;
using relaycast::test::code_of;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("integrate on simple closed forms") {
  CHECK(integrate([](double x) { return x; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, kInf) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return x * std::exp(-x); }, 0.0, kInf) ==
        doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("integrate reports its error estimate") {
  IntegrationOptions opt;
  opt.rel_tol = 1e-10;
  const auto r = integrate_with_error([](double x) { return std::sqrt(x); }, 0.0, 1.0, opt);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(r.error <= 1e-10 * r.value);
  CHECK(r.evaluations > 15);
}

TEST_CASE("integrate gives up with the best estimate on a divergent integrand") {
  IntegrationOptions opt;
  opt.max_subdivisions = 50;
  try {
    integrate_with_error([](double x) { return 1.0 / x; }, 0.0, 1.0, opt);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.code() == ErrorCode::integration_failed);
    CHECK(std::isfinite(e.estimate()));
    CHECK(e.error_bound() > 0.0);
  }
}

TEST_CASE("integrate rejects bad limits and tolerances") {
  CHECK(code_of([] { integrate([](double x) { return x; }, 1.0, 0.0); }) == ErrorCode::domain_error);
  CHECK(code_of([] { integrate([](double x) { return x; }, 0.0, 1.0, 0.0); }) ==
        ErrorCode::domain_error);
  CHECK(code_of([] { integrate([](double x) { return x; }, -kInf, 1.0); }) ==
        ErrorCode::domain_error);
}

TEST_CASE("integrate is linear on random polynomial pairs") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  const double tol = 1e-8;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> p(6);
    std::vector<double> q(6);
    for (auto& c : p) c = coef(rng);
    for (auto& c : q) c = coef(rng);
    const double alpha = coef(rng);
    const double beta = coef(rng);
    const auto poly = [](const std::vector<double>& c, double x) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
      return v;
    };
    const double lo = -1.0;
    const double hi = 2.0;
    const double ip = integrate([&](double x) { return poly(p, x); }, lo, hi, tol);
    const double iq = integrate([&](double x) { return poly(q, x); }, lo, hi, tol);
    const double icomb =
        integrate([&](double x) { return alpha * poly(p, x) + beta * poly(q, x); }, lo, hi, tol);
    const double scale = std::abs(alpha * ip) + std::abs(beta * iq) + 1.0;
    CHECK(std::abs(icomb - (alpha * ip + beta * iq)) <= 10.0 * tol * scale);
  }
}

TEST_CASE("find_root on known roots") {
  CHECK(find_root([](double x) { return x - 1.0; }, Bracket(0.0, 2.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  const double g2 = find_root([](double g) { return g * std::exp(-g) - std::exp(-g); },
                              Bracket(0.5, 2.0), 1e-14);
  CHECK(std::abs(g2 - 1.0) <= 1e-12);
  const auto sq = [](double x) { return x * x - 2.0; };
  const double reference = oracle::bisect(sq, 1.0, 2.0, 1e-15);
  CHECK(std::abs(find_root(sq, Bracket(1.0, 2.0), 1e-13) - reference) <= 1e-12);
  CHECK(std::abs(reference - std::numbers::sqrt2) <= 1e-14);
}

TEST_CASE("find_root requires a sign change") {
  CHECK(code_of([] { find_root([](double x) { return x * x + 1.0; }, Bracket(-1.0, 1.0)); }) ==
        ErrorCode::root_not_bracketed);
  CHECK(code_of([] { Bracket(1.0, 1.0); }) == ErrorCode::domain_error);
  CHECK(code_of([] { find_root([](double x) { return x; }, Bracket(-1.0, 1.0), 0.0); }) ==
        ErrorCode::domain_error);
}

TEST_CASE("find_root is idempotent within its tolerance") {
  const double tol = 1e-10;
  const auto funcs = std::vector<std::function<double(double)>>{
      [](double x) { return std::cos(x) - x; },
      [](double x) { return std::exp(x) - 3.0; },
      [](double x) { return x * x * x - 2.0 * x - 5.0; },
  };
  const std::vector<std::pair<double, double>> brackets{{0.0, 1.0}, {0.0, 2.0}, {2.0, 3.0}};
  for (std::size_t i = 0; i < funcs.size(); ++i) {
    const auto& f = funcs[i];
    const double root = find_root(f, Bracket(brackets[i].first, brackets[i].second), tol);
    const double again = find_root(f, Bracket(root - tol, root + tol), tol);
    CHECK(std::abs(again - root) <= tol);
  }
}

TEST_CASE("find_root_expanding and minimize_golden") {
  CHECK(find_root_expanding([](double x) { return x - 37.0; }, 0.0, 1.0) ==
        doctest::Approx(37.0).epsilon(1e-12));
  CHECK(code_of([] { find_root_expanding([](double) { return 1.0; }, 0.0, 1.0, 1e-10, 2.0, 5); }) ==
        ErrorCode::root_not_bracketed);
  CHECK(minimize_golden([](double x) { return (x - 0.3) * (x - 0.3); }, 0.0, 1.0, 1e-10) ==
        doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("lambert_w at reference points") {
  CHECK(lambert_w(0.0) == 0.0);
  CHECK(lambert_w(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-14));
  const double omega = oracle::lambert_w_newton(1.0);
  CHECK(std::abs(lambert_w(1.0) - omega) <= 1e-14);
  CHECK(omega == doctest::Approx(0.5671432904097838).epsilon(1e-14));
}

TEST_CASE("lambert_w satisfies w e^w = x on a log grid") {
  double worst = 0.0;
  for (int i = 0; i <= 240; ++i) {
    const double x = std::pow(10.0, -6.0 + 12.0 * i / 240.0);
    const double w = lambert_w(x);
    worst = std::max(worst, std::abs(w * std::exp(w) - x) / x);
  }
  CHECK(worst <= 1e-10);
  for (double x : {-0.3, -0.2, -0.1, -1e-3, -1e-8}) {
    const double w = lambert_w(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-10 * std::abs(x));
  }
}

TEST_CASE("lambert_w near and below the branch point") {
  CHECK(std::abs(lambert_w(-std::exp(-1.0)) + 1.0) <= 1e-6);
  CHECK(std::abs(lambert_w(-std::exp(-1.0) + 1e-12) + 1.0) <= 1e-5);
  CHECK(code_of([] { lambert_w(-0.5); }) == ErrorCode::domain_error);
}

TEST_CASE("lambert_w_of_exp agrees with lambert_w and survives overflow") {
  for (double l : {-20.0, -1.0, 0.0, 3.0, 50.0, 600.0}) {
    CHECK(lambert_w_of_exp(l) == doctest::Approx(lambert_w(std::exp(l))).epsilon(1e-13));
  }
  for (double l : {800.0, 5000.0, 1e6}) {
    const double w = lambert_w_of_exp(l);
    CHECK(std::abs(w + std::log(w) - l) <= 1e-12 * l);
  }
}

TEST_CASE("upper_incomplete_gamma at reference points") {
  CHECK(upper_incomplete_gamma(1.0, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(upper_incomplete_gamma(0.5, 2.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(2.0))).epsilon(1e-12));
  CHECK(upper_incomplete_gamma(0.0, 1.0) == doctest::Approx(0.21938393439552029).epsilon(1e-12));
  CHECK(exponential_integral_e1(0.1) == doctest::Approx(1.8229239584193906).epsilon(1e-12));
}

TEST_CASE("upper_incomplete_gamma for negative a against direct quadrature") {
  for (auto [a, x] : std::vector<std::pair<double, double>>{{-0.5, 1.0}, {-2.3, 0.4}, {-0.44, 3e-2},
                                                            {-1.7, 7.5}}) {
    const double quad = integrate(
        [a = a](double t) { return std::pow(t, a - 1.0) * std::exp(-t); }, x, kInf, 1e-12);
    CHECK(upper_incomplete_gamma(a, x) == doctest::Approx(quad).epsilon(1e-8));
  }
}

TEST_CASE("upper_incomplete_gamma satisfies its recurrence") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(-5.0, 5.0);
  std::uniform_real_distribution<double> ux(0.0, 20.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double a = ua(rng);
    if (std::abs(a - std::round(a)) < 1e-3) a += 0.01;
    double x = ux(rng);
    if (x == 0.0) x = 0.5;
    const double lhs = upper_incomplete_gamma(a + 1.0, x);
    const double rhs = a * upper_incomplete_gamma(a, x) + std::pow(x, a) * std::exp(-x);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("upper_incomplete_gamma rejects non-positive x for a <= 0") {
  CHECK(code_of([] { upper_incomplete_gamma(-0.5, 0.0); }) == ErrorCode::domain_error);
  CHECK(code_of([] { upper_incomplete_gamma(1.0, -1.0); }) == ErrorCode::domain_error);
}

TEST_CASE("fit_two_param recovers model-generated data") {
  const auto model = [](double x, double p, double q) {
    return std::exp(-(std::pow(x, -1.0 / q) - 1.0) / p);
  };
  std::vector<FitSample> samples;
  for (int i = 0; i < 30; ++i) {
    const double x = std::pow(10.0, -2.0 + 2.0 * i / 29.0);
    samples.push_back({x, model(x, 5.0, 2.0)});
  }
  const TwoParamFit fit = fit_two_param(model, samples);
  CHECK(fit.p == doctest::Approx(5.0).epsilon(0.01));
  CHECK(fit.q == doctest::Approx(2.0).epsilon(0.01));
  CHECK(fit.rms_rel < 1e-6);
}

TEST_CASE("fit_two_param flags degenerate and undersized inputs") {
  const auto model = [](double x, double p, double q) {
    return std::exp(-(std::pow(x, -1.0 / q) - 1.0) / p);
  };
  const std::vector<FitSample> flat(10, FitSample{1.0, 1.0});
  CHECK(code_of([&] { fit_two_param(model, flat); }) == ErrorCode::parametric_family_mismatch);

  const std::vector<FitSample> few(5, FitSample{0.5, 0.5});
  CHECK(code_of([&] { fit_two_param(model, few); }) == ErrorCode::domain_error);

  std::vector<FitSample> out_of_range;
  for (int i = 0; i < 10; ++i) out_of_range.push_back({0.1 * (i + 1), 1.5});
  CHECK(code_of([&] { fit_two_param(model, out_of_range); }) == ErrorCode::domain_error);

  // Alternating targets, far from any member of the family.
  std::vector<FitSample> wrong_shape;
  for (int i = 0; i < 12; ++i) {
    const double x = 0.05 + 0.08 * i;
    wrong_shape.push_back({x, i % 2 == 0 ? 1.0 : 1e-3});
  }
  CHECK(code_of([&] { fit_two_param(model, wrong_shape); }) == ErrorCode::parametric_family_mismatch);
}
