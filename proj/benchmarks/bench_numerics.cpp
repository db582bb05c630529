#include <benchmark/benchmark.h>

#include <cmath>
#include <limits>

#include "relaycast/numerics.hpp"

namespace {

void BM_LambertW(benchmark::State& state) {
  double x = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::lambert_w(x));
    x = x < 1e6 ? x * 1.7 : 1e-6;
  }
}
BENCHMARK(BM_LambertW);

void BM_LambertWOfExp(benchmark::State& state) {
  double l = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::lambert_w_of_exp(l));
    l = l < 2000.0 ? l * 1.3 : 1.0;
  }
}
BENCHMARK(BM_LambertWOfExp);

void BM_UpperIncompleteGammaNegative(benchmark::State& state) {
  const double a = -0.4386;
  double x = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::upper_incomplete_gamma(a, x));
    x = x < 50.0 ? x * 1.4 : 1e-3;
  }
}
BENCHMARK(BM_UpperIncompleteGammaNegative);

void BM_IntegrateExponentialTail(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::integrate(
        [](double x) { return x * std::exp(-x); }, 0.0, std::numeric_limits<double>::infinity()));
  }
}
BENCHMARK(BM_IntegrateExponentialTail);

}  // namespace
