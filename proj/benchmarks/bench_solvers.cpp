#include <benchmark/benchmark.h>

#include "relaycast/af_baseline.hpp"
#include "relaycast/first_hop.hpp"
#include "relaycast/second_hop.hpp"
#include "relaycast/single_hop.hpp"
#include "relaycast/single_layer.hpp"

namespace {

using relaycast::FadingDistribution;

void BM_SingleHop(benchmark::State& state) {
  const auto dist = FadingDistribution::rayleigh();
  const double power = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::solve_single_hop(dist, power, 1.0).expected_distortion);
  }
}
BENCHMARK(BM_SingleHop)->Arg(1)->Arg(100)->Arg(10000);

void BM_GProfile(benchmark::State& state) {
  const auto dist = FadingDistribution::rayleigh();
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::build_g_profile(dist, 100.0, 1.0, {}, 1).g.back());
  }
}
BENCHMARK(BM_GProfile)->Unit(benchmark::kMillisecond);

void BM_DecodeForward(benchmark::State& state) {
  const auto dist = FadingDistribution::rayleigh();
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::solve_decode_forward(dist, dist, 100.0, 100.0, 1.0).expected_distortion);
  }
}
BENCHMARK(BM_DecodeForward)->Unit(benchmark::kMillisecond);

void BM_AfEquivalentPdf(benchmark::State& state) {
  double s = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::af_equivalent_pdf(s, 100.0, 100.0));
    s = s < 5.0 ? s * 1.5 : 1e-4;
  }
}
BENCHMARK(BM_AfEquivalentPdf);

void BM_AfDistortion(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::af_expected_distortion(100.0, 1000.0, 1.0).expected_distortion);
  }
}
BENCHMARK(BM_AfDistortion)->Unit(benchmark::kMillisecond);

void BM_SingleLayer(benchmark::State& state) {
  const auto dist = FadingDistribution::rayleigh();
  for (auto _ : state) {
    benchmark::DoNotOptimize(relaycast::single_layer_distortion(dist, dist, 100.0, 100.0, 1.0).distortion);
  }
}
BENCHMARK(BM_SingleLayer)->Unit(benchmark::kMillisecond);

}  // namespace
