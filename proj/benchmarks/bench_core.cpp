// bench_core.cpp — Timings for Λ construction, diagonalization, sampling, fields.

#include <benchmark/benchmark.h>

#include "pulsemix/fields.hpp"
#include "pulsemix/sampler.hpp"
#include "pulsemix/thermal.hpp"
#include "pulsemix/verify.hpp"

using namespace pulsemix;

namespace {

const ThermalContext& ctx() {
    static const ThermalContext c(1.0, Dispersion::linear(1.0));
    return c;
}

void BM_LambdaDiscrete(benchmark::State& state) {
    const SpectralWindow w(10.0, 1.0, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lambda_discrete(ctx(), w, SiteIndexSet::full(w)));
}
BENCHMARK(BM_LambdaDiscrete)->Arg(21)->Arg(99)->Arg(243);

void BM_LambdaContinuum(benchmark::State& state) {
    const SpectralWindow w(10.0, 1.0, 21);
    const auto sites = SiteIndexSet::centered(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lambda_continuum(ctx(), w, sites));
}
BENCHMARK(BM_LambdaContinuum)->Arg(41)->Arg(101);

void BM_Diagonalize(benchmark::State& state) {
    const SpectralWindow w(10.0, 1.0, static_cast<int>(state.range(0)));
    const auto lambda = lambda_discrete(ctx(), w, SiteIndexSet::full(w));
    for (auto _ : state) benchmark::DoNotOptimize(diagonalize(lambda));
}
BENCHMARK(BM_Diagonalize)->Arg(21)->Arg(99)->Arg(243);

void BM_RandomPulseSet(benchmark::State& state) {
    const SpectralWindow w(10.0, 1.0, 21);
    const auto lambda = lambda_continuum(ctx(), w, SiteIndexSet::centered(41));
    const auto eig = diagonalize(lambda);
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(random_pulse_set(eig, lambda.gamma, seed++));
}
BENCHMARK(BM_RandomPulseSet);

void BM_PulseSetField(benchmark::State& state) {
    const SpectralWindow w(10.0, 1.0, 21);
    const auto lambda = lambda_discrete(ctx(), w, SiteIndexSet::full(w));
    const auto pulse = typical_pulse_set(diagonalize(lambda), lambda.gamma, 1);
    const FieldGrid grid{-15.0, 15.0, static_cast<int>(state.range(0)), true};
    for (auto _ : state) benchmark::DoNotOptimize(pulse_set_field(pulse, w, grid));
}
BENCHMARK(BM_PulseSetField)->Arg(1201)->Arg(12001);

void BM_VerifyMoments(benchmark::State& state) {
    const SpectralWindow w(5.0, 1.0, 9);
    for (auto _ : state) benchmark::DoNotOptimize(verify_moments(ctx(), w, state.range(0), 1));
}
BENCHMARK(BM_VerifyMoments)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
