#include <benchmark/benchmark.h>

#include <random>

#include "muord/continuation.hpp"
#include "muord/degree_calculus.hpp"
#include "muord/dieudonne.hpp"
#include "muord/hecke.hpp"

using namespace muord;

namespace {

PlaceDatum place_l(std::vector<int> a, int ab) {
    std::vector<std::pair<int, int>> sig;
    for (int x : a) sig.emplace_back(x, ab - x);
    return PlaceDatum(PlaceCase::L, sig);
}

PlaceDatum place_u(std::vector<int> a, int ab) {
    std::vector<std::pair<int, int>> sig;
    for (int x : a) sig.emplace_back(x, ab - x);
    return PlaceDatum(PlaceCase::U, sig);
}

void BM_FrobeniusKernels(benchmark::State& state) {
    auto place = place_l({1, 2, 2}, 4);
    for (auto _ : state) {
        auto mod = dieudonne::assemble_mu_ordinary(place, 2, place.f + 1);
        benchmark::DoNotOptimize(dieudonne::frobenius_kernels(mod, place));
    }
}
BENCHMARK(BM_FrobeniusKernels);

void BM_UniquenessSearch(benchmark::State& state) {
    auto place = place_u({1, 1, 2}, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(degree::search_uniqueness(place, 1, state.range(0)));
}
BENCHMARK(BM_UniquenessSearch)->Arg(2)->Arg(4);

void BM_TechnicalSweep(benchmark::State& state) {
    auto place = place_u({1, 1, 1}, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(degree::check_technical(place, 1, Rat(3, 8), state.range(0)));
}
BENCHMARK(BM_TechnicalSweep)->Arg(2)->Arg(4);

void BM_SampleTransition(benchmark::State& state) {
    auto place = place_l({1, 2}, 3);
    auto st = hecke::FlagState::all_maximal(place, 4);
    std::mt19937_64 rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(hecke::sample_transition(st, 1, rng));
}
BENCHMARK(BM_SampleTransition);

void BM_ExhaustiveTransitions(benchmark::State& state) {
    auto place = place_u({1, 2}, 4);
    auto st = hecke::FlagState::all_maximal(place, 2);
    for (auto _ : state) {
        long long count = 0;
        hecke::for_each_transition(st, 1, [&](const hecke::Transition&) {
            ++count;
            return false;
        });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_ExhaustiveTransitions);

void BM_DecompoExpand(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(continuation::decompo_expand(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_DecompoExpand)->Arg(5)->Arg(10);

void BM_ContractionSteps(benchmark::State& state) {
    auto place = place_l({1, 2, 2}, 4);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            continuation::contraction_steps(place, 2, Rat(3, 4), Rat(1, 4), 4));
}
BENCHMARK(BM_ContractionSteps);

}  // namespace

BENCHMARK_MAIN();
