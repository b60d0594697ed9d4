#include <orderscope/orderscope.hpp>

#include <benchmark/benchmark.h>

using namespace orderscope;

static void BM_DavenportCyclic(benchmark::State& state)
{
    auto G = FiniteAbelianGroup::make({state.range(0)});
    for (auto _ : state)
        benchmark::DoNotOptimize(davenport(G));
}
BENCHMARK(BM_DavenportCyclic)->DenseRange(4, 12, 4);

static void BM_DavenportRankTwo(benchmark::State& state)
{
    auto G = FiniteAbelianGroup::make({state.range(0), state.range(0)});
    for (auto _ : state)
        benchmark::DoNotOptimize(davenport(G));
}
BENCHMARK(BM_DavenportRankTwo)->Arg(2)->Arg(3)->Arg(4);

static void BM_LengthSet(benchmark::State& state)
{
    auto G = FiniteAbelianGroup::make({3});
    auto s = parse_sequence(G, "(1)x" + std::to_string(state.range(0)) + " (2)x" + std::to_string(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(length_set(s));
}
BENCHMARK(BM_LengthSet)->Arg(4)->Arg(8);

static void BM_ClassGroup(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(QuadField::make(state.range(0)));
}
BENCHMARK(BM_ClassGroup)->Arg(-199)->Arg(-105)->Arg(94)->Arg(223)->Arg(-9239);

static void BM_Decide(benchmark::State& state)
{
    auto F = QuadField::make(state.range(0));
    for (auto _ : state) {
        auto O = Order::make(F, state.range(1));
        benchmark::DoNotOptimize(decide(O));
    }
}
BENCHMARK(BM_Decide)->Args({5, 2})->Args({-1, 4})->Args({10, 3})->Args({13, 8});

static void BM_VerifyT2(benchmark::State& state)
{
    auto O = Order::make(QuadField::make(state.range(0)), state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_T2(O, static_cast<std::uint64_t>(state.range(2)), {}, 1));
}
BENCHMARK(BM_VerifyT2)->Args({5, 2, 400})->Args({13, 4, 400})->Args({-3, 2, 400})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
