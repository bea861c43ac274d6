#include "selfsim/family_diag.hpp"
#include "selfsim/family_shift.hpp"
#include "selfsim/render.hpp"
#include "selfsim/tiling_qp.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace selfsim;

namespace {

void BM_RenderShift(benchmark::State& state) {
    const ShiftParams params = ShiftParams::make(3, Rational(10));
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(render_shift(params, depth, 729, 243));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::pow(9, depth)));
}
BENCHMARK(BM_RenderShift)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);

void BM_RenderDiag(benchmark::State& state) {
    const DiagParams params = DiagParams::make(3, Rational(4));
    for (auto _ : state) benchmark::DoNotOptimize(render_diag(params, 7, 729, 729));
}
BENCHMARK(BM_RenderDiag)->Unit(benchmark::kMillisecond);

void BM_ComponentCount(benchmark::State& state) {
    const ShiftParams params = ShiftParams::make(3, Rational(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(component_count(params));
}
BENCHMARK(BM_ComponentCount)->Arg(2)->Arg(9)->Arg(80)->Unit(benchmark::kMicrosecond);

void BM_DsetK(benchmark::State& state) {
    const ShiftParams params = ShiftParams::make(3, Rational(2, 5));
    for (auto _ : state) benchmark::DoNotOptimize(dset_k(params, state.range(0)));
}
BENCHMARK(BM_DsetK)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Census(benchmark::State& state) {
    const ShiftParams params = ShiftParams::make(3, Rational(2, 7));
    for (auto _ : state) benchmark::DoNotOptimize(local_finiteness_census(params, Rational(2), state.range(0)));
}
BENCHMARK(BM_Census)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

void BM_Certificate(benchmark::State& state) {
    const DiagParams params = DiagParams::make(state.range(0), Rational(3));
    for (auto _ : state) benchmark::DoNotOptimize(connectivity_certificate(params));
}
BENCHMARK(BM_Certificate)->Arg(3)->Arg(5)->Arg(7)->Unit(benchmark::kMicrosecond);

void BM_Membership(benchmark::State& state) {
    const ShiftParams params = ShiftParams::make(3, Rational(2));
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> num(-128, 128);
    std::vector<Point2> pts;
    for (int i = 0; i < 256; ++i) pts.push_back(Point2{Rational(num(rng), 61), Rational(num(rng), 59)});
    std::size_t k = 0;
    for (auto _ : state) benchmark::DoNotOptimize(tiling_membership(params, pts[k++ % pts.size()], 512));
}
BENCHMARK(BM_Membership)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
