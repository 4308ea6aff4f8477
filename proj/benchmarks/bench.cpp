#include <benchmark/benchmark.h>

#include <random>

#include "kmv/abgroup.hpp"
#include "kmv/bernoulli.hpp"
#include "kmv/fpfilter.hpp"
#include "kmv/normtower.hpp"
#include "kmv/vplus.hpp"

using namespace kmv;

static void BM_FilterMul(benchmark::State& state) {
    auto R = FilterRing::get(37, static_cast<u32>(state.range(0)));
    std::mt19937_64 rng(1);
    FVec a(R->N), b(R->N);
    for (auto& v : a) v = static_cast<u32>(rng() % 37);
    for (auto& v : b) v = static_cast<u32>(rng() % 37);
    for (auto _ : state) benchmark::DoNotOptimize(R->mul(a, b));
}
BENCHMARK(BM_FilterMul)->Arg(37)->Arg(1369);

static void BM_Dlog(benchmark::State& state) {
    auto R = FilterRing::get(37, static_cast<u32>(state.range(0)));
    const auto& E = R->plus_engine();
    std::mt19937_64 rng(2);
    FVec u(R->N, 0);
    u[0] = 1;
    for (u32 j = 1; j < R->N; ++j) u[j] = static_cast<u32>(rng() % 37);
    auto zc = R->to_zcoords(R->plus_project(u));
    for (auto _ : state) benchmark::DoNotOptimize(E.dlog(zc));
}
BENCHMARK(BM_Dlog)->Arg(37)->Arg(1369);

static void BM_NormStep(benchmark::State& state) {
    auto R = TowerRing::get({5, 1, 2});
    std::mt19937_64 rng(3);
    auto a = R->random(rng, 4);
    for (auto _ : state) benchmark::DoNotOptimize(norm_step(a));
}
BENCHMARK(BM_NormStep);

static void BM_Bernoulli(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(irregular_indices(157));
}
BENCHMARK(BM_Bernoulli);

static void BM_Snf(benchmark::State& state) {
    std::mt19937_64 rng(4);
    ZMat M(8, std::vector<mpz_class>(8));
    for (auto& row : M)
        for (auto& v : row) v = static_cast<long>(rng() % 41) - 20;
    for (auto _ : state) benchmark::DoNotOptimize(snf(M));
}
BENCHMARK(BM_Snf);

static void BM_VPlus37(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(v_plus({37, 1, Model::km, 1}));
}
BENCHMARK(BM_VPlus37);

BENCHMARK_MAIN();
