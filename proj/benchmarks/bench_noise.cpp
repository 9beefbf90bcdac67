#include <random>

#include <benchmark/benchmark.h>

#include "halluaudit/noise.hpp"

using namespace halluaudit;

namespace {

ClusterPartition random_partition(int n, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> size_dist(1, 4);
    std::uniform_int_distribution<int> coin(0, 1);
    ClusterPartition p;
    for (int i = 0; i < n; ++i) {
        Cluster c;
        c.cluster_id = "c" + std::to_string(i);
        int size = size_dist(rng);
        for (int m = 0; m < size; ++m) {
            c.member_chunk_ids.push_back(c.cluster_id + "-" + std::to_string(m));
        }
        c.rank = i + 1;
        c.in_memory = coin(rng) == 1;
        p.clusters.push_back(std::move(c));
    }
    return p;
}

}  // namespace

static void BM_ComputeNoise(benchmark::State& state) {
    ClusterPartition p = random_partition(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_noise(p));
    }
}
BENCHMARK(BM_ComputeNoise)->Arg(8)->Arg(64)->Arg(512);

static void BM_ExactWorstCase(benchmark::State& state) {
    ClusterPartition p = random_partition(static_cast<int>(state.range(0)), 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_worst_case(p, 18));
    }
}
BENCHMARK(BM_ExactWorstCase)->DenseRange(8, 16, 4);

BENCHMARK_MAIN();
