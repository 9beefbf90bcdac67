#include <random>

#include <benchmark/benchmark.h>

#include "halluaudit/clustering.hpp"

using namespace halluaudit;

namespace {

std::vector<EmbeddingVector> random_embeddings(int n, int dim, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<float> gauss(0.0f, 1.0f);
    std::vector<EmbeddingVector> out;
    for (int i = 0; i < n; ++i) {
        EmbeddingVector v;
        v.values.resize(dim);
        for (auto& x : v.values) x = gauss(rng);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

static void BM_AgglomerativeCluster(benchmark::State& state) {
    auto embeddings = random_embeddings(static_cast<int>(state.range(0)), 256, 5);
    AgglomerativeBackend backend(0.80);
    for (auto _ : state) {
        benchmark::DoNotOptimize(backend.cluster(embeddings));
    }
}
BENCHMARK(BM_AgglomerativeCluster)->Arg(32)->Arg(128)->Arg(512);
