#include <benchmark/benchmark.h>

#include "halluaudit/evidence.hpp"
#include "halluaudit/text.hpp"

using namespace halluaudit;

namespace {

std::string synthetic_document(int sentences) {
    std::string out;
    for (int i = 0; i < sentences; ++i) {
        out += "Sentence number " + std::to_string(i) +
               " carries a handful of ordinary words for splitting. ";
    }
    return out;
}

}  // namespace

static void BM_SentenceSplit(benchmark::State& state) {
    std::string content = synthetic_document(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(text::split_sentences(content));
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * content.size());
}
BENCHMARK(BM_SentenceSplit)->Arg(64)->Arg(512);

static void BM_ChunkDocument(benchmark::State& state) {
    RetrievedDocument doc;
    doc.url = "bench";
    doc.loop_index = 1;
    doc.content = synthetic_document(static_cast<int>(state.range(0)));
    RetrievalConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chunk_document(doc, cfg, "d0"));
    }
}
BENCHMARK(BM_ChunkDocument)->Arg(64)->Arg(512);
