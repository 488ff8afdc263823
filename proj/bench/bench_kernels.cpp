// Parallel kernels against their serial references. Thread count is the
// benchmark argument; 0 selects the serial reference.

#include <benchmark/benchmark.h>

#include "rebus/agglomeration.hpp"
#include "rebus/corpus.hpp"
#include "synthetic_corpus.hpp"

namespace {

using namespace rebus;

const std::vector<std::string>& paragraphs() {
  static const auto p = testing::synthetic_paragraphs({6000, 20000, 80, 11});
  return p;
}

const Corpus& corpus() {
  static const Corpus c = build_allocation_serial(paragraphs(), TokenizerConfig{});
  return c;
}

const WordSet& word_set() {
  static const WordSet s = select_by_projection_range(corpus().allocation, 30, 200);
  return s;
}

void BM_BuildAllocation(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    if (threads == 0)
      benchmark::DoNotOptimize(build_allocation_serial(paragraphs(), TokenizerConfig{}));
    else
      benchmark::DoNotOptimize(build_allocation(paragraphs(), TokenizerConfig{}, threads));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(paragraphs().size()));
}
BENCHMARK(BM_BuildAllocation)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PairTable(benchmark::State& state) {
  const int threads = static_cast<int>(state.range(0));
  const auto& f = corpus().allocation;
  for (auto _ : state) {
    if (threads == 0)
      benchmark::DoNotOptimize(pair_entropy_table_serial(f, word_set()));
    else
      benchmark::DoNotOptimize(pair_entropy_table(f, word_set(), threads));
  }
  state.counters["words"] = static_cast<double>(word_set().size());
}
BENCHMARK(BM_PairTable)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Agglomerate(benchmark::State& state) {
  AgglomerationOptions options;
  options.threads = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(agglomerate(corpus().allocation, word_set(), options));
  state.counters["words"] = static_cast<double>(word_set().size());
}
BENCHMARK(BM_Agglomerate)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// Literal definition on a small word set; the fast route at the same size
// shows what the incremental kernel saves.
void BM_AgglomerateSmall(benchmark::State& state) {
  const WordSet small = select_by_projection_range(corpus().allocation, 45, 46);
  for (auto _ : state) {
    if (state.range(0) == 0)
      benchmark::DoNotOptimize(brute_force_agglomerate(corpus().allocation, small));
    else
      benchmark::DoNotOptimize(agglomerate(corpus().allocation, small));
  }
  state.counters["words"] = static_cast<double>(small.size());
}
BENCHMARK(BM_AgglomerateSmall)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
