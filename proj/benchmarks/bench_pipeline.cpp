#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "coword/clusters.hpp"
#include "coword/conet.hpp"
#include "coword/layout.hpp"
#include "coword/vocabulary.hpp"

namespace {

using namespace coword;

// Random descriptor sets, 2-8 keywords per record.
OccurrenceIndex synthetic_index(std::size_t records, std::size_t vocabulary, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, vocabulary - 1);
  std::uniform_int_distribution<int> size(2, 8);
  std::vector<RecordDescriptors> sets;
  for (std::size_t r = 0; r < records; ++r) {
    RecordDescriptors rd{"r" + std::to_string(r), {}};
    for (int k = size(rng); k > 0; --k) rd.descriptors.insert("d" + std::to_string(pick(rng)));
    sets.push_back(std::move(rd));
  }
  return index_from_sets(std::move(sets));
}

// Roughly the 46 most frequent descriptors of a 432-record corpus.
CoNetwork forty_six_vertex_network() {
  auto full = build_network(synthetic_index(432, 300, 7));
  return threshold_filter(full, full.vertices()[45].weight);
}

}  // namespace

static void BM_BuildNetwork(benchmark::State& state) {
  auto idx = synthetic_index(static_cast<std::size_t>(state.range(0)), 877, 1);
  for (auto _ : state) benchmark::DoNotOptimize(build_network(idx));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildNetwork)->Arg(432)->Arg(4320);

static void BM_DetectClusters(benchmark::State& state) {
  auto net = forty_six_vertex_network();
  for (auto _ : state) benchmark::DoNotOptimize(detect_clusters(net));
  state.counters["vertices"] = static_cast<double>(net.size());
}
BENCHMARK(BM_DetectClusters);

static void BM_KamadaKawai(benchmark::State& state) {
  auto net = forty_six_vertex_network();
  for (auto _ : state) benchmark::DoNotOptimize(kamada_kawai(net));
  state.counters["vertices"] = static_cast<double>(net.size());
}
BENCHMARK(BM_KamadaKawai)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
