// Serial reference kernels against their OpenMP versions on synthetic data.

#include <benchmark/benchmark.h>

#include <vector>

#include "onoma/classifier.hpp"
#include "onoma/cluster.hpp"
#include "onoma/corpus.hpp"
#include "onoma/random.hpp"
#include "onoma/synth.hpp"

using namespace onoma;

namespace {

const synth::SynthCorpus& corpus_fixture() {
  static const auto sc = synth::generate(synth::SynthSpec::uniform(10, 5, 2000, 0.3, 7));
  return sc;
}

const classifier::TrainedModel& model_fixture() {
  static const auto m = [] {
    std::vector<classifier::LabeledName> names;
    for (const auto& [s, r] : corpus_fixture().truth) names.push_back({s, r});
    return classifier::train(names);
  }();
  return m;
}

std::vector<double> random_rows(std::size_t n, std::size_t d) {
  Rng rng(3);
  std::vector<double> v(n * d);
  for (auto& x : v) x = rng.uniform01();
  return v;
}

void BM_filter_serial(benchmark::State& st) {
  const auto& t = corpus_fixture().table;
  for (auto _ : st) benchmark::DoNotOptimize(corpus::filter_core_names_serial(t));
}

void BM_filter_parallel(benchmark::State& st) {
  const auto& t = corpus_fixture().table;
  for (auto _ : st) benchmark::DoNotOptimize(corpus::filter_core_names(t));
}

void BM_distances_serial(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto rows = random_rows(n, 2000);
  for (auto _ : st) benchmark::DoNotOptimize(cluster::euclidean_distances_serial(rows, n, 2000));
}

void BM_distances_parallel(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto rows = random_rows(n, 2000);
  for (auto _ : st) benchmark::DoNotOptimize(cluster::euclidean_distances(rows, n, 2000));
}

void BM_classify_serial(benchmark::State& st) {
  const auto& m = model_fixture();
  const auto& names = corpus_fixture().populations[0].surnames;
  for (auto _ : st) benchmark::DoNotOptimize(classifier::classify_labels_serial(m, names));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(names.size()));
}

void BM_classify_parallel(benchmark::State& st) {
  const auto& m = model_fixture();
  const auto& names = corpus_fixture().populations[0].surnames;
  for (auto _ : st) benchmark::DoNotOptimize(classifier::classify_labels(m, names));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(names.size()));
}

}  // namespace

BENCHMARK(BM_filter_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_filter_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_distances_serial)->Arg(50)->Arg(176)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_distances_parallel)->Arg(50)->Arg(176)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_classify_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_classify_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
