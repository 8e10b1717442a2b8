#include <benchmark/benchmark.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "consortia/authorship.hpp"
#include "consortia/cluster.hpp"
#include "consortia/impact.hpp"
#include "consortia/ingest.hpp"
#include "consortia/stats.hpp"
#include "consortia/synth.hpp"

using namespace consortia;

namespace {

// range(0) articles, ~1% in planted chains, noise below 20 authors.
const SynthResult& corpus_of(std::size_t articles) {
  static std::map<std::size_t, SynthResult> cache;
  auto it = cache.find(articles);
  if (it != cache.end()) return it->second;
  SynthSpec spec;
  spec.seed = 1;
  const std::size_t chains = std::max<std::size_t>(1, articles / 5000);
  for (std::size_t k = 0; k < chains; ++k) spec.planted.push_back(PlantedSpec{25 + k % 40, 0.1, 40, 60});
  spec.noise_articles = articles;
  spec.noise_author_range = {1, 19};
  spec.fields = {"A", "B", "C", "D"};
  spec.fields_per_article = {1, 2};
  return cache.emplace(articles, generate_corpus(spec)).first->second;
}

void BM_CandidatePairs(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0))).corpus;
  for (auto _ : state) benchmark::DoNotOptimize(build_candidate_pairs(c, ClusterParams{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_CandidatePairs)->Arg(100'000)->Arg(400'000)->Unit(benchmark::kMillisecond);

void BM_Cluster(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0))).corpus;
  for (auto _ : state) benchmark::DoNotOptimize(cluster_consortia(c, ClusterParams{}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_Cluster)->Arg(100'000)->Arg(400'000)->Unit(benchmark::kMillisecond);

void BM_BruteForceCluster(benchmark::State& state) {
  SynthSpec spec;
  spec.seed = 2;
  for (int k = 0; k < 10; ++k) spec.planted.push_back(PlantedSpec{25, 0.1, 5, 30});
  spec.noise_articles = static_cast<std::size_t>(state.range(0));
  spec.noise_author_range = {15, 30};
  const Corpus c = generate_corpus(spec).corpus;
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_cluster(c, ClusterParams{}));
}
BENCHMARK(BM_BruteForceCluster)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_NormTable(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0))).corpus;
  for (auto _ : state) benchmark::DoNotOptimize(build_norm_table(c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.size()));
}
BENCHMARK(BM_NormTable)->Arg(100'000)->Arg(400'000)->Unit(benchmark::kMillisecond);

void BM_ParseJsonl(benchmark::State& state) {
  const auto& c = corpus_of(static_cast<std::size_t>(state.range(0))).corpus;
  std::ostringstream out;
  write_corpus_jsonl(out, c);
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(parse_corpus(in, CorpusFormat::JsonLines));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseJsonl)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_AlphaScore(benchmark::State& state) {
  std::vector<AuthorRef> authors;
  for (int i = 0; i < state.range(0); ++i) {
    authors.push_back(make_author("a" + std::to_string(i), "name" + std::to_string(i * 7919 % 1000), "q"));
  }
  for (auto _ : state) benchmark::DoNotOptimize(alpha_score(authors));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AlphaScore)->Arg(20)->Arg(100)->Arg(1000);

void BM_Spearman(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<double>(rng() % 50);
    y[i] = static_cast<double>(rng() % 1000) / 100.0;
  }
  for (auto _ : state) benchmark::DoNotOptimize(spearman(x, y));
}
BENCHMARK(BM_Spearman)->Arg(100)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
