#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "bqbench/metrics.hpp"

namespace {

std::vector<bqbench::Question> random_questions(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> word(0, 49);
  std::uniform_int_distribution<int> len(4, 14);
  std::vector<bqbench::Question> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (int k = len(rng); k > 0; --k) text += "w" + std::to_string(word(rng)) + " ";
    out.emplace_back("q" + std::to_string(i), text);
  }
  return out;
}

void BM_Metric(benchmark::State& state) {
  const auto metric = static_cast<bqbench::Metric>(state.range(0));
  const auto qs = random_questions(256, 7);
  const bqbench::IdfTable idf = bqbench::compute_idf(qs);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bqbench::score(metric, qs[i % 256], qs[(i + 1) % 256], &idf));
    ++i;
  }
  state.SetLabel(std::string(bqbench::metric_name(metric)));
}
BENCHMARK(BM_Metric)->DenseRange(0, 6);

}  // namespace
