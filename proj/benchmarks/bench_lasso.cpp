#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "bqbench/encoding.hpp"
#include "bqbench/ranker.hpp"

namespace {

const char* const kWords[] = {"what", "is", "the", "color", "of", "man", "dog", "cat", "shirt", "car",
                              "how", "many", "are", "there", "on", "table", "red", "blue", "sitting", "a"};

std::vector<bqbench::Question> pool_of(std::size_t n) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> word(0, 19);
  std::uniform_int_distribution<int> len(4, 10);
  std::vector<bqbench::Question> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (int k = len(rng); k > 0; --k) text += std::string(kWords[word(rng)]) + " ";
    out.emplace_back("bq" + std::to_string(i), text);
  }
  return out;
}

void BM_LassoRank(benchmark::State& state) {
  auto pool = pool_of(static_cast<std::size_t>(state.range(0)));
  auto encoder = std::make_shared<const bqbench::Encoder>(bqbench::fit_tfidf(pool));
  const bqbench::LassoRanker ranker(pool, encoder);
  const bqbench::Question mq("mq", "what is the color of the dog sitting on the table");
  for (auto _ : state) benchmark::DoNotOptimize(ranker.rank(mq));
}
BENCHMARK(BM_LassoRank)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
