#include <benchmark/benchmark.h>

#include "dner/similarity.hpp"
#include "dner/util.hpp"

namespace {

using namespace dner;

TextCorpus synthetic_text(std::size_t sentences, std::size_t vocab, std::uint64_t seed) {
  Rng rng(seed);
  TextCorpus corpus;
  for (std::size_t i = 0; i < sentences; ++i) {
    std::vector<std::string> tokens;
    std::size_t len = 5 + rng.below(15);
    for (std::size_t t = 0; t < len; ++t) {
      tokens.push_back("w" + std::to_string(rng.below(vocab)));
    }
    corpus.push_back(std::move(tokens));
  }
  return corpus;
}

void BM_NgramTraining(benchmark::State& state) {
  TextCorpus corpus = synthetic_text(static_cast<std::size_t>(state.range(0)), 500, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(NgramModel::train(corpus));
  }
}
BENCHMARK(BM_NgramTraining)->Arg(500)->Arg(2000);

void BM_Perplexity(benchmark::State& state) {
  NgramModel model = NgramModel::train(synthetic_text(2000, 500, 2));
  TextCorpus target = synthetic_text(200, 500, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(perplexity(model, target, PplMode::Mean));
  }
}
BENCHMARK(BM_Perplexity);

void BM_TermDivergence(benchmark::State& state) {
  TermDistribution a = TermDistribution::build(synthetic_text(500, 300, 4));
  TermDistribution b = TermDistribution::build(synthetic_text(500, 300, 5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(jsd(a, b));
  }
}
BENCHMARK(BM_TermDivergence);

}  // namespace
