#include <benchmark/benchmark.h>

#include "dner/evaluation.hpp"
#include "dner/fixtures.hpp"
#include "dner/oracle.hpp"
#include "dner/scorer.hpp"

namespace {

using namespace dner;

FixtureSpec mixed(std::size_t n, std::uint64_t seed) {
  FixtureSpec spec;
  spec.proportions = {{OverlapCategory::ContinuousIsolated, 0.3},
                      {OverlapCategory::ContinuousOverlap, 0.2},
                      {OverlapCategory::NoOverlap, 0.15},
                      {OverlapCategory::LeftOverlap, 0.2},
                      {OverlapCategory::RightOverlap, 0.15}};
  spec.sentences = n;
  spec.seed = seed;
  return spec;
}

void BM_OracleDerivation(benchmark::State& state) {
  Corpus corpus = generate_fixtures(mixed(200, 1));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle(corpus[i % corpus.size()]));
    ++i;
  }
}
BENCHMARK(BM_OracleDerivation);

void BM_FeatureExtraction(benchmark::State& state) {
  Corpus corpus = generate_fixtures(mixed(50, 2));
  const AnnotatedSentence& as = corpus.front();
  ParserState s = ParserState::initial(as.sentence.size());
  s = apply(s, Action::shift());
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_features(s, as.sentence));
  }
}
BENCHMARK(BM_FeatureExtraction);

void BM_GreedyDecode(benchmark::State& state) {
  Corpus corpus = generate_fixtures(mixed(200, 3));
  PerceptronModel model = train(corpus, 5, 7).model;
  Corpus fresh = generate_fixtures(mixed(64, 4));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decode(fresh[i % fresh.size()].sentence, model));
    ++i;
  }
}
BENCHMARK(BM_GreedyDecode);

void BM_Training(benchmark::State& state) {
  Corpus corpus = generate_fixtures(mixed(static_cast<std::size_t>(state.range(0)), 5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(train(corpus, 3, 11));
  }
}
BENCHMARK(BM_Training)->Arg(50)->Arg(200);

}  // namespace
