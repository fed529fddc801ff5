// Random gold/prediction corpus pairs for evaluation tests: arbitrary
// (possibly discontinuous, possibly overlapping) mention sets over short
// sentences, with predictions perturbed from gold.
#ifndef DNER_TESTS_RANDOM_CORPUS_HPP
#define DNER_TESTS_RANDOM_CORPUS_HPP

#include <string>
#include <vector>

#include "dner/corpus.hpp"
#include "dner/util.hpp"

namespace dner_tests {

inline dner::Mention random_mention(dner::Rng& rng, std::size_t sentence_len) {
  std::vector<int> positions;
  for (int p = 0; p < static_cast<int>(sentence_len); ++p) {
    if (rng.bernoulli(0.3)) positions.push_back(p);
  }
  if (positions.empty()) positions.push_back(static_cast<int>(rng.below(sentence_len)));
  static const char* kCats[] = {"A", "B", "C"};
  return dner::Mention(positions, kCats[rng.below(3)]);
}

inline std::pair<dner::Corpus, dner::Corpus> random_gold_pred(std::uint64_t seed,
                                                              std::size_t sentences) {
  dner::Rng rng(seed);
  dner::Corpus gold, pred;
  for (std::size_t i = 0; i < sentences; ++i) {
    std::size_t len = 3 + rng.below(6);
    std::vector<std::string> tokens;
    for (std::size_t t = 0; t < len; ++t) tokens.push_back("w" + std::to_string(rng.below(12)));
    dner::Sentence sentence(tokens, "r", i);

    auto draw_set = [&](std::size_t max_count) {
      std::vector<dner::Mention> ms;
      std::size_t count = rng.below(max_count + 1);
      for (std::size_t k = 0; k < count; ++k) {
        dner::Mention m = random_mention(rng, len);
        bool dup = false;
        for (const auto& o : ms) {
          if (dner::mention_equal(o, m)) { dup = true; break; }
        }
        if (!dup) ms.push_back(m);
      }
      return ms;
    };

    std::vector<dner::Mention> g = draw_set(3);
    // Predictions: keep some gold, add some noise.
    std::vector<dner::Mention> p;
    for (const auto& m : g) {
      if (rng.bernoulli(0.6)) p.push_back(m);
    }
    for (const auto& m : draw_set(2)) {
      bool dup = false;
      for (const auto& o : p) {
        if (dner::mention_equal(o, m)) { dup = true; break; }
      }
      if (!dup) p.push_back(m);
    }
    gold.emplace_back(sentence, g);
    pred.emplace_back(sentence, p);
  }
  return {gold, pred};
}

}  // namespace dner_tests

#endif
