#include <doctest.h>

#include <cmath>

#include "dner/augment.hpp"
#include "dner/error.hpp"
#include "dner/similarity.hpp"
#include "dner/util.hpp"
#include "support/kn_oracle.hpp"

using namespace dner;
using dner_tests::KnOracle;

namespace {

TextCorpus lines(const std::vector<std::string>& sentences) {
  TextCorpus corpus;
  for (const auto& s : sentences) {
    std::vector<std::string> tokens;
    std::string tok;
    for (char c : s + " ") {
      if (c == ' ') {
        if (!tok.empty()) tokens.push_back(tok);
        tok.clear();
      } else {
        tok.push_back(c);
      }
    }
    corpus.push_back(tokens);
  }
  return corpus;
}

VocabProfile profile(const std::vector<std::string>& types) {
  VocabProfile p;
  for (const auto& t : types) p.types.insert(t);
  p.token_count = types.size();
  return p;
}

}  // namespace

TEST_CASE("vocabulary coverage") {
  VocabProfile s = profile({"aa", "bb", "cc"});
  VocabProfile t = profile({"bb", "cc", "dd", "ee"});
  CHECK(tvc(s, t) == doctest::Approx(0.5));
  CHECK(tvc(t, t) == doctest::Approx(1.0));
  CHECK(tvc(profile({"xx"}), t) == doctest::Approx(0.0));
  CHECK_THROWS_AS(tvc(s, profile({})), ContractError);
  // Containment gives full coverage regardless of source size.
  CHECK(tvc(profile({"aa", "bb", "cc", "dd", "ee", "ff"}), profile({"aa"})) == 1.0);
}

TEST_CASE("jaccard similarity") {
  VocabProfile s = profile({"aa", "bb", "cc"});
  VocabProfile t = profile({"bb", "cc", "dd", "ee"});
  CHECK(jsv(s, t) == doctest::Approx(2.0 / 5.0));
  CHECK(jsv(t, s) == doctest::Approx(jsv(s, t)));  // symmetric
  CHECK(jsv(s, s) == doctest::Approx(1.0));
  CHECK(jsv(profile({"xx"}), t) == doctest::Approx(0.0));
  CHECK_THROWS_AS(jsv(profile({}), profile({})), ContractError);
}

TEST_CASE("profile building filters stopwords and short tokens") {
  TextCorpus corpus = lines({"The muscle Pain a x", "muscle pain again"});
  VocabProfile p = VocabProfile::build(corpus, default_stopwords());
  CHECK(p.types.count("muscle") == 1);
  CHECK(p.types.count("pain") == 1);   // lowercased
  CHECK(p.types.count("the") == 0);    // stopword
  CHECK(p.types.count("x") == 0);      // too short
  CHECK(p.token_count == 8);
}

TEST_CASE("kneser-ney training rejects an empty corpus") {
  CHECK_THROWS_AS(NgramModel::train({}), ContractError);
}

TEST_CASE("kneser-ney normalizes over every observed context") {
  TextCorpus corpus = lines({
      "aa bb cc aa bb",
      "cc aa dd ee bb",
      "bb cc dd aa ee",
      "ee dd cc bb aa",
  });
  NgramModel model = NgramModel::train(corpus);
  std::vector<std::string> vocab = model.prediction_vocabulary();
  std::vector<std::string> contexts = {"<s>", "aa", "bb", "cc", "dd", "ee", "<unk>"};
  for (const auto& u : contexts) {
    for (const auto& v : contexts) {
      double sum = 0;
      for (const auto& w : vocab) sum += model.probability(w, u, v);
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("kneser-ney matches the reference implementation") {
  TextCorpus corpus = lines({"aa bb cc", "aa bb dd", "cc dd aa bb", "bb aa"});
  NgramModel model = NgramModel::train(corpus);
  KnOracle oracle(corpus);

  CHECK(model.vocabulary_size() == oracle.vocab().size());
  std::vector<std::string> words = {"aa", "bb", "cc", "dd", "</s>", "<unk>", "zz"};
  std::vector<std::string> contexts = {"<s>", "aa", "bb", "cc", "dd", "zz"};
  for (const auto& u : contexts) {
    for (const auto& v : contexts) {
      for (const auto& w : words) {
        CHECK(model.probability(w, u, v) ==
              doctest::Approx(oracle.probability(w, u, v)).epsilon(1e-12));
      }
    }
  }

  // The worked chain P(aa bb cc) under the trained model, frozen from the
  // reference implementation's arithmetic.
  double p = model.probability("aa", "<s>", "<s>") * model.probability("bb", "<s>", "aa") *
             model.probability("cc", "aa", "bb") * model.probability("</s>", "bb", "cc");
  double expected = oracle.p_tri("aa", "<s>", "<s>") * oracle.p_tri("bb", "<s>", "aa") *
                    oracle.p_tri("cc", "aa", "bb") * oracle.p_tri("</s>", "bb", "cc");
  CHECK(p == doctest::Approx(expected).epsilon(1e-12));
  CHECK(p == doctest::Approx(0.0364470386434495).epsilon(1e-9));
}

TEST_CASE("perplexity modes agree on a single sentence") {
  TextCorpus train_corpus = lines({"aa bb aa bb", "bb aa bb aa"});
  NgramModel model = NgramModel::train(train_corpus);
  TextCorpus target = lines({"aa bb"});
  CHECK(perplexity(model, target, PplMode::Summed) ==
        doctest::Approx(perplexity(model, target, PplMode::Mean)));
  TextCorpus two = lines({"aa bb", "bb aa"});
  CHECK(perplexity(model, two, PplMode::Summed) ==
        doctest::Approx(2.0 * perplexity(model, two, PplMode::Mean)).epsilon(1e-9));
  CHECK_THROWS_AS(perplexity(model, {}, PplMode::Mean), ContractError);
}

TEST_CASE("coverage and perplexity are asymmetric") {
  VocabProfile small = profile({"aa"});
  VocabProfile large = profile({"aa", "bb", "cc", "dd"});
  CHECK(tvc(large, small) != tvc(small, large));

  TextCorpus rich = lines({"aa bb cc dd aa bb", "cc dd aa bb cc dd", "aa bb cc dd"});
  TextCorpus poor = lines({"aa aa aa", "aa aa aa", "aa aa"});
  NgramModel on_rich = NgramModel::train(rich);
  NgramModel on_poor = NgramModel::train(poor);
  CHECK(perplexity(on_rich, poor, PplMode::Mean) !=
        perplexity(on_poor, rich, PplMode::Mean));
}

TEST_CASE("in-domain text scores lower perplexity than disjoint text") {
  TextCorpus train_corpus = lines({
      "muscle pain gets worse at night",
      "muscle pain gets better by day",
      "joint pain gets worse at night",
  });
  NgramModel model = NgramModel::train(train_corpus);
  double own = perplexity(model, train_corpus, PplMode::Mean);
  double foreign = perplexity(model, lines({"zz qq rr ss tt uu"}), PplMode::Mean);
  CHECK(own <= foreign);
}

TEST_CASE("per-sentence perplexity matches the reference and tracks vocab size") {
  TextCorpus train_corpus = lines({"aa bb", "aa bb", "bb aa", "bb aa", "cc cc"});
  NgramModel model = NgramModel::train(train_corpus);
  KnOracle oracle(train_corpus);
  std::vector<std::string> unseen = {"zz", "qq", "ww"};
  TextCorpus target = {unseen};
  double got = perplexity(model, target, PplMode::Mean);
  CHECK(got == doctest::Approx(oracle.sentence_perplexity(unseen)).epsilon(1e-9));
  // All-unseen text bottoms out near the uniform-over-vocabulary fallback.
  double v = static_cast<double>(model.vocabulary_size());
  CHECK(got > v / 8.0);
  CHECK(got < v * 8.0);
}

TEST_CASE("term distributions pool n-grams up to order three") {
  TermDistribution d = TermDistribution::build(lines({"aa bb cc"}));
  // 3 unigrams + 2 bigrams + 1 trigram = 6 terms, each once.
  CHECK(d.probs.size() == 6);
  double sum = 0;
  for (const auto& [k, p] : d.probs) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("jsd identities") {
  TermDistribution a = TermDistribution::build(lines({"aa bb cc", "dd ee"}));
  TermDistribution b = TermDistribution::build(lines({"ff gg hh", "ii jj"}));
  CHECK(jsd(a, a) == doctest::Approx(0.0));
  CHECK(jsd(a, b) == doctest::Approx(100.0).epsilon(1e-9));  // disjoint supports
  CHECK(jsd(a, b) == doctest::Approx(jsd(b, a)));

  // Hand-computed three-outcome check: S=(1/2,1/2,0), T=(0,1/2,1/2) over
  // pooled unigram terms -> JSD = 1/2.
  TermDistribution s, t;
  s.probs = {{"x", 0.5}, {"y", 0.5}};
  t.probs = {{"y", 0.5}, {"z", 0.5}};
  CHECK(jsd(s, t) == doctest::Approx(50.0).epsilon(1e-9));
}

TEST_CASE("jsd stays within bounds on random distributions") {
  Rng rng(4242);
  for (int trial = 0; trial < 200; ++trial) {
    auto random_dist = [&](int support) {
      TermDistribution d;
      double total = 0;
      std::vector<double> raw;
      for (int i = 0; i < support; ++i) {
        raw.push_back(rng.real() + 1e-6);
        total += raw.back();
      }
      for (int i = 0; i < support; ++i) {
        d.probs["t" + std::to_string(rng.below(12))] += raw[i] / total;
      }
      return d;
    };
    TermDistribution a = random_dist(4 + static_cast<int>(rng.below(5)));
    TermDistribution b = random_dist(4 + static_cast<int>(rng.below(5)));
    double v = jsd(a, b);
    CHECK(v >= 0.0);
    CHECK(v <= 100.0);
  }
}

TEST_CASE("spearman rank correlation") {
  std::vector<std::string> base = {"aa", "bb", "cc", "dd"};
  CHECK(spearman(base, base) == doctest::Approx(1.0));
  std::vector<std::string> reversed(base.rbegin(), base.rend());
  CHECK(spearman(base, reversed) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(spearman({"aa"}, {"aa"}), ContractError);
  CHECK_THROWS_AS(spearman(base, {"aa", "bb", "cc", "zz"}), ContractError);

  // Six-source worked example: effectiveness order vs coverage order.
  std::vector<std::string> effectiveness = {"PubMed", "Wikipedia", "MIMIC",
                                            "Yelp",   "News",      "Book"};
  std::vector<std::string> coverage = {"PubMed", "Wikipedia", "News",
                                       "MIMIC",  "Book",      "Yelp"};
  CHECK(spearman(effectiveness, coverage) == doctest::Approx(0.71).epsilon(0.01));
  CHECK(std::abs(spearman(effectiveness, coverage) - 0.71) <= 0.005);
}

TEST_CASE("spearman is invariant under monotone transforms of scores") {
  std::vector<double> a = {0.1, 0.7, 0.3, 0.9, 0.5};
  std::vector<double> b = {1.0, 4.0, 2.0, 8.0, 3.0};
  double base = spearman_scores(a, b);
  std::vector<double> a2;
  for (double x : a) a2.push_back(std::exp(3.0 * x));  // strictly monotone
  CHECK(spearman_scores(a2, b) == doctest::Approx(base));
  CHECK(base == doctest::Approx(1.0));  // both increase together

  // Average ranks on ties.
  CHECK(spearman_scores({1, 1, 2}, {1, 2, 3}) ==
        doctest::Approx(spearman_scores({1, 1, 2}, {2, 1, 3})));
}

TEST_CASE("source ranking puts the identical source first everywhere") {
  TextCorpus target = lines({"muscle pain all night", "joint pain all day"});
  std::vector<NamedTextCorpus> sources = {
      {"match", target},
      {"books", lines({"once upon a time", "stories were told"})},
      {"news", lines({"markets fell sharply today", "officials said nothing"})},
  };
  SimilarityReport report = rank_sources(sources, target, default_stopwords());
  for (const auto& measure : {"tvc", "jsv", "ppl", "jsd"}) {
    CHECK(report.rankings.at(measure).front() == "match");
  }
  CHECK(report.consensus.front() == "match");
  std::string text = report.to_text();
  CHECK(text.find("TVC (%)") != std::string::npos);
  CHECK(text.find("JSV (%)") != std::string::npos);
  CHECK(text.find("PPL") != std::string::npos);
  CHECK(text.find("JSD") != std::string::npos);

  SimilarityReport single = rank_sources({sources[1]}, target, default_stopwords());
  for (const auto& [measure, names] : single.rankings) {
    CHECK(names.size() == 1);
  }
  CHECK_THROWS_AS(rank_sources({}, target, default_stopwords()), ContractError);
}
