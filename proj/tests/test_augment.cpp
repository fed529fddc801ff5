#include <doctest.h>

#include <set>

#include "dner/augment.hpp"
#include "dner/error.hpp"
#include "dner/fixtures.hpp"
#include "dner/schemas.hpp"

using namespace dner;

namespace {

AnnotatedSentence make(const std::vector<std::string>& tokens,
                       const std::vector<Mention>& mentions) {
  return AnnotatedSentence(Sentence(tokens, "t", 0), mentions);
}

// The clinical-note example sentence used throughout: one short and one long
// problem mention.
AnnotatedSentence example_sentence() {
  return make({"She", "did", "not", "complain", "of", "headache", "or", "any", "other",
               "neurological", "symptoms", "."},
              {Mention({5}, "problem"), Mention({7, 8, 9, 10}, "problem")});
}

SynonymLexicon tiny_lexicon() {
  return SynonymLexicon::from_pairs({
      {"headache", {"cephalalgia", "head ache"}},
      {"neurological", {"neurologic"}},
      {"symptoms", {"symptom"}},
      {"complain", {"grumble", "protest loudly"}},
  });
}

std::vector<std::string> labels_of(const AnnotatedSentence& as) {
  return encode_bio(as).tags;
}

std::multiset<std::string> category_multiset(const AnnotatedSentence& as) {
  std::multiset<std::string> cats;
  for (const auto& m : as.mentions) cats.insert(m.category());
  return cats;
}

}  // namespace

TEST_CASE("label-wise replacement keeps the label sequence bit-identical") {
  Corpus corpus = {example_sentence()};
  LabelwiseDistribution dist = LabelwiseDistribution::build(corpus);
  AugmentConfig cfg;
  cfg.p = 0.8;
  cfg.seed = 3;
  AnnotatedSentence out = lwtr(corpus[0], dist, cfg);
  CHECK(labels_of(out) == labels_of(corpus[0]));
  CHECK(out.sentence.size() == corpus[0].sentence.size());
}

TEST_CASE("tokens with tags missing from the distribution stay unchanged") {
  auto as = example_sentence();
  LabelwiseDistribution empty_dist = LabelwiseDistribution::build({});
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 11;
  cfg.stopwords = {};
  AugmentStats stats;
  AnnotatedSentence out = lwtr(as, empty_dist, cfg, &stats);
  CHECK(out.sentence.tokens == as.sentence.tokens);
  CHECK(stats.skipped_unknown_tag == as.sentence.size());
}

TEST_CASE("p=0 keeps every method the identity") {
  Corpus corpus = {example_sentence()};
  LabelwiseDistribution dist = LabelwiseDistribution::build(corpus);
  SynonymLexicon lex = tiny_lexicon();
  MentionPool pool = MentionPool::build(corpus);
  AugmentConfig cfg;
  cfg.p = 0.0;
  cfg.seed = 17;
  CHECK(lwtr(corpus[0], dist, cfg).sentence.tokens == corpus[0].sentence.tokens);
  CHECK(synonym_replace(corpus[0], lex, cfg).sentence.tokens == corpus[0].sentence.tokens);
  CHECK(mention_replace(corpus[0], pool, cfg).sentence.tokens == corpus[0].sentence.tokens);
  CHECK(shuffle_within_segments(corpus[0], cfg).sentence.tokens == corpus[0].sentence.tokens);
}

TEST_CASE("fixed seed reproduces identical outputs") {
  Corpus corpus = {example_sentence()};
  LabelwiseDistribution dist = LabelwiseDistribution::build(corpus);
  AugmentConfig cfg;
  cfg.p = 0.5;
  cfg.seed = 101;
  CHECK(lwtr(corpus[0], dist, cfg).sentence.tokens ==
        lwtr(corpus[0], dist, cfg).sentence.tokens);
  CHECK(shuffle_within_segments(corpus[0], cfg).sentence.tokens ==
        shuffle_within_segments(corpus[0], cfg).sentence.tokens);
}

TEST_CASE("multi-token synonym extends the mention and shifts the rest") {
  // late-sentence mention must shift when an earlier mention grows
  auto as = make({"bad", "headache", "then", "nausea"},
                 {Mention({1}, "ADE"), Mention({3}, "ADE")});
  SynonymLexicon lex = SynonymLexicon::from_pairs({{"headache", {"head ache"}}});
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 1;
  cfg.stopwords = {};  // replace everything the lexicon covers
  AnnotatedSentence out = synonym_replace(as, lex, cfg);
  CHECK(out.sentence.tokens ==
        std::vector<std::string>{"bad", "head", "ache", "then", "nausea"});
  REQUIRE(out.mentions.size() == 2);
  CHECK(out.mentions[0] == Mention({1, 2}, "ADE"));
  CHECK(out.mentions[1] == Mention({4}, "ADE"));
  // B-X I-X... labeling per the derivation rule.
  CHECK(labels_of(out) == std::vector<std::string>{"O", "B-ADE", "I-ADE", "O", "B-ADE"});
}

TEST_CASE("token absent from the lexicon stays unchanged") {
  auto as = make({"weird", "pain"}, {Mention({1}, "ADE")});
  SynonymLexicon lex = tiny_lexicon();
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 2;
  AugmentStats stats;
  AnnotatedSentence out = synonym_replace(as, lex, cfg, &stats);
  CHECK(out.sentence.tokens == as.sentence.tokens);
  CHECK(stats.skipped_no_synonym == 2);
}

TEST_CASE("synonym replacement preserves mention count and categories") {
  Corpus corpus = {example_sentence()};
  SynonymLexicon lex = tiny_lexicon();
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    AugmentConfig cfg;
    cfg.p = 0.7;
    cfg.seed = seed;
    AnnotatedSentence out = synonym_replace(corpus[0], lex, cfg);
    CHECK(out.mentions.size() == corpus[0].mentions.size());
    CHECK(category_multiset(out) == category_multiset(corpus[0]));
  }
}

TEST_CASE("mention replacement swaps same-category mentions") {
  Corpus corpus = {
      example_sentence(),
      make({"signs", "of", "acute", "pulmonary", "disease"}, {Mention({2, 3, 4}, "problem")}),
  };
  MentionPool pool = MentionPool::build(corpus);
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 7;
  AnnotatedSentence out = mention_replace(corpus[0], pool, cfg);
  CHECK(category_multiset(out) == category_multiset(corpus[0]));
  CHECK(out.mentions.size() == 2);
  for (const auto& m : out.mentions) CHECK(m.continuous());
  // Every replacement came from the pool, so its surface form must exist there.
  for (const auto& m : out.mentions) {
    std::vector<std::string> words;
    for (int p : m.positions()) words.push_back(out.sentence.tokens[p]);
    bool found = false;
    for (const auto& cand : *pool.candidates("problem")) {
      if (cand == words) { found = true; break; }
    }
    CHECK(found);
  }
}

TEST_CASE("singleton pool may replace a mention with itself") {
  Corpus corpus = {make({"headache"}, {Mention({0}, "problem")})};
  MentionPool pool = MentionPool::build(corpus);
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 1;
  AnnotatedSentence out = mention_replace(corpus[0], pool, cfg);
  CHECK(out.sentence.tokens == corpus[0].sentence.tokens);
  CHECK(out.mentions.size() == 1);
}

TEST_CASE("non-overlapping discontinuous mention is replaced by its covering region") {
  auto as = make({"left", "atrium", "is", "dilated", "today"},
                 {Mention({0, 1, 3}, "DIS")});
  Corpus pool_source = {make({"bad", "rash"}, {Mention({0, 1}, "DIS")})};
  MentionPool pool = MentionPool::build(pool_source);
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 3;
  AnnotatedSentence out = mention_replace(as, pool, cfg);
  CHECK(out.sentence.tokens == std::vector<std::string>{"bad", "rash", "today"});
  REQUIRE(out.mentions.size() == 1);
  CHECK(out.mentions[0] == Mention({0, 1}, "DIS"));
}

TEST_CASE("overlapping mentions are never replaced") {
  auto as = make({"muscle", "pain", "and", "fatigue"},
                 {Mention({0, 1}, "ADR"), Mention({0, 3}, "ADR")});
  Corpus pool_source = {make({"sore", "hip"}, {Mention({0, 1}, "ADR")})};
  MentionPool pool = MentionPool::build(pool_source);
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 5;
  AugmentStats stats;
  AnnotatedSentence out = mention_replace(as, pool, cfg, &stats);
  CHECK(out.sentence.tokens == as.sentence.tokens);
  CHECK(stats.skipped_complex == 2);
}

TEST_CASE("empty pool leaves the mention unchanged") {
  auto as = make({"rash"}, {Mention({0}, "rare")});
  MentionPool empty = MentionPool::build({});
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 1;
  AugmentStats stats;
  AnnotatedSentence out = mention_replace(as, empty, cfg, &stats);
  CHECK(out.sentence.tokens == as.sentence.tokens);
  CHECK(stats.skipped_empty_pool == 1);
}

TEST_CASE("shuffle keeps labels in place") {
  auto as = example_sentence();
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 13;
  AnnotatedSentence out = shuffle_within_segments(as, cfg);
  CHECK(labels_of(out) == labels_of(as));
  // The example splits into five segments; tokens only move within theirs.
  auto bag = [&](const std::vector<std::string>& toks, int first, int last) {
    return std::multiset<std::string>(toks.begin() + first, toks.begin() + last + 1);
  };
  CHECK(bag(out.sentence.tokens, 0, 4) == bag(as.sentence.tokens, 0, 4));
  CHECK(out.sentence.tokens[5] == "headache");
  CHECK(out.sentence.tokens[6] == "or");
  CHECK(bag(out.sentence.tokens, 7, 10) == bag(as.sentence.tokens, 7, 10));
  CHECK(out.sentence.tokens[11] == ".");
}

TEST_CASE("single-token segments cannot move") {
  auto as = make({"a", "b"}, {Mention({0}, "X"), Mention({1}, "Y")});
  AugmentConfig cfg;
  cfg.p = 1.0;
  cfg.seed = 99;
  CHECK(shuffle_within_segments(as, cfg).sentence.tokens == as.sentence.tokens);
}

TEST_CASE("shuffle rejects discontinuous or overlapping input") {
  AugmentConfig cfg;
  cfg.p = 1.0;
  CHECK_THROWS_AS(
      shuffle_within_segments(make({"a", "b", "c"}, {Mention({0, 2}, "X")}), cfg),
      ContractError);
  CHECK_THROWS_AS(
      shuffle_within_segments(
          make({"a", "b"}, {Mention({0, 1}, "X"), Mention({1}, "X")}), cfg),
      ContractError);
}

TEST_CASE("corpus-level arithmetic: originals plus k per instance") {
  Corpus corpus = generate_category(OverlapCategory::ContinuousIsolated, 10, 3);
  AugmentConfig cfg;
  cfg.method = AugmentMethod::LwTR;
  cfg.per_instance = 3;
  cfg.p = 0.3;
  cfg.seed = 5;
  CHECK(augment_corpus(corpus, cfg).size() == 10 + 3 * 10);

  cfg.method = AugmentMethod::All;
  SynonymLexicon lex = tiny_lexicon();
  cfg.lexicon = &lex;
  cfg.per_instance = 1;
  CHECK(augment_corpus(corpus, cfg).size() == 10 + 4 * 10);
  cfg.per_instance = 2;
  CHECK(augment_corpus(corpus, cfg).size() == 10 + 2 * 4 * 10);
}

TEST_CASE("originals come first and are unchanged") {
  Corpus corpus = generate_category(OverlapCategory::ContinuousIsolated, 6, 8);
  AugmentConfig cfg;
  cfg.method = AugmentMethod::SiS;
  cfg.per_instance = 2;
  cfg.p = 1.0;
  cfg.seed = 4;
  Corpus out = augment_corpus(corpus, cfg);
  REQUIRE(out.size() == 18);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(out[i].sentence.tokens == corpus[i].sentence.tokens);
  }
}

TEST_CASE("corpus augmentation is deterministic under its seed") {
  Corpus corpus = generate_category(OverlapCategory::ContinuousIsolated, 8, 2);
  SynonymLexicon lex = tiny_lexicon();
  AugmentConfig cfg;
  cfg.method = AugmentMethod::All;
  cfg.per_instance = 2;
  cfg.p = 0.5;
  cfg.seed = 31;
  cfg.lexicon = &lex;
  Corpus a = augment_corpus(corpus, cfg);
  Corpus b = augment_corpus(corpus, cfg);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].sentence.tokens == b[i].sentence.tokens);
  }
}

TEST_CASE("augmented instances always validate") {
  Corpus corpus = generate_category(OverlapCategory::ContinuousIsolated, 20, 6);
  SynonymLexicon lex = SynonymLexicon::from_pairs({
      {"muscle", {"muscular tissue"}},
      {"pain", {"ache", "painful feeling"}},
      {"rash", {"skin eruption"}},
  });
  AugmentConfig cfg;
  cfg.method = AugmentMethod::All;
  cfg.per_instance = 2;
  cfg.p = 0.6;
  cfg.seed = 77;
  cfg.lexicon = &lex;
  // AnnotatedSentence construction validates position bounds and duplicates;
  // completing without an exception is the check.
  Corpus out = augment_corpus(corpus, cfg);
  for (const auto& as : out) {
    for (const auto& m : as.mentions) {
      CHECK(m.last() < static_cast<int>(as.sentence.size()));
    }
  }
}

TEST_CASE("method parsing") {
  CHECK(parse_method("lwtr") == AugmentMethod::LwTR);
  CHECK(parse_method("all") == AugmentMethod::All);
  CHECK_THROWS_AS(parse_method("nope"), DataError);
  CHECK(std::string(to_string(AugmentMethod::SiS)) == "sis");
}
