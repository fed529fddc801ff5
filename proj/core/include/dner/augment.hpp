#ifndef DNER_AUGMENT_HPP
#define DNER_AUGMENT_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dner/corpus.hpp"

namespace dner {

enum class AugmentMethod { LwTR, SR, MR, SiS, All };

AugmentMethod parse_method(const std::string& name);
const char* to_string(AugmentMethod m);

// Token set excluded from replacement draws. Ships with a small built-in
// English list; load_stopwords replaces it from a plain-text file (one word
// per line).
std::set<std::string> default_stopwords();
std::set<std::string> load_stopwords(const std::string& path);

// token -> same-tag replacement candidates with corpus frequencies.
// Replacement draws are frequency-weighted.
class LabelwiseDistribution {
 public:
  static LabelwiseDistribution build(const Corpus& corpus);

  bool has_tag(const std::string& tag) const;
  // Frequency-weighted draw from the tag's token multiset.
  const std::string& sample(const std::string& tag, class Rng& rng) const;

 private:
  struct TagPool {
    std::vector<std::string> tokens;
    std::vector<std::uint64_t> cumulative;  // prefix sums of counts
  };
  std::map<std::string, TagPool> pools_;
};

// Lowercased token -> synonyms; entries may be multi-word. File format:
// `token<TAB>synonym[|synonym...]`.
class SynonymLexicon {
 public:
  static SynonymLexicon load(const std::string& path);
  static SynonymLexicon from_pairs(
      const std::vector<std::pair<std::string, std::vector<std::string>>>& entries);

  // Empty when the token has no synonyms.
  const std::vector<std::string>* lookup(const std::string& token) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

struct AugmentConfig {
  AugmentMethod method = AugmentMethod::LwTR;
  double p = 0.3;                 // per-token / per-mention replacement probability
  std::size_t per_instance = 1;   // augmented instances per original
  std::uint64_t seed = 1;
  std::size_t jobs = 1;           // worker threads; output is order-stable
  std::set<std::string> stopwords = default_stopwords();
  const SynonymLexicon* lexicon = nullptr;       // required by SR
  const LabelwiseDistribution* dist = nullptr;   // required by LwTR
};

struct AugmentStats {
  std::size_t skipped_unknown_tag = 0;   // LwTR: tag absent from distribution
  std::size_t skipped_no_synonym = 0;    // SR: token not in lexicon
  std::size_t skipped_empty_pool = 0;    // MR: no replacement available
  std::size_t skipped_complex = 0;       // token/mention not representable flat
};

// The four transforms. Each is deterministic under cfg.seed and is the
// identity when p = 0.
AnnotatedSentence lwtr(const AnnotatedSentence& as, const LabelwiseDistribution& dist,
                       const AugmentConfig& cfg, AugmentStats* stats = nullptr);

// Multi-token synonyms extend the mention containing the replaced token and
// shift every later position.
AnnotatedSentence synonym_replace(const AnnotatedSentence& as, const SynonymLexicon& lex,
                                  const AugmentConfig& cfg, AugmentStats* stats = nullptr);

// Pool of mention token sequences per category, drawn from a corpus.
class MentionPool {
 public:
  static MentionPool build(const Corpus& corpus);
  const std::vector<std::vector<std::string>>* candidates(const std::string& category) const;

 private:
  std::map<std::string, std::vector<std::vector<std::string>>> pools_;
};

// Mentions whose covering span touches another mention are left unchanged
// (counted in stats). A selected continuous mention is spliced out directly;
// a selected discontinuous mention has its covering region replaced, so the
// replacement is continuous.
AnnotatedSentence mention_replace(const AnnotatedSentence& as, const MentionPool& pool,
                                  const AugmentConfig& cfg, AugmentStats* stats = nullptr);

// Splits the sentence into maximal segments (each mention, and each maximal
// stretch of unannotated tokens); shuffles tokens inside selected segments,
// labels stay put. Requires continuous non-overlapping mentions; apply
// flat_merge first otherwise.
AnnotatedSentence shuffle_within_segments(const AnnotatedSentence& as,
                                          const AugmentConfig& cfg,
                                          AugmentStats* stats = nullptr);

// Originals (in order) followed by augmented instances, ordered by original
// index then round; method All emits one instance per transform per round.
// Instance i / round r / transform t derives its RNG seed from cfg.seed, so
// instances are independently derivable.
Corpus augment_corpus(const Corpus& corpus, const AugmentConfig& cfg,
                      AugmentStats* stats = nullptr);

}  // namespace dner

#endif
