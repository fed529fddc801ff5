#ifndef DNER_SIMILARITY_HPP
#define DNER_SIMILARITY_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace dner {

// Whitespace-tokenized sentences, one per line on disk.
using TextCorpus = std::vector<std::vector<std::string>>;

TextCorpus read_text_corpus(const std::string& path);

// Lowercased content-word types of a corpus. Content filtering drops
// stopwords and single-character tokens; a part-of-speech gate can be
// emulated by feeding pre-filtered text.
struct VocabProfile {
  std::set<std::string> types;
  std::size_t token_count = 0;

  static VocabProfile build(const TextCorpus& corpus,
                            const std::set<std::string>& stopwords);
};

// |Vs ∩ Vt| / |Vt|: how much of the target vocabulary the source covers.
// Asymmetric. Errors on an empty target vocabulary.
double tvc(const VocabProfile& source, const VocabProfile& target);

// |Vs ∩ Vt| / |Vs ∪ Vt|: symmetric Jaccard similarity. Errors when both
// vocabularies are empty.
double jsv(const VocabProfile& source, const VocabProfile& target);

// Interpolated Kneser-Ney 3-gram model with one absolute discount per order,
// estimated from count-of-counts as D = n1 / (n1 + 2*n2). Training types
// seen once become the unknown token; sentences are padded with two begin
// markers and one end marker. For every context, probabilities over the
// prediction vocabulary sum to 1.
class NgramModel {
 public:
  static NgramModel train(const TextCorpus& corpus);

  // P(w | u, v); out-of-vocabulary words map to the unknown token.
  double probability(const std::string& w, const std::string& u,
                     const std::string& v) const;

  // Natural-log probability of a sentence including the end marker.
  double sentence_logprob(const std::vector<std::string>& sentence) const;

  // Words the model can predict (includes the unknown and end tokens,
  // excludes the begin marker).
  std::vector<std::string> prediction_vocabulary() const;
  std::size_t vocabulary_size() const { return id_to_word_.size() - 1; }

  double discount(int order) const { return discounts_[order - 1]; }

 private:
  double prob_unigram(int w) const;
  double prob_bigram(int w, int v) const;
  double prob_trigram(int w, int u, int v) const;
  int word_id(const std::string& w) const;

  std::unordered_map<std::string, int> word_to_id_;
  std::vector<std::string> id_to_word_;
  int bos_ = 0, eos_ = 0, unk_ = 0;

  std::unordered_map<std::uint64_t, std::uint32_t> trigram_;
  std::unordered_map<std::uint64_t, std::uint32_t> trigram_ctx_total_;
  std::unordered_map<std::uint64_t, std::uint32_t> trigram_ctx_types_;
  std::unordered_map<std::uint64_t, std::uint32_t> bigram_cont_;       // N1+(. v w)
  std::unordered_map<std::uint32_t, std::uint32_t> bigram_ctx_total_;  // per v
  std::unordered_map<std::uint32_t, std::uint32_t> bigram_ctx_types_;
  std::unordered_map<std::uint32_t, std::uint32_t> unigram_cont_;      // N1+(. w)
  double unigram_total_ = 0;
  double unigram_types_ = 0;
  double discounts_[3] = {0.5, 0.5, 0.5};
};

enum class PplMode { Summed, Mean };

// Per-sentence perplexity P(s)^(-1/N) with N counting the end marker.
// Summed mode adds the per-sentence values; mean mode divides by the
// sentence count, which keeps values comparable across corpus sizes.
double perplexity(const NgramModel& model, const TextCorpus& target, PplMode mode);

// Pooled 1..3-gram counts normalized into a probability map.
struct TermDistribution {
  std::map<std::string, double> probs;

  static TermDistribution build(const TextCorpus& corpus);
};

// Jensen-Shannon divergence against the even mixture, base-2 logs, scaled
// to [0, 100]. Symmetric; identical inputs give 0, disjoint supports 100.
double jsd(const TermDistribution& s, const TermDistribution& t);

// Rank correlation of two orderings of the same item set (|items| >= 2).
double spearman(const std::vector<std::string>& order_a,
                const std::vector<std::string>& order_b);

// Rank correlation from paired scores, with average ranks on ties.
double spearman_scores(const std::vector<double>& a, const std::vector<double>& b);

struct SourceScores {
  std::string name;
  double tvc = 0, jsv = 0, ppl = 0, jsd = 0;
};

struct SimilarityReport {
  std::vector<SourceScores> scores;
  // Per measure, source names from most to least similar.
  std::map<std::string, std::vector<std::string>> rankings;
  std::vector<std::string> consensus;  // by mean rank
  PplMode ppl_mode = PplMode::Mean;

  std::string to_text() const;
};

struct NamedTextCorpus {
  std::string name;
  TextCorpus corpus;
};

// All four measures for every source against the target. Higher is more
// similar for tvc/jsv, lower for ppl/jsd.
SimilarityReport rank_sources(const std::vector<NamedTextCorpus>& sources,
                              const TextCorpus& target,
                              const std::set<std::string>& stopwords,
                              PplMode mode = PplMode::Mean);

}  // namespace dner

#endif
