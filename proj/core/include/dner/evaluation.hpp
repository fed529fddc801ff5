#ifndef DNER_EVALUATION_HPP
#define DNER_EVALUATION_HPP

#include <map>
#include <string>
#include <vector>

#include "dner/corpus.hpp"

namespace dner {

enum class BreakdownAxis { MentionLength, IntervalLength, OverlapCategory };

BreakdownAxis parse_axis(const std::string& name);

struct BucketStats {
  std::size_t gold = 0;
  std::size_t tp = 0;
  double recall() const { return gold == 0 ? 0.0 : static_cast<double>(tp) / gold; }
};

// Micro-averaged strict-match metrics: a prediction counts as a true
// positive only on exact position-set and category equality.
struct EvalReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // 0/0 counts as 0 in the metrics; these flags separate "no predictions
  // made" / "no gold present" from "all wrong".
  bool precision_undefined = false;
  bool recall_undefined = false;

  std::map<std::string, BucketStats> breakdown;

  // Human-readable lines followed by stable `key=value` lines.
  std::string to_text() const;
};

// Predicted duplicates are collapsed before scoring. Gold and prediction
// corpora must carry the same (doc_id, index) sequence.
EvalReport evaluate(const Corpus& gold, const Corpus& pred);

// Sentences containing at least one discontinuous gold mention.
Corpus subset_disc_sentences(const Corpus& gold);

// Restricts both sides to discontinuous mentions: tp/fn over discontinuous
// gold, fp over discontinuous predictions.
EvalReport subset_disc_only(const Corpus& gold, const Corpus& pred);

// Per-bucket recall along one axis. Interval length 0 buckets the
// continuous mentions.
std::map<std::string, BucketStats> breakdown(const Corpus& gold, const Corpus& pred,
                                             BreakdownAxis axis);

}  // namespace dner

#endif
