#ifndef DNER_CORPUS_HPP
#define DNER_CORPUS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dner {

// A tokenized sentence. Tokens are the annotation unit; there are no
// character offsets anywhere in the toolkit.
struct Sentence {
  std::vector<std::string> tokens;
  std::string doc_id;
  std::size_t index = 0;  // 0-based position within the document

  Sentence() = default;
  Sentence(std::vector<std::string> toks, std::string doc, std::size_t idx);

  std::size_t size() const { return tokens.size(); }
};

// Half-open is never used here: a run [first, last] covers both endpoints.
struct Run {
  int first = 0;
  int last = 0;
  int length() const { return last - first + 1; }
};

// An entity mention: a set of token positions plus a category. The position
// list is the canonical representation; spans are derived from it, so a
// mention may be discontinuous (several maximal runs) and mentions may
// overlap freely.
class Mention {
 public:
  Mention() = default;
  // Positions must be non-empty and strictly increasing.
  Mention(std::vector<int> positions, std::string category);

  const std::vector<int>& positions() const { return positions_; }
  const std::string& category() const { return category_; }

  int first() const { return positions_.front(); }
  int last() const { return positions_.back(); }

  // Maximal contiguous runs, in order.
  std::vector<Run> components() const;

  bool continuous() const;
  bool discontinuous() const { return !continuous(); }

  // |positions|; intervals are not counted.
  int length() const { return static_cast<int>(positions_.size()); }
  // Total gap width between components: (last - first + 1) - |positions|.
  int interval_length() const { return last() - first() + 1 - length(); }

  bool contains(int pos) const;

  bool operator==(const Mention& other) const {
    return positions_ == other.positions_ && category_ == other.category_;
  }
  bool operator<(const Mention& other) const {
    return std::tie(positions_, category_) < std::tie(other.positions_, other.category_);
  }

 private:
  std::vector<int> positions_;
  std::string category_;
};

// Exact position-set and category equality; the unit of strict matching.
bool mention_equal(const Mention& a, const Mention& b);

// A sentence plus its (possibly overlapping, possibly discontinuous)
// mentions. Duplicate (positions, category) pairs are rejected.
struct AnnotatedSentence {
  Sentence sentence;
  std::vector<Mention> mentions;

  AnnotatedSentence() = default;
  AnnotatedSentence(Sentence s, std::vector<Mention> ms);

  std::pair<std::string, std::size_t> key() const {
    return {sentence.doc_id, sentence.index};
  }
};

using Corpus = std::vector<AnnotatedSentence>;

enum class OverlapCategory {
  NoOverlap,           // discontinuous, shares no position with any other mention
  LeftOverlap,         // discontinuous, only the first component is shared
  RightOverlap,        // discontinuous, only the last component is shared
  MultiOverlap,        // discontinuous, several shared components (crossing)
  ContinuousOverlap,   // continuous, shares positions with another mention
  ContinuousIsolated,  // continuous, disjoint from every other mention
};

const char* to_string(OverlapCategory c);

struct MentionShape {
  bool is_discontinuous = false;
  int component_count = 1;
  int total_interval_length = 0;
  int mention_length = 0;
  OverlapCategory overlap_category = OverlapCategory::ContinuousIsolated;
};

// Structural classification of a mention within its sentence. `mention`
// must be one of `ctx.mentions`.
MentionShape classify_mention(const Mention& mention, const AnnotatedSentence& ctx);

struct StatisticsReport {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::size_t mentions = 0;
  std::size_t discontinuous = 0;
  std::size_t continuous_overlap = 0;

  std::optional<double> avg_mention_length;
  std::optional<double> avg_discontinuous_length;  // intervals not counted
  std::optional<double> avg_interval_length;

  // Keyed by component count; discontinuous mentions only.
  std::map<int, std::size_t> component_histogram;
  // All six categories; the four discontinuous ones sum to `discontinuous`.
  std::map<OverlapCategory, std::size_t> overlap_histogram;

  std::string discontinuous_pct() const;  // of all mentions, truncated to 1 dp

  // Human-readable table followed by stable `key=value` lines.
  std::string to_text() const;
};

StatisticsReport corpus_statistics(const Corpus& corpus);

}  // namespace dner

#endif
