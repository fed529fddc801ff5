#ifndef DNER_SCHEMAS_HPP
#define DNER_SCHEMAS_HPP

#include <string>
#include <vector>

#include "dner/corpus.hpp"

namespace dner {

enum class Schema { BIO, BIOExt };

// Per-token tags under a named schema. `lossy` records whether encoding
// dropped or merged information. For BIOExt the tags carry no category;
// `category` keeps the sentence's single category so decoding can restore it.
struct TagSequence {
  Schema schema = Schema::BIO;
  std::vector<std::string> tags;
  bool lossy = false;
  std::string category;
};

// Flat BIO encoding. Continuous, non-overlapping mentions are encoded
// exactly. Mentions that cannot be represented are dropped and `lossy` is
// set: on overlap the longest mention wins, then the leftmost; discontinuous
// mentions are always dropped.
TagSequence encode_bio(const AnnotatedSentence& as);

// Decodes maximal B-X (I-X)* runs into mentions. An I-X that does not follow
// B-X or I-X is repaired to B-X. `repairs` (optional) receives the positions
// that were repaired.
AnnotatedSentence decode_bio(const Sentence& sentence, const TagSequence& tags,
                             std::vector<int>* repairs = nullptr);

// Extension with shared-head and discontinuous-body indicators:
//   BH/IH  positions shared by two or more mentions (the head)
//   BD/ID  non-shared positions of discontinuous mentions (a body)
//   B/I    non-shared positions of continuous mentions
//   O      everything else
// Representable only when the sentence has a single entity category;
// otherwise throws SchemaLimitationError.
TagSequence encode_bioext(const AnnotatedSentence& as);

struct AmbiguityNote {
  std::string doc_id;
  std::size_t sentence_index = 0;
  // Mention count of the alternative reading in which heads also stand alone.
  std::size_t alternative_mentions = 0;
  std::string description;
};

struct BioExtDecode {
  AnnotatedSentence sentence;
  std::vector<AmbiguityNote> ambiguity_report;
};

// Deterministic decoding heuristic: every body (BD/ID run) attaches to the
// nearest head run on its right if one appears before the next body,
// otherwise to the nearest head on its left; when the sentence has no head
// at all, the body runs together form one discontinuous mention; a B/I run
// adjacent to a head merges with it; remaining B/I runs stand alone. The
// encoding is ambiguous by construction, so alternative readings are
// reported, never fatal.
BioExtDecode decode_bioext(const Sentence& sentence, const TagSequence& tags);

// Flat-merge preprocessing: replaces every discontinuous mention by its
// covering span, then transitively merges overlapping mentions into their
// covering span. The merged mention takes the category of the longest
// constituent (ties: leftmost, then lexicographic). Output mentions are
// continuous and pairwise disjoint; the transform is idempotent.
AnnotatedSentence flat_merge(const AnnotatedSentence& as);

}  // namespace dner

#endif
