#ifndef DNER_ORACLE_HPP
#define DNER_ORACLE_HPP

#include <vector>

#include "dner/corpus.hpp"
#include "dner/transition.hpp"

namespace dner {

struct OracleResult {
  std::vector<Action> actions;
  std::vector<Mention> reachable;    // replaying `actions` emits exactly these
  std::vector<Mention> unreachable;  // gold mentions the sequence cannot emit
};

// Derives a gold action sequence for an annotated sentence with a
// deterministic greedy rule. Priorities at each state:
//   1. reduce the top two spans when their union is still a subset of a
//      pending gold mention (LEFT_REDUCE keeps the lower span when it is
//      needed by another pending mention, RIGHT_REDUCE keeps the upper one,
//      plain REDUCE otherwise);
//   2. COMPLETE when the top span equals a pending gold mention, unless that
//      span is a strict prefix of another pending mention that still needs
//      future tokens;
//   3. SHIFT when the next token belongs to a pending mention;
//   4. OUT while the buffer is non-empty.
// The sequence stops early when none applies; mentions it cannot emit are
// returned as `unreachable` (only crossing compositions trigger this).
OracleResult oracle(const AnnotatedSentence& as);

// Exhaustive counterpart used as ground truth in tests: bounded breadth-first
// search over action sequences maximizing |emitted ∩ gold|, tie-broken by
// fewest actions and then by tie_break_rank order. Refuses sentences longer
// than `max_len` with SizeLimitError.
OracleResult reference_oracle(const AnnotatedSentence& as, std::size_t max_len = 12);

// Replays an action sequence from the initial state and returns the final
// state. Every step must be legal.
ParserState replay(std::size_t sentence_length, const std::vector<Action>& actions);

}  // namespace dner

#endif
