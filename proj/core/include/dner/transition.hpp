#ifndef DNER_TRANSITION_HPP
#define DNER_TRANSITION_HPP

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dner/corpus.hpp"
#include "dner/error.hpp"

namespace dner {

// The six transition moves. SHIFT moves the next buffer token onto the stack
// (it is part of some mention); OUT drops it; COMPLETE pops the top span and
// emits it as a mention of the action's category; REDUCE pops the top two
// spans and pushes their sorted union; LEFT_REDUCE additionally keeps the
// lower span beneath the union, RIGHT_REDUCE keeps the upper one.
enum class ActionKind {
  SHIFT,
  OUT,
  COMPLETE,
  REDUCE,
  LEFT_REDUCE,
  RIGHT_REDUCE,
};

constexpr int kActionKindCount = 6;

struct Action {
  ActionKind kind = ActionKind::OUT;
  std::string category;  // present iff kind == COMPLETE

  static Action shift() { return {ActionKind::SHIFT, ""}; }
  static Action out() { return {ActionKind::OUT, ""}; }
  static Action complete(std::string cat) { return {ActionKind::COMPLETE, std::move(cat)}; }
  static Action reduce() { return {ActionKind::REDUCE, ""}; }
  static Action left_reduce() { return {ActionKind::LEFT_REDUCE, ""}; }
  static Action right_reduce() { return {ActionKind::RIGHT_REDUCE, ""}; }

  bool operator==(const Action& o) const { return kind == o.kind && category == o.category; }
  bool operator<(const Action& o) const {
    if (kind != o.kind) return kind < o.kind;
    return category < o.category;
  }
};

// Ties between equally scored actions resolve in this order (lower wins):
// OUT < SHIFT < COMPLETE < REDUCE < LEFT_REDUCE < RIGHT_REDUCE,
// then lexicographically by category.
int tie_break_rank(ActionKind kind);

// Wire form: "SHIFT", "OUT", "COMPLETE:<category>", "REDUCE", "LEFT-REDUCE",
// "RIGHT-REDUCE" -- one action per line in trace files.
std::string to_string(const Action& a);
Action parse_action(const std::string& text);

// A partially processed span on the stack. Gaps are allowed: reducing two
// non-adjacent spans yields a discontinuous span.
struct StackSpan {
  std::vector<int> positions;  // strictly increasing
  std::vector<Action> origin;  // reduce actions that built this span

  int first() const { return positions.front(); }
  int last() const { return positions.back(); }
  bool disjoint_with(const StackSpan& other) const;
};

class InvalidActionError : public Error {
 public:
  InvalidActionError(std::string violation, const std::string& detail)
      : Error(violation + ": " + detail), violation_(std::move(violation)) {}
  const std::string& violation() const { return violation_; }

 private:
  std::string violation_;
};

// The parser configuration. A value type: apply() returns a new state and
// never mutates its input.
struct ParserState {
  std::vector<StackSpan> stack;  // top is back()
  std::size_t buffer_index = 0;  // next unconsumed token
  std::vector<Action> history;
  std::vector<Mention> output;
  std::size_t sentence_length = 0;

  static ParserState initial(std::size_t sentence_length);

  bool terminal() const { return stack.empty() && buffer_index == sentence_length; }

  // Hash of (stack contents, buffer index); the decoder's repeat-state guard.
  std::uint64_t signature() const;
};

// Legal action kinds for a non-terminal state. SHIFT/OUT need buffer input;
// COMPLETE needs a span; the REDUCE family needs two disjoint top spans.
// Never empty for a non-terminal state.
std::set<ActionKind> valid_actions(const ParserState& state);

// Applies one action. Throws InvalidActionError with a named violation
// (e.g. "ReduceNeedsTwoSpans") if the action is not legal in this state.
ParserState apply(const ParserState& state, const Action& action);

// Scores concrete actions for a state. Implementations must be read-only
// during decoding; decoding different sentences in parallel is safe.
class ActionScorer {
 public:
  virtual ~ActionScorer() = default;

  // Categories used to instantiate COMPLETE candidates.
  virtual std::vector<std::string> categories() const = 0;

  // Fills scores[i] for candidates[i].
  virtual void score(const ParserState& state, const Sentence& sentence,
                     std::span<const Action> candidates,
                     std::span<double> scores) const = 0;
};

struct DecodeResult {
  std::vector<Mention> mentions;  // deduplicated, in emission order
  std::vector<Action> actions;
  std::vector<std::string> flags;  // notable events, e.g. multi-type completions
};

// Greedy decoding under hard legality constraints: at every state take the
// highest-scoring valid action (ties per tie_break_rank), apply, repeat until
// the terminal state. A repeat-state guard skips candidates that would
// recreate an already-visited (stack, buffer) configuration or re-emit an
// identical mention, so decoding always halts.
DecodeResult decode(const Sentence& sentence, const ActionScorer& scorer);

}  // namespace dner

#endif
