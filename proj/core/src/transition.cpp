#include "dner/transition.hpp"

#include <algorithm>
#include <unordered_set>

#include "dner/util.hpp"

namespace dner {

int tie_break_rank(ActionKind kind) {
  switch (kind) {
    case ActionKind::OUT: return 0;
    case ActionKind::SHIFT: return 1;
    case ActionKind::COMPLETE: return 2;
    case ActionKind::REDUCE: return 3;
    case ActionKind::LEFT_REDUCE: return 4;
    case ActionKind::RIGHT_REDUCE: return 5;
  }
  return 6;
}

std::string to_string(const Action& a) {
  switch (a.kind) {
    case ActionKind::SHIFT: return "SHIFT";
    case ActionKind::OUT: return "OUT";
    case ActionKind::COMPLETE: return "COMPLETE:" + a.category;
    case ActionKind::REDUCE: return "REDUCE";
    case ActionKind::LEFT_REDUCE: return "LEFT-REDUCE";
    case ActionKind::RIGHT_REDUCE: return "RIGHT-REDUCE";
  }
  return "?";
}

Action parse_action(const std::string& text) {
  if (text == "SHIFT") return Action::shift();
  if (text == "OUT") return Action::out();
  if (text == "REDUCE") return Action::reduce();
  if (text == "LEFT-REDUCE") return Action::left_reduce();
  if (text == "RIGHT-REDUCE") return Action::right_reduce();
  if (text.rfind("COMPLETE:", 0) == 0 && text.size() > 9) {
    return Action::complete(text.substr(9));
  }
  throw ParseError("action", 0, "unrecognized action '" + text + "'");
}

bool StackSpan::disjoint_with(const StackSpan& other) const {
  auto a = positions.begin(), ae = positions.end();
  auto b = other.positions.begin(), be = other.positions.end();
  while (a != ae && b != be) {
    if (*a == *b) return false;
    if (*a < *b) ++a; else ++b;
  }
  return true;
}

ParserState ParserState::initial(std::size_t sentence_length) {
  ParserState s;
  s.sentence_length = sentence_length;
  return s;
}

std::uint64_t ParserState::signature() const {
  std::uint64_t h = splitmix64(buffer_index);
  for (const auto& span : stack) {
    h = splitmix64(h ^ 0x5370616eULL);  // span delimiter
    for (int p : span.positions) h = splitmix64(h ^ static_cast<std::uint64_t>(p));
  }
  return h;
}

std::set<ActionKind> valid_actions(const ParserState& state) {
  if (state.terminal()) throw ContractError("valid_actions on terminal state");
  std::set<ActionKind> kinds;
  if (state.buffer_index < state.sentence_length) {
    kinds.insert(ActionKind::SHIFT);
    kinds.insert(ActionKind::OUT);
  }
  if (!state.stack.empty()) kinds.insert(ActionKind::COMPLETE);
  if (state.stack.size() >= 2) {
    const StackSpan& s0 = state.stack[state.stack.size() - 1];
    const StackSpan& s1 = state.stack[state.stack.size() - 2];
    if (s0.disjoint_with(s1)) {
      kinds.insert(ActionKind::REDUCE);
      kinds.insert(ActionKind::LEFT_REDUCE);
      kinds.insert(ActionKind::RIGHT_REDUCE);
    }
  }
  return kinds;
}

namespace {

StackSpan merge_spans(const StackSpan& s1, const StackSpan& s0, const Action& via) {
  StackSpan merged;
  merged.positions.resize(s0.positions.size() + s1.positions.size());
  std::merge(s0.positions.begin(), s0.positions.end(),
             s1.positions.begin(), s1.positions.end(), merged.positions.begin());
  merged.origin = s1.origin;
  merged.origin.insert(merged.origin.end(), s0.origin.begin(), s0.origin.end());
  merged.origin.push_back(via);
  return merged;
}

}  // namespace

ParserState apply(const ParserState& state, const Action& action) {
  if (state.terminal()) {
    throw InvalidActionError("TerminalState", "no action is valid in the terminal state");
  }
  ParserState next = state;
  switch (action.kind) {
    case ActionKind::SHIFT: {
      if (state.buffer_index >= state.sentence_length) {
        throw InvalidActionError("ShiftNeedsBuffer", "buffer is exhausted");
      }
      StackSpan span;
      span.positions = {static_cast<int>(state.buffer_index)};
      next.stack.push_back(std::move(span));
      ++next.buffer_index;
      break;
    }
    case ActionKind::OUT: {
      if (state.buffer_index >= state.sentence_length) {
        throw InvalidActionError("OutNeedsBuffer", "buffer is exhausted");
      }
      ++next.buffer_index;
      break;
    }
    case ActionKind::COMPLETE: {
      if (state.stack.empty()) {
        throw InvalidActionError("CompleteNeedsSpan", "stack is empty");
      }
      if (action.category.empty()) {
        throw InvalidActionError("CompleteNeedsCategory", "COMPLETE carries no category");
      }
      next.output.emplace_back(next.stack.back().positions, action.category);
      next.stack.pop_back();
      break;
    }
    case ActionKind::REDUCE:
    case ActionKind::LEFT_REDUCE:
    case ActionKind::RIGHT_REDUCE: {
      if (state.stack.size() < 2) {
        throw InvalidActionError("ReduceNeedsTwoSpans", "stack holds fewer than two spans");
      }
      const StackSpan s0 = state.stack[state.stack.size() - 1];
      const StackSpan s1 = state.stack[state.stack.size() - 2];
      if (!s0.disjoint_with(s1)) {
        throw InvalidActionError("ReduceNeedsDisjointSpans", "top two spans share a position");
      }
      next.stack.pop_back();
      next.stack.pop_back();
      if (action.kind == ActionKind::LEFT_REDUCE) next.stack.push_back(s1);
      if (action.kind == ActionKind::RIGHT_REDUCE) next.stack.push_back(s0);
      next.stack.push_back(merge_spans(s1, s0, action));
      break;
    }
  }
  next.history.push_back(action);
  return next;
}

DecodeResult decode(const Sentence& sentence, const ActionScorer& scorer) {
  DecodeResult result;
  ParserState state = ParserState::initial(sentence.size());

  std::vector<std::string> cats = scorer.categories();
  std::sort(cats.begin(), cats.end());

  std::unordered_set<std::uint64_t> visited;
  visited.insert(state.signature());

  while (!state.terminal()) {
    std::vector<Action> candidates;
    for (ActionKind kind : valid_actions(state)) {
      if (kind == ActionKind::COMPLETE) {
        for (const auto& c : cats) candidates.push_back(Action::complete(c));
      } else {
        candidates.push_back(Action{kind, ""});
      }
    }
    if (candidates.empty()) {
      // Only COMPLETE is valid but the scorer knows no categories.
      throw ContractError("cannot finish decoding: scorer exposes no categories");
    }
    std::vector<double> scores(candidates.size(), 0.0);
    scorer.score(state, sentence, candidates, scores);

    // Stable preference order: score desc, then tie-break rank, then category.
    std::vector<std::size_t> order(candidates.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      int ra = tie_break_rank(candidates[a].kind);
      int rb = tie_break_rank(candidates[b].kind);
      if (ra != rb) return ra < rb;
      return candidates[a].category < candidates[b].category;
    });

    // Repeat-state guard: prefer actions leading to fresh configurations and
    // not re-emitting an identical mention; fall back to the best raw action
    // if everything is filtered (progress is then forced by the buffer).
    std::size_t chosen = order.front();
    bool found = false;
    for (std::size_t idx : order) {
      const Action& a = candidates[idx];
      ParserState next = apply(state, a);
      if (visited.count(next.signature())) continue;
      if (a.kind == ActionKind::COMPLETE) {
        const Mention& emitted = next.output.back();
        bool dup = false;
        for (const auto& m : state.output) {
          if (mention_equal(m, emitted)) { dup = true; break; }
        }
        if (dup) continue;
      }
      chosen = idx;
      found = true;
      break;
    }
    if (!found) chosen = order.front();

    const Action& action = candidates[chosen];
    if (action.kind == ActionKind::COMPLETE) {
      for (const auto& m : state.output) {
        if (m.positions() == state.stack.back().positions &&
            m.category() != action.category) {
          result.flags.push_back("multi-type completion of an already emitted span");
          break;
        }
      }
    }
    state = apply(state, action);
    visited.insert(state.signature());
    result.actions.push_back(action);
  }

  for (const auto& m : state.output) {
    bool dup = false;
    for (const auto& seen : result.mentions) {
      if (mention_equal(seen, m)) { dup = true; break; }
    }
    if (!dup) result.mentions.push_back(m);
  }
  return result;
}

}  // namespace dner
