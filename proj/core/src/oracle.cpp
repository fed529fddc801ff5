#include "dner/oracle.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "dner/error.hpp"
#include "dner/util.hpp"

namespace dner {

namespace {

bool subset_of(const std::vector<int>& small, const std::vector<int>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// `small` equals the first |small| sorted positions of `big`, |small| < |big|.
bool strict_prefix_of(const std::vector<int>& small, const std::vector<int>& big) {
  if (small.size() >= big.size()) return false;
  return std::equal(small.begin(), small.end(), big.begin());
}

bool position_pending(int pos, const std::vector<Mention>& gold,
                      const std::vector<bool>& emitted) {
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!emitted[i] && gold[i].contains(pos)) return true;
  }
  return false;
}

// A span is still needed when some pending mention other than the one the
// union is building contains it.
bool span_needed(const std::vector<int>& span, const std::vector<int>& merged,
                 const std::vector<Mention>& gold, const std::vector<bool>& emitted) {
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (emitted[i]) continue;
    if (subset_of(span, gold[i].positions()) && !subset_of(merged, gold[i].positions())) {
      return true;
    }
  }
  return false;
}

}  // namespace

OracleResult oracle(const AnnotatedSentence& as) {
  const std::vector<Mention>& gold = as.mentions;
  std::vector<bool> emitted(gold.size(), false);

  OracleResult result;
  ParserState state = ParserState::initial(as.sentence.size());

  while (!state.terminal()) {
    Action action;
    bool decided = false;

    if (state.stack.size() >= 2) {
      const StackSpan& s0 = state.stack[state.stack.size() - 1];
      const StackSpan& s1 = state.stack[state.stack.size() - 2];
      if (s0.disjoint_with(s1)) {
        std::vector<int> merged(s0.positions.size() + s1.positions.size());
        std::merge(s0.positions.begin(), s0.positions.end(),
                   s1.positions.begin(), s1.positions.end(), merged.begin());
        bool target = false;
        for (std::size_t i = 0; i < gold.size(); ++i) {
          if (!emitted[i] && subset_of(merged, gold[i].positions())) { target = true; break; }
        }
        if (target) {
          if (span_needed(s1.positions, merged, gold, emitted)) {
            action = Action::left_reduce();
          } else if (span_needed(s0.positions, merged, gold, emitted)) {
            action = Action::right_reduce();
          } else {
            action = Action::reduce();
          }
          decided = true;
        }
      }
    }

    if (!decided && !state.stack.empty()) {
      const std::vector<int>& top = state.stack.back().positions;
      // Deterministic pick: lexicographically smallest category first.
      int match = -1;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        if (emitted[i] || gold[i].positions() != top) continue;
        if (match < 0 || gold[i].category() < gold[match].category()) {
          match = static_cast<int>(i);
        }
      }
      if (match >= 0) {
        bool defer = false;
        for (std::size_t i = 0; i < gold.size(); ++i) {
          if (emitted[i] || static_cast<int>(i) == match) continue;
          if (!strict_prefix_of(top, gold[i].positions())) continue;
          if (gold[i].last() >= static_cast<int>(state.buffer_index)) { defer = true; break; }
        }
        if (!defer) {
          action = Action::complete(gold[match].category());
          emitted[match] = true;
          decided = true;
        }
      }
    }

    if (!decided && state.buffer_index < state.sentence_length) {
      if (position_pending(static_cast<int>(state.buffer_index), gold, emitted)) {
        action = Action::shift();
      } else {
        action = Action::out();
      }
      decided = true;
    }

    if (!decided) break;  // stuck; remaining gold is unreachable

    state = apply(state, action);
    result.actions.push_back(action);
  }

  result.reachable = state.output;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    bool got = false;
    for (const auto& m : state.output) {
      if (mention_equal(m, gold[i])) { got = true; break; }
    }
    if (!got) result.unreachable.push_back(gold[i]);
  }
  return result;
}

ParserState replay(std::size_t sentence_length, const std::vector<Action>& actions) {
  ParserState state = ParserState::initial(sentence_length);
  for (const auto& a : actions) state = apply(state, a);
  return state;
}

namespace {

struct SearchNode {
  ParserState state;
  std::vector<Action> actions;
  std::uint32_t emitted_mask = 0;
};

std::uint64_t node_key(const SearchNode& n) {
  return splitmix64(n.state.signature() ^ (static_cast<std::uint64_t>(n.emitted_mask) << 32));
}

}  // namespace

OracleResult reference_oracle(const AnnotatedSentence& as, std::size_t max_len) {
  if (as.sentence.size() > max_len) {
    throw SizeLimitError("sentence of " + std::to_string(as.sentence.size()) +
                         " tokens exceeds the reference-oracle bound of " +
                         std::to_string(max_len));
  }
  const std::vector<Mention>& gold = as.mentions;
  if (gold.size() > 31) throw SizeLimitError("too many gold mentions for the search mask");

  // Only actions that can still contribute a pending gold mention are
  // explored; useless shifts and reduces cannot raise |emitted ∩ gold|.
  constexpr std::size_t kNodeBudget = 2'000'000;

  SearchNode root;
  root.state = ParserState::initial(as.sentence.size());

  SearchNode best = root;
  auto better = [](const SearchNode& a, const SearchNode& b) {
    int ca = __builtin_popcount(a.emitted_mask);
    int cb = __builtin_popcount(b.emitted_mask);
    if (ca != cb) return ca > cb;
    return a.actions.size() < b.actions.size();
  };

  std::deque<SearchNode> queue{root};
  std::unordered_map<std::uint64_t, int> seen{{node_key(root), 0}};
  std::size_t expanded = 0;

  while (!queue.empty()) {
    SearchNode node = std::move(queue.front());
    queue.pop_front();
    if (better(node, best)) best = node;
    if (node.state.terminal()) continue;
    if (++expanded > kNodeBudget) {
      throw SizeLimitError("reference-oracle search exceeded its node budget");
    }

    std::vector<Action> candidates;
    for (ActionKind kind : valid_actions(node.state)) {
      switch (kind) {
        case ActionKind::SHIFT: {
          int pos = static_cast<int>(node.state.buffer_index);
          bool useful = false;
          for (std::size_t i = 0; i < gold.size(); ++i) {
            if (!(node.emitted_mask & (1u << i)) && gold[i].contains(pos)) { useful = true; break; }
          }
          if (useful) candidates.push_back(Action::shift());
          break;
        }
        case ActionKind::OUT:
          candidates.push_back(Action::out());
          break;
        case ActionKind::COMPLETE: {
          const auto& top = node.state.stack.back().positions;
          for (std::size_t i = 0; i < gold.size(); ++i) {
            if (!(node.emitted_mask & (1u << i)) && gold[i].positions() == top) {
              candidates.push_back(Action::complete(gold[i].category()));
            }
          }
          break;
        }
        case ActionKind::REDUCE:
        case ActionKind::LEFT_REDUCE:
        case ActionKind::RIGHT_REDUCE: {
          const StackSpan& s0 = node.state.stack[node.state.stack.size() - 1];
          const StackSpan& s1 = node.state.stack[node.state.stack.size() - 2];
          std::vector<int> merged(s0.positions.size() + s1.positions.size());
          std::merge(s0.positions.begin(), s0.positions.end(),
                     s1.positions.begin(), s1.positions.end(), merged.begin());
          bool useful = false;
          for (std::size_t i = 0; i < gold.size(); ++i) {
            if (!(node.emitted_mask & (1u << i)) &&
                subset_of(merged, gold[i].positions())) { useful = true; break; }
          }
          if (useful) candidates.push_back(Action{kind, ""});
          break;
        }
      }
    }

    std::sort(candidates.begin(), candidates.end(), [](const Action& a, const Action& b) {
      int ra = tie_break_rank(a.kind), rb = tie_break_rank(b.kind);
      if (ra != rb) return ra < rb;
      return a.category < b.category;
    });

    for (const auto& a : candidates) {
      SearchNode child;
      child.state = apply(node.state, a);
      child.emitted_mask = node.emitted_mask;
      if (a.kind == ActionKind::COMPLETE) {
        const Mention& m = child.state.output.back();
        for (std::size_t i = 0; i < gold.size(); ++i) {
          if (!(child.emitted_mask & (1u << i)) && mention_equal(gold[i], m)) {
            child.emitted_mask |= 1u << i;
            break;
          }
        }
      }
      std::uint64_t key = node_key(child);
      auto it = seen.find(key);
      int depth = static_cast<int>(node.actions.size()) + 1;
      if (it != seen.end() && it->second <= depth) continue;
      seen[key] = depth;
      child.actions = node.actions;
      child.actions.push_back(a);
      queue.push_back(std::move(child));
    }
  }

  OracleResult result;
  result.actions = best.actions;
  ParserState final_state = replay(as.sentence.size(), best.actions);
  result.reachable = final_state.output;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!(best.emitted_mask & (1u << i))) result.unreachable.push_back(gold[i]);
  }
  return result;
}

}  // namespace dner
