#include "dner/scorer.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>

#include "dner/error.hpp"
#include "dner/oracle.hpp"
#include "dner/util.hpp"

namespace dner {

std::uint64_t FeatureVector::fnv_id(const std::string& feature) {
  return fnv1a64(feature);
}

namespace {

constexpr const char* kEmpty = "<EMPTY>";
constexpr const char* kNone = "<NONE>";

const std::string& token_or_empty(const Sentence& sentence, const std::vector<int>* span,
                                  bool last) {
  static const std::string empty = kEmpty;
  if (!span) return empty;
  int pos = last ? span->back() : span->front();
  return sentence.tokens[static_cast<std::size_t>(pos)];
}

const char* kind_name(ActionKind k) {
  switch (k) {
    case ActionKind::SHIFT: return "SHIFT";
    case ActionKind::OUT: return "OUT";
    case ActionKind::COMPLETE: return "COMPLETE";
    case ActionKind::REDUCE: return "REDUCE";
    case ActionKind::LEFT_REDUCE: return "LEFT-REDUCE";
    case ActionKind::RIGHT_REDUCE: return "RIGHT-REDUCE";
  }
  return "?";
}

}  // namespace

FeatureVector extract_features(const ParserState& state, const Sentence& sentence) {
  if (state.terminal()) throw ContractError("no features for the terminal state");
  FeatureVector fv;

  const std::vector<int>* spans[3] = {nullptr, nullptr, nullptr};
  for (int i = 0; i < 3; ++i) {
    if (state.stack.size() > static_cast<std::size_t>(i)) {
      spans[i] = &state.stack[state.stack.size() - 1 - static_cast<std::size_t>(i)].positions;
    }
  }

  for (int i = 0; i < 3; ++i) {
    std::string prefix = "s" + std::to_string(i);
    const std::string& first = token_or_empty(sentence, spans[i], false);
    const std::string& last = token_or_empty(sentence, spans[i], true);
    fv.add(prefix + ".first=" + first);
    fv.add(prefix + ".last=" + last);
    fv.add(prefix + ".first.lc=" + to_lower(first));
    fv.add(prefix + ".last.lc=" + to_lower(last));
    fv.add(prefix + ".first.shape=" + word_shape(first));
    if (spans[i]) {
      int cap = 0;
      std::string joined;
      for (int p : *spans[i]) {
        const std::string& tok = sentence.tokens[static_cast<std::size_t>(p)];
        fv.add(prefix + ".tok=" + tok);
        if (cap < 4) {
          if (cap) joined += '+';
          joined += tok;
        }
        if (++cap == 6) break;
      }
      fv.add(prefix + ".len=" + std::to_string(spans[i]->size()));
      if (i < 2) fv.add(prefix + ".str=" + joined);  // whole-span signature
    }
  }
  if (spans[0]) {
    bool gap = spans[0]->back() - spans[0]->front() + 1 != static_cast<int>(spans[0]->size());
    fv.add(std::string("s0.gap=") + (gap ? "1" : "0"));
  }
  if (spans[1]) {
    bool gap = spans[1]->back() - spans[1]->front() + 1 != static_cast<int>(spans[1]->size());
    fv.add(std::string("s1.gap=") + (gap ? "1" : "0"));
    // Whether the top two spans touch; reductions mostly join adjacent spans.
    fv.add(std::string("s1s0.adj=") + (spans[1]->back() + 1 == spans[0]->front() ? "1" : "0"));
  }

  std::string buf[3];
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t pos = state.buffer_index + i;
    buf[i] = pos < sentence.size() ? sentence.tokens[pos] : kEmpty;
    fv.add("buf" + std::to_string(i) + "=" + buf[i]);
  }
  fv.add("buf0.lc=" + to_lower(buf[0]));
  fv.add("buf0.shape=" + word_shape(buf[0]));

  fv.add(std::string("prev=") +
         (state.history.empty() ? kNone : kind_name(state.history.back().kind)));

  // Stack-buffer conjunctions: a span may need to combine with a token that
  // is still in the buffer.
  fv.add("s0l*b0=" + token_or_empty(sentence, spans[0], true) + "|" + buf[0]);
  fv.add("s1l*b0=" + token_or_empty(sentence, spans[1], true) + "|" + buf[0]);
  if (spans[1]) {
    bool adj = spans[1]->back() + 1 == spans[0]->front();
    fv.add(std::string("adj*b0=") + (adj ? "1|" : "0|") + buf[0]);
  }
  return fv;
}

PerceptronModel::PerceptronModel(std::vector<std::string> categories) {
  std::sort(categories.begin(), categories.end());
  categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
  inventory_.push_back(Action::out());
  inventory_.push_back(Action::shift());
  for (const auto& c : categories) inventory_.push_back(Action::complete(c));
  inventory_.push_back(Action::reduce());
  inventory_.push_back(Action::left_reduce());
  inventory_.push_back(Action::right_reduce());
  weights_.resize(inventory_.size());
  averaged_.resize(inventory_.size());
}

std::vector<std::string> PerceptronModel::categories() const {
  std::vector<std::string> cats;
  for (const auto& a : inventory_) {
    if (a.kind == ActionKind::COMPLETE) cats.push_back(a.category);
  }
  return cats;
}

int PerceptronModel::action_index(const Action& a) const {
  for (std::size_t i = 0; i < inventory_.size(); ++i) {
    if (inventory_[i] == a) return static_cast<int>(i);
  }
  return -1;
}

double PerceptronModel::score(const FeatureVector& fv, const Action& action) const {
  int idx = action_index(action);
  if (idx < 0) throw ContractError("action not in the model inventory: " + to_string(action));
  const auto& row = averaged_[static_cast<std::size_t>(idx)];
  double total = 0.0;
  for (const auto& [feat, count] : fv.counts()) {
    auto it = row.find(feat);
    if (it != row.end()) total += it->second * count;
  }
  return total;
}

void PerceptronModel::score(const ParserState& state, const Sentence& sentence,
                            std::span<const Action> candidates,
                            std::span<double> scores) const {
  FeatureVector fv = extract_features(state, sentence);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = score(fv, candidates[i]);
  }
}

void PerceptronModel::bump(int action, std::uint64_t feature, double delta) {
  Cell& cell = weights_[static_cast<std::size_t>(action)][feature];
  // Lazy averaging: account for the stretch the old weight survived.
  cell.accumulated += cell.weight * static_cast<double>(update_count_ - 1 - cell.last_update);
  cell.last_update = update_count_ - 1;
  cell.weight += delta;
}

void PerceptronModel::finalize_average() {
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    averaged_[a].clear();
    for (const auto& [feat, cell] : weights_[a]) {
      double acc = cell.accumulated +
                   cell.weight * static_cast<double>(update_count_ - cell.last_update);
      double avg = update_count_ == 0 ? 0.0 : acc / static_cast<double>(update_count_);
      if (avg != 0.0) averaged_[a][feat] = avg;
    }
  }
}

TrainResult train(const Corpus& corpus, std::size_t epochs, std::uint64_t seed) {
  if (corpus.empty()) throw ContractError("training corpus is empty");
  if (epochs == 0) throw ContractError("epochs must be at least 1");

  std::set<std::string> cats;
  for (const auto& as : corpus) {
    for (const auto& m : as.mentions) cats.insert(m.category());
  }
  TrainResult result;
  result.model = PerceptronModel(std::vector<std::string>(cats.begin(), cats.end()));
  PerceptronModel& model = result.model;

  // Gold trajectories are fixed, so derive them once.
  struct Trajectory {
    const AnnotatedSentence* as;
    std::vector<Action> actions;
  };
  std::vector<Trajectory> trajectories;
  for (const auto& as : corpus) {
    trajectories.push_back({&as, oracle(as).actions});
  }

  Rng rng(seed);
  std::vector<std::size_t> order(trajectories.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(order);
    std::size_t mistakes = 0;
    for (std::size_t idx : order) {
      const Trajectory& traj = trajectories[idx];
      const Sentence& sentence = traj.as->sentence;
      ParserState state = ParserState::initial(sentence.size());
      for (const Action& gold : traj.actions) {
        // Averaging runs over decision timesteps so late stable weights
        // dominate the averaged model.
        ++model.update_count_;
        FeatureVector fv = extract_features(state, sentence);

        // Argmax over valid actions with current (non-averaged) weights.
        Action best = gold;
        double best_score = 0.0;
        bool have = false;
        for (ActionKind kind : valid_actions(state)) {
          std::vector<Action> expanded;
          if (kind == ActionKind::COMPLETE) {
            for (const Action& a : model.inventory_) {
              if (a.kind == ActionKind::COMPLETE) expanded.push_back(a);
            }
          } else {
            expanded.push_back(Action{kind, ""});
          }
          for (const Action& a : expanded) {
            int ai = model.action_index(a);
            if (ai < 0) continue;
            double s = 0.0;
            const auto& row = model.weights_[static_cast<std::size_t>(ai)];
            for (const auto& [feat, count] : fv.counts()) {
              auto it = row.find(feat);
              if (it != row.end()) s += it->second.weight * count;
            }
            bool wins = !have || s > best_score ||
                        (s == best_score &&
                         (tie_break_rank(a.kind) < tie_break_rank(best.kind) ||
                          (tie_break_rank(a.kind) == tie_break_rank(best.kind) &&
                           a.category < best.category)));
            if (wins) {
              best = a;
              best_score = s;
              have = true;
            }
          }
        }

        if (!(best == gold)) {
          ++mistakes;
          int gold_idx = model.action_index(gold);
          int pred_idx = model.action_index(best);
          for (const auto& [feat, count] : fv.counts()) {
            model.bump(gold_idx, feat, static_cast<double>(count));
            model.bump(pred_idx, feat, -static_cast<double>(count));
          }
        }
        state = apply(state, gold);
      }
    }
    result.epoch_updates.push_back(mistakes);
  }

  model.finalize_average();
  return result;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  put_u64(out, bits);
}

void put_str(std::vector<std::uint8_t>& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

struct Reader {
  const std::vector<std::uint8_t>& data;
  std::size_t pos = 0;

  std::uint32_t u32() {
    require(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data[pos++]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    require(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data[pos++]) << (8 * i);
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::string str() {
    std::uint32_t n = u32();
    require(n);
    std::string s(reinterpret_cast<const char*>(data.data() + pos), n);
    pos += n;
    return s;
  }
  void require(std::size_t n) {
    if (pos + n > data.size()) throw DataError("truncated model file");
  }
};

}  // namespace

std::vector<std::uint8_t> PerceptronModel::serialize() const {
  std::vector<std::uint8_t> out;
  const char magic[4] = {'D', 'N', 'P', 'M'};
  out.insert(out.end(), magic, magic + 4);
  put_u32(out, 1);  // version

  put_u32(out, static_cast<std::uint32_t>(inventory_.size()));
  for (const auto& a : inventory_) {
    out.push_back(static_cast<std::uint8_t>(a.kind));
    put_str(out, a.category);
  }
  put_u64(out, update_count_);

  struct Triple {
    std::uint64_t feat;
    std::uint32_t action;
    double weight;
  };
  std::vector<Triple> triples;
  for (std::size_t a = 0; a < averaged_.size(); ++a) {
    for (const auto& [feat, w] : averaged_[a]) {
      triples.push_back({feat, static_cast<std::uint32_t>(a), w});
    }
  }
  std::sort(triples.begin(), triples.end(), [](const Triple& x, const Triple& y) {
    if (x.feat != y.feat) return x.feat < y.feat;
    return x.action < y.action;
  });
  put_u64(out, triples.size());
  for (const auto& t : triples) {
    put_u64(out, t.feat);
    put_u32(out, t.action);
    put_f64(out, t.weight);
  }
  return out;
}

PerceptronModel PerceptronModel::deserialize(const std::vector<std::uint8_t>& bytes) {
  Reader r{bytes};
  r.require(4);
  if (!(bytes[0] == 'D' && bytes[1] == 'N' && bytes[2] == 'P' && bytes[3] == 'M')) {
    throw DataError("not a model file");
  }
  r.pos = 4;
  std::uint32_t version = r.u32();
  if (version != 1) throw DataError("unsupported model version " + std::to_string(version));

  PerceptronModel model;
  std::uint32_t n_actions = r.u32();
  for (std::uint32_t i = 0; i < n_actions; ++i) {
    r.require(1);
    std::uint8_t kind = bytes[r.pos];
    r.pos += 1;
    if (kind >= kActionKindCount) throw DataError("bad action kind in model file");
    std::string cat = r.str();
    model.inventory_.push_back(Action{static_cast<ActionKind>(kind), cat});
  }
  model.weights_.resize(model.inventory_.size());
  model.averaged_.resize(model.inventory_.size());
  model.update_count_ = r.u64();

  std::uint64_t n_triples = r.u64();
  for (std::uint64_t i = 0; i < n_triples; ++i) {
    std::uint64_t feat = r.u64();
    std::uint32_t action = r.u32();
    double w = r.f64();
    if (action >= model.averaged_.size()) throw DataError("bad action index in model file");
    model.averaged_[action][feat] = w;
  }
  return model;
}

void PerceptronModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  auto bytes = serialize();
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

PerceptronModel PerceptronModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace dner
