#ifndef DNER_SCORER_HPP
#define DNER_SCORER_HPP

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "dner/corpus.hpp"
#include "dner/transition.hpp"

namespace dner {

// Sparse feature bag: 64-bit interned feature id -> occurrence count.
// Hash collisions are tolerated. No zero entries are stored.
class FeatureVector {
 public:
  void add(const std::string& feature) { ++counts_[fnv_id(feature)]; }
  const std::unordered_map<std::uint64_t, std::uint32_t>& counts() const { return counts_; }
  std::size_t size() const { return counts_.size(); }

  static std::uint64_t fnv_id(const std::string& feature);

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> counts_;
};

// Discrete features describing a parser state: tokens of the top three stack
// spans (with EMPTY placeholders), the first three buffer tokens, the
// previous action kind, whether the top span has a gap, and stack-buffer
// token conjunctions that expose discontinuous dependencies. Lowercase and
// character-shape variants accompany the raw tokens.
FeatureVector extract_features(const ParserState& state, const Sentence& sentence);

// Averaged perceptron over (feature, action) weights. The action inventory
// (one COMPLETE per known category, plus the structural actions) is fixed at
// training time. The averaged weight of a feature is the mean of its weight
// across all training decisions, so the stable late weights dominate.
class PerceptronModel : public ActionScorer {
 public:
  PerceptronModel() = default;
  explicit PerceptronModel(std::vector<std::string> categories);

  const std::vector<Action>& inventory() const { return inventory_; }
  std::vector<std::string> categories() const override;

  // Sparse dot product of `fv` against the averaged weights of `action`.
  // The action must be in the inventory.
  double score(const FeatureVector& fv, const Action& action) const;

  void score(const ParserState& state, const Sentence& sentence,
             std::span<const Action> candidates,
             std::span<double> scores) const override;

  // Little-endian fixed-width binary with a versioned header; identical
  // models serialize to identical bytes.
  std::vector<std::uint8_t> serialize() const;
  static PerceptronModel deserialize(const std::vector<std::uint8_t>& bytes);
  void save(const std::string& path) const;
  static PerceptronModel load(const std::string& path);

 private:
  friend struct TrainResult train(const Corpus& corpus, std::size_t epochs,
                                  std::uint64_t seed);

  struct Cell {
    double weight = 0.0;
    double accumulated = 0.0;
    std::uint64_t last_update = 0;
  };

  int action_index(const Action& a) const;
  void bump(int action, std::uint64_t feature, double delta);
  void finalize_average();

  std::vector<Action> inventory_;
  // weights_[action][feature]
  std::vector<std::unordered_map<std::uint64_t, Cell>> weights_;
  std::vector<std::unordered_map<std::uint64_t, double>> averaged_;
  std::uint64_t update_count_ = 0;
};

struct TrainResult {
  PerceptronModel model;
  std::vector<std::size_t> epoch_updates;  // perceptron mistakes per epoch
};

// Trains on gold action sequences derived by the oracle. Sentences are
// shuffled each epoch with the seeded RNG; at each oracle state the argmax
// over valid actions is compared against the oracle action and a standard
// perceptron update is applied on mismatch. Training always follows the
// oracle state sequence. Deterministic given (corpus order, seed).
TrainResult train(const Corpus& corpus, std::size_t epochs, std::uint64_t seed);

}  // namespace dner

#endif
