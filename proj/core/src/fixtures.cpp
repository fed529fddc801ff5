#include "dner/fixtures.hpp"

#include <cmath>

#include "dner/error.hpp"
#include "dner/util.hpp"

namespace dner {

namespace {

// Closed 40-word vocabulary. "and" / "or" are reserved structural markers
// and never appear as plain fillers, so every sentence's gold reading is a
// function of its surface form and the shapes stay learnable from token
// features alone.
const std::vector<std::string> kAdrLocs = {"muscle", "joint", "hip", "back"};
const std::vector<std::string> kAdrFeels = {"pain", "fatigue", "stiffness", "ache"};
const std::vector<std::string> kDisLocs = {"skin", "eye", "head"};
const std::vector<std::string> kDisFeels = {"rash", "itch", "swelling"};
const std::vector<std::string> kFillers = {
    "the", "a",    "of",    "then", "very", "really", "quite", "felt",
    "got", "some", "other", "also", "still", "often", "had",   "with",
    "my",  "so",   "one",   "two",  "on",    "in",    "was",   "but"};

struct Pools {
  const std::vector<std::string>* locs;
  const std::vector<std::string>* feels;
  std::string category;
};

Pools pick_pools(Rng& rng) {
  if (rng.below(2) == 0) return {&kAdrLocs, &kAdrFeels, "ADR"};
  return {&kDisLocs, &kDisFeels, "DIS"};
}

const std::string& pick(Rng& rng, const std::vector<std::string>& pool) {
  return pool[rng.below(pool.size())];
}

struct Builder {
  std::vector<std::string> tokens;
  std::vector<Mention> mentions;

  int emit(const std::string& tok) {
    tokens.push_back(tok);
    return static_cast<int>(tokens.size()) - 1;
  }
  void fillers(Rng& rng, std::size_t max_count) {
    std::size_t n = rng.below(max_count + 1);
    for (std::size_t i = 0; i < n; ++i) emit(pick(rng, kFillers));
  }
  // At least one filler; keeps discontinuous components apart.
  void gap(Rng& rng, std::size_t max_extra) {
    emit(pick(rng, kFillers));
    fillers(rng, max_extra);
  }
};

// Disjoint continuous mentions: "loc feel" pairs or single feeling words.
void build_continuous_isolated(Builder& b, Rng& rng) {
  std::size_t count = 1 + rng.below(2);
  for (std::size_t i = 0; i < count; ++i) {
    if (i > 0) b.gap(rng, 1);
    Pools p = pick_pools(rng);
    if (rng.below(2) == 0) {
      int f = b.emit(pick(rng, *p.feels));
      b.mentions.emplace_back(std::vector<int>{f}, p.category);
    } else {
      int l = b.emit(pick(rng, *p.locs));
      int f = b.emit(pick(rng, *p.feels));
      b.mentions.emplace_back(std::vector<int>{l, f}, p.category);
    }
  }
}

// Crossing continuous pair "loc loc feel": {l1,l2} and {l2,f} share l2.
void build_continuous_overlap(Builder& b, Rng& rng) {
  Pools p = pick_pools(rng);
  int l1 = b.emit(pick(rng, *p.locs));
  int l2 = b.emit(pick(rng, *p.locs));
  int f = b.emit(pick(rng, *p.feels));
  b.mentions.emplace_back(std::vector<int>{l1, l2}, p.category);
  b.mentions.emplace_back(std::vector<int>{l2, f}, p.category);
}

// One discontinuous mention, nothing shared: "loc .. feel".
void build_no_overlap(Builder& b, Rng& rng) {
  Pools p = pick_pools(rng);
  int l = b.emit(pick(rng, *p.locs));
  b.gap(rng, 2);
  int f = b.emit(pick(rng, *p.feels));
  b.mentions.emplace_back(std::vector<int>{l, f}, p.category);
}

// Mentions sharing their first component: the coordination "loc feel1 and
// feel2" (optionally "or feel3"), or the spread-out "loc .. feel1 .. feel2".
void build_left_overlap(Builder& b, Rng& rng) {
  Pools p = pick_pools(rng);
  int l = b.emit(pick(rng, *p.locs));
  if (rng.below(2) == 0) {
    int f1 = b.emit(pick(rng, *p.feels));
    b.emit("and");
    int f2 = b.emit(pick(rng, *p.feels));
    b.mentions.emplace_back(std::vector<int>{l, f1}, p.category);
    b.mentions.emplace_back(std::vector<int>{l, f2}, p.category);
    if (rng.below(4) == 0) {
      b.emit("and");
      int f3 = b.emit(pick(rng, *p.feels));
      b.mentions.emplace_back(std::vector<int>{l, f3}, p.category);
    }
  } else {
    b.gap(rng, 1);
    int f1 = b.emit(pick(rng, *p.feels));
    b.emit("and");
    int f2 = b.emit(pick(rng, *p.feels));
    b.mentions.emplace_back(std::vector<int>{l, f1}, p.category);
    b.mentions.emplace_back(std::vector<int>{l, f2}, p.category);
  }
}

// Mentions sharing their last component: "loc1 or loc2 feel" or the
// spread-out "loc1 .. loc2 .. feel".
void build_right_overlap(Builder& b, Rng& rng) {
  Pools p = pick_pools(rng);
  int l1 = b.emit(pick(rng, *p.locs));
  int l2, f;
  if (rng.below(2) == 0) {
    b.emit("or");
    l2 = b.emit(pick(rng, *p.locs));
    f = b.emit(pick(rng, *p.feels));
  } else {
    b.gap(rng, 1);
    l2 = b.emit(pick(rng, *p.locs));
    b.gap(rng, 1);
    f = b.emit(pick(rng, *p.feels));
  }
  b.mentions.emplace_back(std::vector<int>{l1, f}, p.category);
  b.mentions.emplace_back(std::vector<int>{l2, f}, p.category);
}

// Crossing composition "l1 and l2 f1 or f2": four mentions, every
// discontinuous one sharing both of its components.
void build_multi_overlap(Builder& b, Rng& rng) {
  Pools p = pick_pools(rng);
  int l1 = b.emit(pick(rng, *p.locs));
  b.emit("and");
  int l2 = b.emit(pick(rng, *p.locs));
  int f1 = b.emit(pick(rng, *p.feels));
  b.emit("or");
  int f2 = b.emit(pick(rng, *p.feels));
  b.mentions.emplace_back(std::vector<int>{l1, f1}, p.category);
  b.mentions.emplace_back(std::vector<int>{l1, f2}, p.category);
  b.mentions.emplace_back(std::vector<int>{l2, f1}, p.category);
  b.mentions.emplace_back(std::vector<int>{l2, f2}, p.category);
}

bool mention_set_valid(const std::vector<Mention>& ms) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      if (mention_equal(ms[i], ms[j])) return false;
    }
  }
  return true;
}

}  // namespace

Corpus generate_fixtures(const FixtureSpec& spec) {
  double total = 0;
  for (const auto& [cat, w] : spec.proportions) {
    if (w < 0) throw DataError("negative proportion for " + std::string(to_string(cat)));
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw DataError("fixture proportions must sum to 1");
  }
  if (spec.sentences == 0) throw DataError("fixture spec requests zero sentences");

  Rng rng(spec.seed);
  Corpus corpus;
  corpus.reserve(spec.sentences);
  while (corpus.size() < spec.sentences) {
    double draw = rng.real();
    OverlapCategory target = spec.proportions.begin()->first;
    double acc = 0;
    for (const auto& [cat, w] : spec.proportions) {
      acc += w;
      if (draw < acc) { target = cat; break; }
      target = cat;
    }

    Builder b;
    b.fillers(rng, 2);
    switch (target) {
      case OverlapCategory::ContinuousIsolated: build_continuous_isolated(b, rng); break;
      case OverlapCategory::ContinuousOverlap: build_continuous_overlap(b, rng); break;
      case OverlapCategory::NoOverlap: build_no_overlap(b, rng); break;
      case OverlapCategory::LeftOverlap: build_left_overlap(b, rng); break;
      case OverlapCategory::RightOverlap: build_right_overlap(b, rng); break;
      case OverlapCategory::MultiOverlap: build_multi_overlap(b, rng); break;
    }
    b.fillers(rng, 2);

    if (!mention_set_valid(b.mentions)) continue;  // rare same-word collision
    Sentence sentence(b.tokens, spec.doc_id, corpus.size());
    corpus.emplace_back(std::move(sentence), std::move(b.mentions));
  }
  return corpus;
}

Corpus generate_category(OverlapCategory category, std::size_t count, std::uint64_t seed) {
  FixtureSpec spec;
  spec.proportions[category] = 1.0;
  spec.sentences = count;
  spec.seed = seed;
  return generate_fixtures(spec);
}

}  // namespace dner
