#include "dner/augment.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "dner/error.hpp"
#include "dner/util.hpp"

namespace dner {

AugmentMethod parse_method(const std::string& name) {
  if (name == "lwtr") return AugmentMethod::LwTR;
  if (name == "sr") return AugmentMethod::SR;
  if (name == "mr") return AugmentMethod::MR;
  if (name == "sis") return AugmentMethod::SiS;
  if (name == "all") return AugmentMethod::All;
  throw DataError("unknown augmentation method '" + name + "'");
}

const char* to_string(AugmentMethod m) {
  switch (m) {
    case AugmentMethod::LwTR: return "lwtr";
    case AugmentMethod::SR: return "sr";
    case AugmentMethod::MR: return "mr";
    case AugmentMethod::SiS: return "sis";
    case AugmentMethod::All: return "all";
  }
  return "?";
}

std::set<std::string> default_stopwords() {
  static const char* kWords[] = {
      "a", "an", "the", "and", "or", "but", "of", "in", "on", "at", "to",
      "for", "with", "by", "from", "as", "is", "are", "was", "were", "be",
      "been", "it", "its", "this", "that", "these", "those", "i", "he",
      "she", "they", "we", "you", "my", "his", "her", "their", "our", "not",
      "no", "so", "if", "then", "than", "too", "very", "can", "will", "just",
      "do", "did", "does", "have", "has", "had", ".", ",", ";", ":", "!",
      "?", "-", "/", "(", ")"};
  return {std::begin(kWords), std::end(kWords)};
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file '" + path + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(to_lower(line));
  }
  return words;
}

namespace {

// Per-token view of a sentence: tag string and the covering mention when the
// token sits in exactly one continuous mention. Tokens under overlapping or
// discontinuous annotation are not replaceable at the token level.
struct TokenView {
  std::string tag = "O";  // "O", "B-cat", "I-cat"
  int mention = -1;       // index into as.mentions, when unambiguous
  bool complex_cover = false;
};

std::vector<TokenView> token_views(const AnnotatedSentence& as) {
  std::vector<TokenView> views(as.sentence.size());
  std::vector<int> cover(as.sentence.size(), 0);
  for (const auto& m : as.mentions) {
    for (int p : m.positions()) ++cover[p];
  }
  for (std::size_t mi = 0; mi < as.mentions.size(); ++mi) {
    const Mention& m = as.mentions[mi];
    for (int p : m.positions()) {
      TokenView& v = views[static_cast<std::size_t>(p)];
      if (cover[p] > 1 || m.discontinuous()) {
        v.complex_cover = true;
        v.mention = -1;
        v.tag = "O";
        continue;
      }
      v.mention = static_cast<int>(mi);
      v.tag = (p == m.first() ? "B-" : "I-") + m.category();
    }
  }
  return views;
}

bool is_stopword(const std::set<std::string>& stopwords, const std::string& token) {
  return stopwords.count(to_lower(token)) > 0;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

LabelwiseDistribution LabelwiseDistribution::build(const Corpus& corpus) {
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  for (const auto& as : corpus) {
    auto views = token_views(as);
    for (std::size_t i = 0; i < as.sentence.size(); ++i) {
      if (views[i].complex_cover) continue;
      ++counts[views[i].tag][as.sentence.tokens[i]];
    }
  }
  LabelwiseDistribution dist;
  for (const auto& [tag, tokens] : counts) {
    TagPool pool;
    std::uint64_t total = 0;
    for (const auto& [tok, c] : tokens) {
      total += c;
      pool.tokens.push_back(tok);
      pool.cumulative.push_back(total);
    }
    dist.pools_[tag] = std::move(pool);
  }
  return dist;
}

bool LabelwiseDistribution::has_tag(const std::string& tag) const {
  return pools_.count(tag) > 0;
}

const std::string& LabelwiseDistribution::sample(const std::string& tag, Rng& rng) const {
  const TagPool& pool = pools_.at(tag);
  std::uint64_t draw = rng.below(pool.cumulative.back());
  auto it = std::upper_bound(pool.cumulative.begin(), pool.cumulative.end(), draw);
  return pool.tokens[static_cast<std::size_t>(it - pool.cumulative.begin())];
}

SynonymLexicon SynonymLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon '" + path + "'");
  std::vector<std::pair<std::string, std::vector<std::string>>> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(path, lineno, "expected `token<TAB>synonym[|synonym...]`");
    }
    std::string token = to_lower(line.substr(0, tab));
    std::vector<std::string> syns;
    std::istringstream ss(line.substr(tab + 1));
    std::string syn;
    while (std::getline(ss, syn, '|')) {
      if (!syn.empty()) syns.push_back(syn);
    }
    entries.emplace_back(std::move(token), std::move(syns));
  }
  return from_pairs(entries);
}

SynonymLexicon SynonymLexicon::from_pairs(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& entries) {
  SynonymLexicon lex;
  for (const auto& [token, syns] : entries) {
    std::vector<std::string> kept;
    for (const auto& s : syns) {
      if (to_lower(s) != token) kept.push_back(s);  // a token must not map to itself only
    }
    if (!kept.empty()) {
      auto& slot = lex.entries_[to_lower(token)];
      slot.insert(slot.end(), kept.begin(), kept.end());
    }
  }
  return lex;
}

const std::vector<std::string>* SynonymLexicon::lookup(const std::string& token) const {
  auto it = entries_.find(to_lower(token));
  return it == entries_.end() ? nullptr : &it->second;
}

AnnotatedSentence lwtr(const AnnotatedSentence& as, const LabelwiseDistribution& dist,
                       const AugmentConfig& cfg, AugmentStats* stats) {
  Rng rng(cfg.seed);
  auto views = token_views(as);
  std::vector<std::string> tokens = as.sentence.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_stopword(cfg.stopwords, tokens[i])) continue;
    if (!rng.bernoulli(cfg.p)) continue;
    if (views[i].complex_cover) {
      if (stats) ++stats->skipped_complex;
      continue;
    }
    if (!dist.has_tag(views[i].tag)) {
      if (stats) ++stats->skipped_unknown_tag;
      continue;
    }
    tokens[i] = dist.sample(views[i].tag, rng);
  }
  Sentence sentence(tokens, as.sentence.doc_id, as.sentence.index);
  return AnnotatedSentence(std::move(sentence), as.mentions);
}

AnnotatedSentence synonym_replace(const AnnotatedSentence& as, const SynonymLexicon& lex,
                                  const AugmentConfig& cfg, AugmentStats* stats) {
  Rng rng(cfg.seed);
  auto views = token_views(as);

  // Planned replacement per position (empty = keep).
  std::vector<std::vector<std::string>> plan(as.sentence.size());
  for (std::size_t i = 0; i < as.sentence.size(); ++i) {
    if (is_stopword(cfg.stopwords, as.sentence.tokens[i])) continue;
    if (!rng.bernoulli(cfg.p)) continue;
    if (views[i].complex_cover) {
      if (stats) ++stats->skipped_complex;
      continue;
    }
    const std::vector<std::string>* syns = lex.lookup(as.sentence.tokens[i]);
    if (!syns || syns->empty()) {
      if (stats) ++stats->skipped_no_synonym;
      continue;
    }
    plan[i] = split_words((*syns)[rng.below(syns->size())]);
  }

  std::vector<std::string> tokens;
  std::vector<int> new_pos(as.sentence.size());  // old position -> new position
  std::vector<int> extra(as.sentence.size(), 0); // extra tokens inserted at position
  for (std::size_t i = 0; i < as.sentence.size(); ++i) {
    new_pos[i] = static_cast<int>(tokens.size());
    if (plan[i].empty()) {
      tokens.push_back(as.sentence.tokens[i]);
    } else {
      for (const auto& w : plan[i]) tokens.push_back(w);
      extra[i] = static_cast<int>(plan[i].size()) - 1;
    }
  }

  // A replaced token inside a mention extends that mention; every other
  // mention shifts with the splice.
  std::vector<Mention> mentions;
  for (const auto& m : as.mentions) {
    std::vector<int> positions;
    for (int p : m.positions()) {
      positions.push_back(new_pos[static_cast<std::size_t>(p)]);
      for (int k = 1; k <= extra[static_cast<std::size_t>(p)]; ++k) {
        positions.push_back(new_pos[static_cast<std::size_t>(p)] + k);
      }
    }
    mentions.emplace_back(std::move(positions), m.category());
  }
  Sentence sentence(tokens, as.sentence.doc_id, as.sentence.index);
  return AnnotatedSentence(std::move(sentence), std::move(mentions));
}

MentionPool MentionPool::build(const Corpus& corpus) {
  MentionPool pool;
  for (const auto& as : corpus) {
    for (const auto& m : as.mentions) {
      if (m.discontinuous()) continue;
      std::vector<std::string> words;
      for (int p : m.positions()) words.push_back(as.sentence.tokens[static_cast<std::size_t>(p)]);
      pool.pools_[m.category()].push_back(std::move(words));
    }
  }
  return pool;
}

const std::vector<std::vector<std::string>>* MentionPool::candidates(
    const std::string& category) const {
  auto it = pools_.find(category);
  return it == pools_.end() ? nullptr : &it->second;
}

AnnotatedSentence mention_replace(const AnnotatedSentence& as, const MentionPool& pool,
                                  const AugmentConfig& cfg, AugmentStats* stats) {
  Rng rng(cfg.seed);

  // Replacement plan per mention, decided in mention order. Mentions that
  // share positions or whose covering span touches another mention are left
  // alone; a non-overlapping discontinuous mention has its whole covering
  // region replaced, which makes the replacement continuous.
  std::vector<const std::vector<std::string>*> plan(as.mentions.size(), nullptr);
  for (std::size_t mi = 0; mi < as.mentions.size(); ++mi) {
    const Mention& m = as.mentions[mi];
    if (!rng.bernoulli(cfg.p)) continue;
    bool blocked = false;
    for (std::size_t mj = 0; mj < as.mentions.size() && !blocked; ++mj) {
      if (mi == mj) continue;
      const Mention& o = as.mentions[mj];
      if (o.last() >= m.first() && o.first() <= m.last()) blocked = true;
    }
    if (blocked) {
      if (stats) ++stats->skipped_complex;
      continue;
    }
    const auto* candidates = pool.candidates(m.category());
    if (!candidates || candidates->empty()) {
      if (stats) ++stats->skipped_empty_pool;
      continue;
    }
    plan[mi] = &(*candidates)[rng.below(candidates->size())];
  }

  // Rebuild tokens left to right, splicing planned replacements over each
  // mention's covering region.
  std::vector<int> owner(as.sentence.size(), -1);
  for (std::size_t mi = 0; mi < as.mentions.size(); ++mi) {
    if (plan[mi]) {
      for (int p = as.mentions[mi].first(); p <= as.mentions[mi].last(); ++p) {
        owner[static_cast<std::size_t>(p)] = static_cast<int>(mi);
      }
    }
  }

  std::vector<std::string> tokens;
  std::vector<int> shift_pos(as.sentence.size(), -1);
  std::vector<std::pair<int, int>> replaced_range(as.mentions.size(), {-1, -1});
  for (std::size_t i = 0; i < as.sentence.size();) {
    if (owner[i] >= 0) {
      int mi = owner[i];
      const auto& words = *plan[static_cast<std::size_t>(mi)];
      replaced_range[static_cast<std::size_t>(mi)] = {
          static_cast<int>(tokens.size()),
          static_cast<int>(tokens.size() + words.size()) - 1};
      for (const auto& w : words) tokens.push_back(w);
      i = static_cast<std::size_t>(as.mentions[static_cast<std::size_t>(mi)].last()) + 1;
    } else {
      shift_pos[i] = static_cast<int>(tokens.size());
      tokens.push_back(as.sentence.tokens[i]);
      ++i;
    }
  }

  std::vector<Mention> mentions;
  for (std::size_t mi = 0; mi < as.mentions.size(); ++mi) {
    if (plan[mi]) {
      auto [first, last] = replaced_range[mi];
      std::vector<int> positions;
      for (int p = first; p <= last; ++p) positions.push_back(p);
      mentions.emplace_back(std::move(positions), as.mentions[mi].category());
    } else {
      std::vector<int> positions;
      for (int p : as.mentions[mi].positions()) positions.push_back(shift_pos[static_cast<std::size_t>(p)]);
      mentions.emplace_back(std::move(positions), as.mentions[mi].category());
    }
  }
  Sentence sentence(tokens, as.sentence.doc_id, as.sentence.index);
  return AnnotatedSentence(std::move(sentence), std::move(mentions));
}

AnnotatedSentence shuffle_within_segments(const AnnotatedSentence& as,
                                          const AugmentConfig& cfg, AugmentStats* stats) {
  (void)stats;
  std::vector<int> cover(as.sentence.size(), 0);
  for (const auto& m : as.mentions) {
    if (m.discontinuous()) {
      throw ContractError("shuffle_within_segments requires continuous mentions; "
                          "apply flat_merge first");
    }
    for (int p : m.positions()) {
      if (++cover[p] > 1) {
        throw ContractError("shuffle_within_segments requires non-overlapping mentions; "
                            "apply flat_merge first");
      }
    }
  }

  // Segment boundaries: each mention, and each maximal unannotated stretch.
  std::vector<std::pair<int, int>> segments;
  std::vector<const Mention*> by_start(as.sentence.size(), nullptr);
  for (const auto& m : as.mentions) by_start[static_cast<std::size_t>(m.first())] = &m;
  for (std::size_t i = 0; i < as.sentence.size();) {
    if (by_start[i]) {
      segments.push_back({static_cast<int>(i), by_start[i]->last()});
      i = static_cast<std::size_t>(by_start[i]->last()) + 1;
    } else {
      std::size_t j = i;
      while (j < as.sentence.size() && cover[j] == 0) ++j;
      segments.push_back({static_cast<int>(i), static_cast<int>(j) - 1});
      i = j;
    }
  }

  Rng rng(cfg.seed);
  std::vector<std::string> tokens = as.sentence.tokens;
  for (auto [first, last] : segments) {
    if (!rng.bernoulli(cfg.p)) continue;
    std::vector<std::string> segment(tokens.begin() + first, tokens.begin() + last + 1);
    rng.shuffle(segment);
    std::copy(segment.begin(), segment.end(), tokens.begin() + first);
  }
  Sentence sentence(tokens, as.sentence.doc_id, as.sentence.index);
  return AnnotatedSentence(std::move(sentence), as.mentions);
}

namespace {

std::uint64_t derive_seed(std::uint64_t base, std::size_t instance, std::size_t round,
                          std::size_t transform) {
  std::uint64_t h = splitmix64(base ^ splitmix64(instance));
  h = splitmix64(h ^ round);
  return splitmix64(h ^ (transform << 8));
}

AnnotatedSentence run_transform(AugmentMethod method, const AnnotatedSentence& as,
                                const AugmentConfig& cfg,
                                const LabelwiseDistribution& dist, const MentionPool& pool,
                                AugmentStats* stats) {
  switch (method) {
    case AugmentMethod::LwTR: return lwtr(as, dist, cfg, stats);
    case AugmentMethod::SR:
      if (!cfg.lexicon) throw ContractError("synonym replacement needs a lexicon");
      return synonym_replace(as, *cfg.lexicon, cfg, stats);
    case AugmentMethod::MR: return mention_replace(as, pool, cfg, stats);
    case AugmentMethod::SiS: return shuffle_within_segments(as, cfg, stats);
    case AugmentMethod::All: break;
  }
  throw ContractError("not a single transform");
}

}  // namespace

Corpus augment_corpus(const Corpus& corpus, const AugmentConfig& cfg, AugmentStats* stats) {
  if (cfg.per_instance == 0) throw ContractError("per_instance must be at least 1");
  if (cfg.p < 0.0 || cfg.p > 1.0) throw ContractError("p must be in [0, 1]");

  LabelwiseDistribution dist =
      cfg.dist ? *cfg.dist : LabelwiseDistribution::build(corpus);
  MentionPool pool = MentionPool::build(corpus);

  static const AugmentMethod kAll[] = {AugmentMethod::LwTR, AugmentMethod::SR,
                                       AugmentMethod::MR, AugmentMethod::SiS};
  const std::size_t per_original =
      cfg.per_instance * (cfg.method == AugmentMethod::All ? 4 : 1);

  // Originals first, then augmented instances in (original, round, transform)
  // order. Instances derive independent seeds, so workers fill fixed slots
  // and the output does not depend on the thread count.
  Corpus out(corpus.size() + corpus.size() * per_original);
  std::copy(corpus.begin(), corpus.end(), out.begin());

  auto produce = [&](std::size_t i, AugmentStats* worker_stats) {
    std::size_t slot = corpus.size() + i * per_original;
    for (std::size_t r = 0; r < cfg.per_instance; ++r) {
      if (cfg.method == AugmentMethod::All) {
        for (std::size_t t = 0; t < 4; ++t) {
          AugmentConfig derived = cfg;
          derived.seed = derive_seed(cfg.seed, i, r, t);
          out[slot++] = run_transform(kAll[t], corpus[i], derived, dist, pool, worker_stats);
        }
      } else {
        AugmentConfig derived = cfg;
        derived.seed = derive_seed(cfg.seed, i, r, 0);
        out[slot++] = run_transform(cfg.method, corpus[i], derived, dist, pool, worker_stats);
      }
    }
  };

  std::size_t workers = std::min(cfg.jobs == 0 ? std::size_t{1} : cfg.jobs, corpus.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) produce(i, stats);
    return out;
  }
  std::vector<AugmentStats> worker_stats(workers);
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < corpus.size(); i += workers) {
          produce(i, &worker_stats[w]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  if (stats) {
    for (const auto& ws : worker_stats) {
      stats->skipped_unknown_tag += ws.skipped_unknown_tag;
      stats->skipped_no_synonym += ws.skipped_no_synonym;
      stats->skipped_empty_pool += ws.skipped_empty_pool;
      stats->skipped_complex += ws.skipped_complex;
    }
  }
  return out;
}

}  // namespace dner
