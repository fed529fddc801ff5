#include "dner/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dner/error.hpp"
#include "dner/util.hpp"

namespace dner {

TextCorpus read_text_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  TextCorpus corpus;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!is_valid_utf8(line)) throw DataError("'" + path + "' is not valid UTF-8");
    std::vector<std::string> tokens;
    std::istringstream ts(line);
    std::string tok;
    while (ts >> tok) tokens.push_back(tok);
    if (!tokens.empty()) corpus.push_back(std::move(tokens));
  }
  return corpus;
}

VocabProfile VocabProfile::build(const TextCorpus& corpus,
                                 const std::set<std::string>& stopwords) {
  VocabProfile profile;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence) {
      ++profile.token_count;
      std::string lc = to_lower(token);
      if (lc.size() < 2) continue;
      if (stopwords.count(lc)) continue;
      profile.types.insert(std::move(lc));
    }
  }
  return profile;
}

namespace {

std::size_t intersection_size(const std::set<std::string>& a, const std::set<std::string>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const auto& x : small) n += large.count(x);
  return n;
}

}  // namespace

double tvc(const VocabProfile& source, const VocabProfile& target) {
  if (target.types.empty()) throw ContractError("target vocabulary is empty");
  return static_cast<double>(intersection_size(source.types, target.types)) /
         static_cast<double>(target.types.size());
}

double jsv(const VocabProfile& source, const VocabProfile& target) {
  std::size_t inter = intersection_size(source.types, target.types);
  std::size_t uni = source.types.size() + target.types.size() - inter;
  if (uni == 0) throw ContractError("both vocabularies are empty");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

constexpr const char* kBos = "<s>";
constexpr const char* kEos = "</s>";
constexpr const char* kUnk = "<unk>";

constexpr std::uint64_t pack2(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 21) |
         static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
}

constexpr std::uint64_t pack3(int a, int b, int c) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 42) |
         pack2(b, c);
}

double estimate_discount(const std::unordered_map<std::uint64_t, std::uint32_t>& counts) {
  std::size_t n1 = 0, n2 = 0;
  for (const auto& [k, c] : counts) {
    if (c == 1) ++n1;
    if (c == 2) ++n2;
  }
  if (n1 == 0 || n1 + 2 * n2 == 0) return 0.5;  // degenerate count-of-counts
  return static_cast<double>(n1) / static_cast<double>(n1 + 2 * n2);
}

double estimate_discount_u32(const std::unordered_map<std::uint32_t, std::uint32_t>& counts) {
  std::size_t n1 = 0, n2 = 0;
  for (const auto& [k, c] : counts) {
    if (c == 1) ++n1;
    if (c == 2) ++n2;
  }
  if (n1 == 0 || n1 + 2 * n2 == 0) return 0.5;  // degenerate count-of-counts
  return static_cast<double>(n1) / static_cast<double>(n1 + 2 * n2);
}

}  // namespace

int NgramModel::word_id(const std::string& w) const {
  auto it = word_to_id_.find(w);
  return it == word_to_id_.end() ? unk_ : it->second;
}

NgramModel NgramModel::train(const TextCorpus& corpus) {
  if (corpus.empty()) throw ContractError("training corpus is empty");

  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& s : corpus) {
    for (const auto& t : s) ++freq[t];
  }

  NgramModel m;
  auto intern = [&m](const std::string& w) {
    auto it = m.word_to_id_.find(w);
    if (it != m.word_to_id_.end()) return it->second;
    int id = static_cast<int>(m.id_to_word_.size());
    m.word_to_id_[w] = id;
    m.id_to_word_.push_back(w);
    return id;
  };
  m.bos_ = intern(kBos);
  m.eos_ = intern(kEos);
  m.unk_ = intern(kUnk);
  // Singleton types become the unknown token.
  std::vector<std::string> kept;
  for (const auto& [w, c] : freq) {
    if (c > 1) kept.push_back(w);
  }
  std::sort(kept.begin(), kept.end());
  for (const auto& w : kept) intern(w);
  if (m.id_to_word_.size() >= (1u << 21)) throw SizeLimitError("vocabulary too large");

  std::unordered_map<std::uint64_t, std::uint32_t> raw_bigram;
  for (const auto& s : corpus) {
    std::vector<int> ids = {m.bos_, m.bos_};
    for (const auto& t : s) {
      auto it = m.word_to_id_.find(t);
      ids.push_back(it == m.word_to_id_.end() ? m.unk_ : it->second);
    }
    ids.push_back(m.eos_);
    for (std::size_t i = 2; i < ids.size(); ++i) {
      ++m.trigram_[pack3(ids[i - 2], ids[i - 1], ids[i])];
    }
    for (std::size_t i = 1; i < ids.size(); ++i) {
      if (ids[i] != m.bos_) ++raw_bigram[pack2(ids[i - 1], ids[i])];
    }
  }

  for (const auto& [key, c] : m.trigram_) {
    int u = static_cast<int>(key >> 42);
    int v = static_cast<int>((key >> 21) & 0x1FFFFF);
    int w = static_cast<int>(key & 0x1FFFFF);
    m.trigram_ctx_total_[pack2(u, v)] += c;
    ++m.trigram_ctx_types_[pack2(u, v)];
    // Left-extension type counts feed the bigram level.
    ++m.bigram_cont_[pack2(v, w)];
  }
  for (const auto& [vw, c] : m.bigram_cont_) {
    std::uint32_t v = static_cast<std::uint32_t>(vw >> 21);
    m.bigram_ctx_total_[v] += c;
    ++m.bigram_ctx_types_[v];
  }
  for (const auto& [key, c] : raw_bigram) {
    int w = static_cast<int>(key & 0x1FFFFF);
    ++m.unigram_cont_[static_cast<std::uint32_t>(w)];
  }
  for (const auto& [w, c] : m.unigram_cont_) {
    m.unigram_total_ += c;
    m.unigram_types_ += 1;
  }

  m.discounts_[2] = estimate_discount(m.trigram_);
  m.discounts_[1] = estimate_discount(m.bigram_cont_);
  m.discounts_[0] = estimate_discount_u32(m.unigram_cont_);
  return m;
}

std::vector<std::string> NgramModel::prediction_vocabulary() const {
  std::vector<std::string> vocab;
  for (std::size_t i = 0; i < id_to_word_.size(); ++i) {
    if (static_cast<int>(i) != bos_) vocab.push_back(id_to_word_[i]);
  }
  return vocab;
}

double NgramModel::prob_unigram(int w) const {
  double v = static_cast<double>(vocabulary_size());  // prediction vocabulary
  if (unigram_total_ == 0) return 1.0 / v;
  double d = discounts_[0];
  auto it = unigram_cont_.find(static_cast<std::uint32_t>(w));
  double c = it == unigram_cont_.end() ? 0.0 : it->second;
  double lambda = d * unigram_types_ / unigram_total_;
  return std::max(c - d, 0.0) / unigram_total_ + lambda / v;
}

double NgramModel::prob_bigram(int w, int v) const {
  auto total_it = bigram_ctx_total_.find(static_cast<std::uint32_t>(v));
  if (total_it == bigram_ctx_total_.end()) return prob_unigram(w);
  double total = total_it->second;
  double d = discounts_[1];
  auto it = bigram_cont_.find(pack2(v, w));
  double c = it == bigram_cont_.end() ? 0.0 : it->second;
  double types = bigram_ctx_types_.at(static_cast<std::uint32_t>(v));
  double lambda = d * types / total;
  return std::max(c - d, 0.0) / total + lambda * prob_unigram(w);
}

double NgramModel::prob_trigram(int w, int u, int v) const {
  auto total_it = trigram_ctx_total_.find(pack2(u, v));
  if (total_it == trigram_ctx_total_.end()) return prob_bigram(w, v);
  double total = total_it->second;
  double d = discounts_[2];
  auto it = trigram_.find(pack3(u, v, w));
  double c = it == trigram_.end() ? 0.0 : it->second;
  double types = trigram_ctx_types_.at(pack2(u, v));
  double lambda = d * types / total;
  return std::max(c - d, 0.0) / total + lambda * prob_bigram(w, v);
}

double NgramModel::probability(const std::string& w, const std::string& u,
                               const std::string& v) const {
  return prob_trigram(word_id(w), word_id(u), word_id(v));
}

double NgramModel::sentence_logprob(const std::vector<std::string>& sentence) const {
  std::vector<int> ids = {bos_, bos_};
  for (const auto& t : sentence) ids.push_back(word_id(t));
  ids.push_back(eos_);
  double logprob = 0.0;
  for (std::size_t i = 2; i < ids.size(); ++i) {
    double p = prob_trigram(ids[i], ids[i - 2], ids[i - 1]);
    if (!(p > 0.0)) throw Error("smoothing failed: zero probability event");
    logprob += std::log(p);
  }
  return logprob;
}

double perplexity(const NgramModel& model, const TextCorpus& target, PplMode mode) {
  if (target.empty()) throw ContractError("target corpus is empty");
  double sum = 0.0;
  for (const auto& sentence : target) {
    double logprob = model.sentence_logprob(sentence);
    double n = static_cast<double>(sentence.size()) + 1;  // end marker counted
    sum += std::exp(-logprob / n);
  }
  if (mode == PplMode::Mean) return sum / static_cast<double>(target.size());
  return sum;
}

TermDistribution TermDistribution::build(const TextCorpus& corpus) {
  TermDistribution dist;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;
  for (const auto& s : corpus) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t order = 1; order <= 3 && i + order <= s.size(); ++order) {
        std::string key = s[i];
        for (std::size_t k = 1; k < order; ++k) {
          key += '\x1f';
          key += s[i + k];
        }
        ++counts[key];
        ++total;
      }
    }
  }
  for (const auto& [term, c] : counts) {
    dist.probs[term] = static_cast<double>(c) / static_cast<double>(total);
  }
  return dist;
}

double jsd(const TermDistribution& s, const TermDistribution& t) {
  // KL terms against the even mixture never divide by zero, so no smoothing
  // is needed and disjoint supports reach the full 1-bit divergence.
  double kl_s = 0.0, kl_t = 0.0;
  auto half_kl = [](const std::map<std::string, double>& p,
                    const std::map<std::string, double>& q) {
    double kl = 0.0;
    for (const auto& [term, ps] : p) {
      if (ps <= 0.0) continue;
      auto it = q.find(term);
      double m = (ps + (it == q.end() ? 0.0 : it->second)) / 2.0;
      kl += ps * std::log2(ps / m);
    }
    return kl;
  };
  kl_s = half_kl(s.probs, t.probs);
  kl_t = half_kl(t.probs, s.probs);
  double value = 0.5 * kl_s + 0.5 * kl_t;
  if (value < 0.0) value = 0.0;
  if (value > 1.0) value = 1.0;
  return value * 100.0;
}

double spearman_scores(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ContractError("score lists differ in length");
  if (a.size() < 2) throw ContractError("need at least two items");

  auto ranks = [](const std::vector<double>& xs) {
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
    std::vector<double> r(xs.size());
    std::size_t i = 0;
    while (i < order.size()) {
      std::size_t j = i;
      while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;  // average ranks on ties
      i = j + 1;
    }
    return r;
  };

  std::vector<double> ra = ranks(a), rb = ranks(b);
  double mean_a = std::accumulate(ra.begin(), ra.end(), 0.0) / static_cast<double>(ra.size());
  double mean_b = std::accumulate(rb.begin(), rb.end(), 0.0) / static_cast<double>(rb.size());
  double cov = 0, var_a = 0, var_b = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    double da = ra[i] - mean_a, db = rb[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0 || var_b == 0) throw ContractError("constant ranking has no correlation");
  return cov / std::sqrt(var_a * var_b);
}

double spearman(const std::vector<std::string>& order_a,
                const std::vector<std::string>& order_b) {
  if (order_a.size() != order_b.size()) throw ContractError("rankings differ in length");
  if (order_a.size() < 2) throw ContractError("need at least two items");
  std::map<std::string, double> pos_b;
  for (std::size_t i = 0; i < order_b.size(); ++i) {
    if (!pos_b.emplace(order_b[i], static_cast<double>(i + 1)).second) {
      throw ContractError("duplicate item '" + order_b[i] + "' in ranking");
    }
  }
  std::vector<double> a, b;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < order_a.size(); ++i) {
    auto it = pos_b.find(order_a[i]);
    if (it == pos_b.end()) throw ContractError("item sets differ: '" + order_a[i] + "'");
    if (!seen.insert(order_a[i]).second) {
      throw ContractError("duplicate item '" + order_a[i] + "' in ranking");
    }
    a.push_back(static_cast<double>(i + 1));
    b.push_back(it->second);
  }
  return spearman_scores(a, b);
}

SimilarityReport rank_sources(const std::vector<NamedTextCorpus>& sources,
                              const TextCorpus& target,
                              const std::set<std::string>& stopwords, PplMode mode) {
  if (sources.empty()) throw ContractError("at least one source is required");

  SimilarityReport report;
  report.ppl_mode = mode;
  VocabProfile target_profile = VocabProfile::build(target, stopwords);
  TermDistribution target_dist = TermDistribution::build(target);

  for (const auto& src : sources) {
    VocabProfile profile = VocabProfile::build(src.corpus, stopwords);
    NgramModel model = NgramModel::train(src.corpus);
    SourceScores s;
    s.name = src.name;
    s.tvc = tvc(profile, target_profile);
    s.jsv = jsv(profile, target_profile);
    s.ppl = perplexity(model, target, mode);
    s.jsd = jsd(TermDistribution::build(src.corpus), target_dist);
    report.scores.push_back(s);
  }

  auto rank_by = [&](auto key, bool ascending) {
    std::vector<std::size_t> order(report.scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      double a = key(report.scores[i]), b = key(report.scores[j]);
      if (a != b) return ascending ? a < b : a > b;
      return report.scores[i].name < report.scores[j].name;
    });
    std::vector<std::string> names;
    for (std::size_t i : order) names.push_back(report.scores[i].name);
    return names;
  };
  report.rankings["tvc"] = rank_by([](const SourceScores& s) { return s.tvc; }, false);
  report.rankings["jsv"] = rank_by([](const SourceScores& s) { return s.jsv; }, false);
  report.rankings["ppl"] = rank_by([](const SourceScores& s) { return s.ppl; }, true);
  report.rankings["jsd"] = rank_by([](const SourceScores& s) { return s.jsd; }, true);

  std::map<std::string, double> mean_rank;
  for (const auto& [measure, names] : report.rankings) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      mean_rank[names[i]] += static_cast<double>(i + 1) / 4.0;
    }
  }
  std::vector<std::pair<double, std::string>> by_rank;
  for (const auto& [name, r] : mean_rank) by_rank.push_back({r, name});
  std::sort(by_rank.begin(), by_rank.end());
  for (const auto& [r, name] : by_rank) report.consensus.push_back(name);
  return report;
}

std::string SimilarityReport::to_text() const {
  std::ostringstream out;
  out << "# perplexity mode: " << (ppl_mode == PplMode::Mean ? "mean" : "summed")
      << " (summed follows the corpus-size-dependent definition)\n";
  out << "# content words: stopword-filtered tokens of length >= 2; feed "
         "pre-tagged text to restrict by part of speech\n";
  char buf[160];
  std::size_t width = 6;
  for (const auto& s : scores) width = std::max(width, s.name.size());
  std::snprintf(buf, sizeof(buf), "%-*s  %8s  %8s  %10s  %8s\n",
                static_cast<int>(width), "source", "TVC (%)", "JSV (%)", "PPL", "JSD");
  out << buf;
  for (const auto& s : scores) {
    std::snprintf(buf, sizeof(buf), "%-*s  %8.2f  %8.2f  %10.2f  %8.2f\n",
                  static_cast<int>(width), s.name.c_str(), s.tvc * 100.0, s.jsv * 100.0,
                  s.ppl, s.jsd);
    out << buf;
  }
  for (const auto& [measure, names] : rankings) {
    out << "rank." << measure << "=" << join(names, ",") << "\n";
  }
  out << "rank.consensus=" << join(consensus, ",") << "\n";
  for (const auto& s : scores) {
    std::snprintf(buf, sizeof(buf), "tvc.%s=%.6f\njsv.%s=%.6f\nppl.%s=%.6f\njsd.%s=%.6f\n",
                  s.name.c_str(), s.tvc, s.name.c_str(), s.jsv, s.name.c_str(), s.ppl,
                  s.name.c_str(), s.jsd);
    out << buf;
  }
  return out.str();
}

}  // namespace dner
