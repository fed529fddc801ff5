#include "dner/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dner/error.hpp"
#include "dner/util.hpp"

namespace dner {

Sentence::Sentence(std::vector<std::string> toks, std::string doc, std::size_t idx)
    : tokens(std::move(toks)), doc_id(std::move(doc)), index(idx) {
  if (tokens.empty()) throw ContractError("sentence has no tokens");
  for (const auto& t : tokens) {
    if (t.empty()) throw ContractError("empty token in sentence");
  }
}

Mention::Mention(std::vector<int> positions, std::string category)
    : positions_(std::move(positions)), category_(std::move(category)) {
  if (positions_.empty()) throw ContractError("mention has no positions");
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    if (positions_[i] < 0) throw ContractError("negative token position");
    if (i > 0 && positions_[i] <= positions_[i - 1]) {
      throw ContractError("mention positions must be strictly increasing");
    }
  }
}

std::vector<Run> Mention::components() const {
  std::vector<Run> runs;
  for (int p : positions_) {
    if (!runs.empty() && runs.back().last + 1 == p) {
      runs.back().last = p;
    } else {
      runs.push_back({p, p});
    }
  }
  return runs;
}

bool Mention::continuous() const {
  return last() - first() + 1 == length();
}

bool Mention::contains(int pos) const {
  return std::binary_search(positions_.begin(), positions_.end(), pos);
}

bool mention_equal(const Mention& a, const Mention& b) {
  return a == b;
}

AnnotatedSentence::AnnotatedSentence(Sentence s, std::vector<Mention> ms)
    : sentence(std::move(s)), mentions(std::move(ms)) {
  std::set<std::pair<std::vector<int>, std::string>> seen;
  for (const auto& m : mentions) {
    if (m.last() >= static_cast<int>(sentence.size())) {
      throw ContractError("mention position beyond sentence length");
    }
    if (!seen.insert({m.positions(), m.category()}).second) {
      throw ContractError("duplicate mention (positions, category)");
    }
  }
}

const char* to_string(OverlapCategory c) {
  switch (c) {
    case OverlapCategory::NoOverlap: return "no-overlap";
    case OverlapCategory::LeftOverlap: return "left-overlap";
    case OverlapCategory::RightOverlap: return "right-overlap";
    case OverlapCategory::MultiOverlap: return "multi-overlap";
    case OverlapCategory::ContinuousOverlap: return "continuous-overlap";
    case OverlapCategory::ContinuousIsolated: return "continuous-isolated";
  }
  return "?";
}

namespace {

bool shares_position(const Run& run, const Mention& other) {
  for (int p = run.first; p <= run.last; ++p) {
    if (other.contains(p)) return true;
  }
  return false;
}

}  // namespace

MentionShape classify_mention(const Mention& mention, const AnnotatedSentence& ctx) {
  bool found = false;
  for (const auto& m : ctx.mentions) {
    if (mention_equal(m, mention)) { found = true; break; }
  }
  if (!found) throw ContractError("mention does not belong to the sentence");

  MentionShape shape;
  auto comps = mention.components();
  shape.component_count = static_cast<int>(comps.size());
  shape.is_discontinuous = mention.discontinuous();
  shape.mention_length = mention.length();
  shape.total_interval_length = mention.interval_length();

  // Which of this mention's components share a position with another mention.
  std::vector<bool> shared(comps.size(), false);
  for (const auto& other : ctx.mentions) {
    if (mention_equal(other, mention)) continue;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (!shared[i] && shares_position(comps[i], other)) shared[i] = true;
    }
  }
  int shared_count = static_cast<int>(std::count(shared.begin(), shared.end(), true));

  if (!shape.is_discontinuous) {
    shape.overlap_category = shared_count > 0 ? OverlapCategory::ContinuousOverlap
                                              : OverlapCategory::ContinuousIsolated;
    return shape;
  }
  if (shared_count == 0) {
    shape.overlap_category = OverlapCategory::NoOverlap;
  } else if (shared_count >= 2) {
    shape.overlap_category = OverlapCategory::MultiOverlap;
  } else if (shared.front()) {
    shape.overlap_category = OverlapCategory::LeftOverlap;
  } else if (shared.back()) {
    shape.overlap_category = OverlapCategory::RightOverlap;
  } else {
    // Single shared component that is neither first nor last.
    shape.overlap_category = OverlapCategory::MultiOverlap;
  }
  return shape;
}

std::string StatisticsReport::discontinuous_pct() const {
  return trunc_pct(static_cast<double>(discontinuous), static_cast<double>(mentions));
}

StatisticsReport corpus_statistics(const Corpus& corpus) {
  StatisticsReport r;
  double len_sum = 0, disc_len_sum = 0, interval_sum = 0;
  for (const auto& as : corpus) {
    ++r.sentences;
    r.tokens += as.sentence.size();
    for (const auto& m : as.mentions) {
      ++r.mentions;
      MentionShape shape = classify_mention(m, as);
      len_sum += shape.mention_length;
      ++r.overlap_histogram[shape.overlap_category];
      if (shape.is_discontinuous) {
        ++r.discontinuous;
        disc_len_sum += shape.mention_length;
        interval_sum += shape.total_interval_length;
        ++r.component_histogram[shape.component_count];
      } else if (shape.overlap_category == OverlapCategory::ContinuousOverlap) {
        ++r.continuous_overlap;
      }
    }
  }
  if (r.mentions > 0) r.avg_mention_length = len_sum / static_cast<double>(r.mentions);
  if (r.discontinuous > 0) {
    r.avg_discontinuous_length = disc_len_sum / static_cast<double>(r.discontinuous);
    r.avg_interval_length = interval_sum / static_cast<double>(r.discontinuous);
  }
  return r;
}

namespace {

std::string fmt1(std::optional<double> v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", *v);
  return buf;
}

}  // namespace

std::string StatisticsReport::to_text() const {
  std::ostringstream out;
  out << "sentences            " << sentences << "\n";
  out << "tokens               " << tokens << "\n";
  out << "mentions             " << mentions << "\n";
  out << "disc. mentions       " << discontinuous << " (" << discontinuous_pct() << ")\n";
  out << "avg mention len      " << fmt1(avg_mention_length) << "\n";
  out << "avg disc mention len " << fmt1(avg_discontinuous_length) << "\n";
  out << "avg interval len     " << fmt1(avg_interval_length) << "\n";
  out << "components:\n";
  for (const auto& [k, v] : component_histogram) {
    out << "  " << k << " components  " << v << " ("
        << trunc_pct(static_cast<double>(v), static_cast<double>(discontinuous)) << ")\n";
  }
  out << "overlap:\n";
  static const OverlapCategory disc_cats[] = {
      OverlapCategory::NoOverlap, OverlapCategory::LeftOverlap,
      OverlapCategory::RightOverlap, OverlapCategory::MultiOverlap};
  for (auto c : disc_cats) {
    auto it = overlap_histogram.find(c);
    std::size_t v = it == overlap_histogram.end() ? 0 : it->second;
    out << "  " << to_string(c) << "  " << v << " ("
        << trunc_pct(static_cast<double>(v), static_cast<double>(discontinuous)) << ")\n";
  }
  std::size_t cont = mentions - discontinuous;
  out << "  continuous-overlap  " << continuous_overlap << " ("
      << trunc_pct(static_cast<double>(continuous_overlap), static_cast<double>(cont)) << ")\n";

  out << "sentences=" << sentences << "\n";
  out << "tokens=" << tokens << "\n";
  out << "mentions=" << mentions << "\n";
  out << "discontinuous=" << discontinuous << "\n";
  out << "discontinuous_pct=" << discontinuous_pct() << "\n";
  for (const auto& [k, v] : component_histogram) {
    out << "components." << k << "=" << v << "\n";
  }
  for (const auto& [k, v] : overlap_histogram) {
    out << "overlap." << to_string(k) << "=" << v << "\n";
  }
  return out.str();
}

}  // namespace dner
