#include "dner/evaluation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dner/error.hpp"

namespace dner {

BreakdownAxis parse_axis(const std::string& name) {
  if (name == "mention-length") return BreakdownAxis::MentionLength;
  if (name == "interval-length") return BreakdownAxis::IntervalLength;
  if (name == "overlap-category") return BreakdownAxis::OverlapCategory;
  throw DataError("unknown breakdown axis '" + name + "'");
}

namespace {

void check_keys(const Corpus& gold, const Corpus& pred) {
  if (gold.size() != pred.size()) {
    throw DataError("gold and prediction corpora differ in sentence count");
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].key() != pred[i].key()) {
      throw DataError("sentence key mismatch at position " + std::to_string(i));
    }
  }
}

std::vector<Mention> dedup(const std::vector<Mention>& ms) {
  std::vector<Mention> out;
  for (const auto& m : ms) {
    bool seen = false;
    for (const auto& o : out) {
      if (mention_equal(o, m)) { seen = true; break; }
    }
    if (!seen) out.push_back(m);
  }
  return out;
}

void finish(EvalReport& r) {
  if (r.tp + r.fp == 0) {
    r.precision_undefined = true;
    r.precision = 0.0;
  } else {
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  }
  if (r.tp + r.fn == 0) {
    r.recall_undefined = true;
    r.recall = 0.0;
  } else {
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  }
  r.f1 = (r.precision + r.recall) == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
}

}  // namespace

EvalReport evaluate(const Corpus& gold, const Corpus& pred) {
  check_keys(gold, pred);
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::vector<Mention> p = dedup(pred[i].mentions);
    std::vector<Mention> g = dedup(gold[i].mentions);
    for (const auto& pm : p) {
      bool hit = std::any_of(g.begin(), g.end(),
                             [&](const Mention& gm) { return mention_equal(gm, pm); });
      if (hit) ++r.tp; else ++r.fp;
    }
    for (const auto& gm : g) {
      bool hit = std::any_of(p.begin(), p.end(),
                             [&](const Mention& pm) { return mention_equal(gm, pm); });
      if (!hit) ++r.fn;
    }
  }
  finish(r);
  return r;
}

Corpus subset_disc_sentences(const Corpus& gold) {
  Corpus out;
  for (const auto& as : gold) {
    bool has_disc = std::any_of(as.mentions.begin(), as.mentions.end(),
                                [](const Mention& m) { return m.discontinuous(); });
    if (has_disc) out.push_back(as);
  }
  return out;
}

EvalReport subset_disc_only(const Corpus& gold, const Corpus& pred) {
  check_keys(gold, pred);
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::vector<Mention> g, p;
    for (const auto& m : dedup(gold[i].mentions)) {
      if (m.discontinuous()) g.push_back(m);
    }
    for (const auto& m : dedup(pred[i].mentions)) {
      if (m.discontinuous()) p.push_back(m);
    }
    for (const auto& pm : p) {
      bool hit = std::any_of(g.begin(), g.end(),
                             [&](const Mention& gm) { return mention_equal(gm, pm); });
      if (hit) ++r.tp; else ++r.fp;
    }
    for (const auto& gm : g) {
      bool hit = std::any_of(p.begin(), p.end(),
                             [&](const Mention& pm) { return mention_equal(gm, pm); });
      if (!hit) ++r.fn;
    }
  }
  finish(r);
  return r;
}

namespace {

std::string bucket_name(const Mention& m, const AnnotatedSentence& ctx, BreakdownAxis axis) {
  switch (axis) {
    case BreakdownAxis::MentionLength:
      return std::to_string(m.length());
    case BreakdownAxis::IntervalLength:
      return std::to_string(m.interval_length());
    case BreakdownAxis::OverlapCategory:
      return to_string(classify_mention(m, ctx).overlap_category);
  }
  return "?";
}

}  // namespace

std::map<std::string, BucketStats> breakdown(const Corpus& gold, const Corpus& pred,
                                             BreakdownAxis axis) {
  check_keys(gold, pred);
  std::map<std::string, BucketStats> buckets;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    std::vector<Mention> p = dedup(pred[i].mentions);
    for (const auto& gm : dedup(gold[i].mentions)) {
      BucketStats& b = buckets[bucket_name(gm, gold[i], axis)];
      ++b.gold;
      bool hit = std::any_of(p.begin(), p.end(),
                             [&](const Mention& pm) { return mention_equal(gm, pm); });
      if (hit) ++b.tp;
    }
  }
  return buckets;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "P %.4f  R %.4f  F1 %.4f", precision, recall, f1);
  out << buf << "  (tp " << tp << ", fp " << fp << ", fn " << fn << ")";
  if (precision_undefined) out << "  [no predictions]";
  if (recall_undefined) out << "  [no gold]";
  out << "\n";
  for (const auto& [name, b] : breakdown) {
    std::snprintf(buf, sizeof(buf), "%.4f", b.recall());
    out << "  " << name << ": gold " << b.gold << "  recall " << buf << "\n";
  }
  std::snprintf(buf, sizeof(buf), "%.6f", precision);
  out << "precision=" << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", recall);
  out << "recall=" << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.6f", f1);
  out << "f1=" << buf << "\n";
  out << "tp=" << tp << "\nfp=" << fp << "\nfn=" << fn << "\n";
  for (const auto& [name, b] : breakdown) {
    std::snprintf(buf, sizeof(buf), "%.6f", b.recall());
    out << "bucket." << name << ".gold=" << b.gold << "\n";
    out << "bucket." << name << ".recall=" << buf << "\n";
  }
  return out.str();
}

}  // namespace dner
