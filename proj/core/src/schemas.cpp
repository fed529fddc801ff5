#include "dner/schemas.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dner/error.hpp"

namespace dner {

TagSequence encode_bio(const AnnotatedSentence& as) {
  TagSequence out;
  out.schema = Schema::BIO;
  out.tags.assign(as.sentence.size(), "O");

  // Longest first, then leftmost, then category for determinism.
  std::vector<const Mention*> order;
  for (const auto& m : as.mentions) order.push_back(&m);
  std::sort(order.begin(), order.end(), [](const Mention* a, const Mention* b) {
    if (a->length() != b->length()) return a->length() > b->length();
    if (a->first() != b->first()) return a->first() < b->first();
    return a->category() < b->category();
  });

  std::vector<bool> taken(as.sentence.size(), false);
  for (const Mention* m : order) {
    if (m->discontinuous()) { out.lossy = true; continue; }
    bool free = true;
    for (int p = m->first(); p <= m->last(); ++p) {
      if (taken[p]) { free = false; break; }
    }
    if (!free) { out.lossy = true; continue; }
    for (int p = m->first(); p <= m->last(); ++p) {
      taken[p] = true;
      out.tags[p] = (p == m->first() ? "B-" : "I-") + m->category();
    }
  }
  return out;
}

namespace {

struct ParsedTag {
  char indicator;        // 'B', 'I', 'O'
  std::string category;  // empty for O
};

ParsedTag parse_bio_tag(const std::string& tag, std::size_t pos) {
  if (tag == "O") return {'O', ""};
  if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && tag[1] == '-') {
    return {tag[0], tag.substr(2)};
  }
  throw ParseError("tag", pos, "unrecognized BIO tag '" + tag + "'");
}

}  // namespace

AnnotatedSentence decode_bio(const Sentence& sentence, const TagSequence& tags,
                             std::vector<int>* repairs) {
  if (tags.schema != Schema::BIO) throw ContractError("decode_bio requires the BIO schema");
  if (tags.tags.size() != sentence.size()) {
    throw ContractError("tag/token length mismatch");
  }

  std::vector<Mention> mentions;
  std::vector<int> run;
  std::string run_cat;
  auto flush = [&]() {
    if (!run.empty()) mentions.emplace_back(run, run_cat);
    run.clear();
  };

  for (std::size_t i = 0; i < tags.tags.size(); ++i) {
    ParsedTag t = parse_bio_tag(tags.tags[i], i);
    if (t.indicator == 'O') {
      flush();
      continue;
    }
    if (t.indicator == 'I') {
      // Repair: I-X not continuing a run of X becomes B-X.
      if (!run.empty() && run_cat == t.category) {
        run.push_back(static_cast<int>(i));
        continue;
      }
      if (repairs) repairs->push_back(static_cast<int>(i));
      t.indicator = 'B';
    }
    flush();
    run = {static_cast<int>(i)};
    run_cat = t.category;
  }
  flush();
  return AnnotatedSentence(sentence, std::move(mentions));
}

TagSequence encode_bioext(const AnnotatedSentence& as) {
  std::set<std::string> categories;
  for (const auto& m : as.mentions) categories.insert(m.category());
  if (categories.size() > 1) {
    throw SchemaLimitationError(
        "the extended schema represents a single entity category per sentence");
  }

  TagSequence out;
  out.schema = Schema::BIOExt;
  out.category = categories.empty() ? "" : *categories.begin();

  const std::size_t n = as.sentence.size();
  std::vector<int> cover(n, 0);      // how many mentions cover each position
  std::vector<bool> in_disc(n, false);
  for (const auto& m : as.mentions) {
    for (int p : m.positions()) {
      ++cover[p];
      if (m.discontinuous()) in_disc[p] = true;
    }
  }

  // Per-position tag class: 0 outside, 1 continuous part, 2 body, 3 head.
  std::vector<int> cls(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (cover[i] >= 2) cls[i] = 3;
    else if (cover[i] == 1) cls[i] = in_disc[i] ? 2 : 1;
  }

  out.tags.assign(n, "O");
  static const char* kBegin[] = {"O", "B", "BD", "BH"};
  static const char* kInside[] = {"O", "I", "ID", "IH"};
  for (std::size_t i = 0; i < n; ++i) {
    if (cls[i] == 0) continue;
    bool starts = i == 0 || cls[i - 1] != cls[i];
    out.tags[i] = starts ? kBegin[cls[i]] : kInside[cls[i]];
  }
  return out;
}

namespace {

struct TagRun {
  int cls;  // 1 plain, 2 body, 3 head
  int first;
  int last;
};

int bioext_class(const std::string& tag, std::size_t pos, bool& begins) {
  begins = tag[0] == 'B';
  if (tag == "O") return 0;
  if (tag == "B" || tag == "I") return 1;
  if (tag == "BD" || tag == "ID") return 2;
  if (tag == "BH" || tag == "IH") return 3;
  throw ParseError("tag", pos, "unrecognized extended tag '" + tag + "'");
}

std::vector<int> run_union(const TagRun& a, const TagRun& b) {
  std::vector<int> out;
  for (int p = a.first; p <= a.last; ++p) out.push_back(p);
  for (int p = b.first; p <= b.last; ++p) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BioExtDecode decode_bioext(const Sentence& sentence, const TagSequence& tags) {
  if (tags.schema != Schema::BIOExt) {
    throw ContractError("decode_bioext requires the extended schema");
  }
  if (tags.tags.size() != sentence.size()) {
    throw ContractError("tag/token length mismatch");
  }
  const std::string category = tags.category.empty() ? "MENTION" : tags.category;

  std::vector<TagRun> runs;
  for (std::size_t i = 0; i < tags.tags.size(); ++i) {
    bool begins = false;
    int cls = bioext_class(tags.tags[i], i, begins);
    if (cls == 0) continue;
    if (!runs.empty() && runs.back().cls == cls && runs.back().last == static_cast<int>(i) - 1 &&
        !begins) {
      runs.back().last = static_cast<int>(i);
    } else {
      runs.push_back({cls, static_cast<int>(i), static_cast<int>(i)});
    }
  }

  std::vector<std::size_t> heads, bodies, plains;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].cls == 3) heads.push_back(r);
    else if (runs[r].cls == 2) bodies.push_back(r);
    else plains.push_back(r);
  }

  std::set<std::pair<std::vector<int>, std::string>> uniq;
  std::vector<Mention> mentions;
  auto emit = [&](std::vector<int> positions) {
    if (uniq.insert({positions, category}).second) {
      mentions.emplace_back(std::move(positions), category);
    }
  };

  std::vector<bool> head_attached(runs.size(), false);
  bool merged_headless = false;

  if (heads.empty() && bodies.size() >= 1) {
    // No shared head anywhere: the body runs spell out one discontinuous
    // mention.
    std::vector<int> all;
    for (std::size_t b : bodies) {
      for (int p = runs[b].first; p <= runs[b].last; ++p) all.push_back(p);
    }
    emit(std::move(all));
    merged_headless = bodies.size() >= 2;
  } else {
    // Bodies attach to the nearest right head before the next body, else
    // the nearest left head.
    for (std::size_t b : bodies) {
      int attach = -1;
      for (std::size_t r = b + 1; r < runs.size(); ++r) {
        if (runs[r].cls == 2) break;
        if (runs[r].cls == 3) { attach = static_cast<int>(r); break; }
      }
      if (attach < 0) {
        for (std::size_t r = b; r-- > 0;) {
          if (runs[r].cls == 3) { attach = static_cast<int>(r); break; }
        }
      }
      if (attach < 0) {
        std::vector<int> alone;
        for (int p = runs[b].first; p <= runs[b].last; ++p) alone.push_back(p);
        emit(std::move(alone));
      } else {
        head_attached[attach] = true;
        emit(run_union(runs[b], runs[attach]));
      }
    }
  }

  // Plain runs adjacent to a head form one continuous mention with it.
  for (std::size_t pr : plains) {
    int attach = -1;
    for (std::size_t h : heads) {
      if (runs[h].first == runs[pr].last + 1 || runs[h].last == runs[pr].first - 1) {
        attach = static_cast<int>(h);
        break;
      }
    }
    if (attach < 0) {
      std::vector<int> alone;
      for (int p = runs[pr].first; p <= runs[pr].last; ++p) alone.push_back(p);
      emit(std::move(alone));
    } else {
      head_attached[attach] = true;
      emit(run_union(runs[pr], runs[attach]));
    }
  }

  // Heads nothing attached to stand alone.
  for (std::size_t h : heads) {
    if (!head_attached[h]) {
      std::vector<int> alone;
      for (int p = runs[h].first; p <= runs[h].last; ++p) alone.push_back(p);
      emit(std::move(alone));
    }
  }

  BioExtDecode out{AnnotatedSentence(sentence, std::move(mentions)), {}};

  // Every attached head admits an alternative reading in which it also
  // stands alone as a mention; merged headless bodies admit a reading as
  // separate mentions.
  std::size_t extra = 0;
  for (std::size_t h : heads) {
    if (head_attached[h]) ++extra;
  }
  if (merged_headless) extra += bodies.size() - 1;
  if (extra > 0) {
    AmbiguityNote note;
    note.doc_id = sentence.doc_id;
    note.sentence_index = sentence.index;
    note.alternative_mentions = out.sentence.mentions.size() + extra;
    note.description =
        merged_headless
            ? "headless bodies merged: alternative reading with " +
                  std::to_string(note.alternative_mentions) + " separate mentions"
            : "shared head may also stand alone: alternative reading with " +
                  std::to_string(note.alternative_mentions) + " mentions";
    out.ambiguity_report.push_back(std::move(note));
  }
  return out;
}

AnnotatedSentence flat_merge(const AnnotatedSentence& as) {
  struct Cover {
    int first;
    int last;
    const Mention* source;
  };
  std::vector<Cover> covers;
  for (const auto& m : as.mentions) covers.push_back({m.first(), m.last(), &m});

  // Transitively merge overlapping covering spans.
  bool changed = !covers.empty();
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < covers.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < covers.size() && !changed; ++j) {
        if (covers[i].last < covers[j].first || covers[j].last < covers[i].first) continue;
        const Mention* a = covers[i].source;
        const Mention* b = covers[j].source;
        // Category of the longest constituent; ties leftmost then by name.
        const Mention* rep = a;
        if (b->length() > a->length() ||
            (b->length() == a->length() &&
             (b->first() < a->first() ||
              (b->first() == a->first() && b->category() < a->category())))) {
          rep = b;
        }
        covers[i] = {std::min(covers[i].first, covers[j].first),
                     std::max(covers[i].last, covers[j].last), rep};
        covers.erase(covers.begin() + static_cast<std::ptrdiff_t>(j));
        changed = true;
      }
    }
  }

  std::sort(covers.begin(), covers.end(),
            [](const Cover& a, const Cover& b) { return a.first < b.first; });
  std::vector<Mention> merged;
  for (const auto& c : covers) {
    std::vector<int> span(static_cast<std::size_t>(c.last - c.first + 1));
    std::iota(span.begin(), span.end(), c.first);
    merged.emplace_back(std::move(span), c.source->category());
  }
  return AnnotatedSentence(as.sentence, std::move(merged));
}

}  // namespace dner
