#ifndef DNER_STANDOFF_HPP
#define DNER_STANDOFF_HPP

#include <string>
#include <vector>

#include "dner/corpus.hpp"

namespace dner {

// Token-index standoff format, the lossless carrier for discontinuous and
// overlapping mentions.
//
// Text file: one tokenized sentence per line (space separated). A line of
// the form `#doc <id>` switches the current document; sentences are indexed
// 0,1,... within each document.
//
// Annotation file: `doc_id<TAB>sent_idx<TAB>runs<TAB>category` where `runs`
// lists sorted position runs, e.g. "0-1,3". Adjacent runs are normalized on
// read ("0-1,2-3" becomes "0-3") with a warning.

struct StandoffWarning {
  std::size_t line = 0;
  std::string message;
};

std::string format_runs(const Mention& m);
std::vector<int> parse_runs(const std::string& text, const std::string& where,
                            std::size_t line, bool* normalized);

void write_standoff(const Corpus& corpus, const std::string& text_path,
                    const std::string& ann_path);

Corpus read_standoff(const std::string& text_path, const std::string& ann_path,
                     std::vector<StandoffWarning>* warnings = nullptr);

// Reads only the text side (no annotations): plain sentences for tagging.
std::vector<Sentence> read_sentences(const std::string& text_path);

}  // namespace dner

#endif
