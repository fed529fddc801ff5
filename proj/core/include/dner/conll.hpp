#ifndef DNER_CONLL_HPP
#define DNER_CONLL_HPP

#include <string>
#include <vector>

#include "dner/corpus.hpp"
#include "dner/schemas.hpp"

namespace dner {

struct ConllWarning {
  std::size_t line = 0;
  std::string message;
};

// Two-column format: `token<TAB>tag`, blank line between sentences,
// `-DOCSTART-` lines ignored. Tags are decoded with the BIO repair rule;
// repaired positions are reported as warnings with line numbers.
Corpus read_conll(const std::string& path, std::vector<ConllWarning>* warnings = nullptr);

// Parses CoNLL content from a string (same rules as read_conll).
Corpus parse_conll(const std::string& content, const std::string& source_name,
                   std::vector<ConllWarning>* warnings = nullptr);

// Writes the corpus in BIO tags (lossy for mentions BIO cannot express) or,
// with `schema == Schema::BIOExt`, in extended tags.
void write_conll(const Corpus& corpus, const std::string& path,
                 Schema schema = Schema::BIO);

std::string format_conll(const Corpus& corpus, Schema schema = Schema::BIO);

// Reads an extended-tag file and decodes it; `category` is assigned to the
// decoded mentions.
Corpus read_conll_bioext(const std::string& path, const std::string& category,
                         std::vector<AmbiguityNote>* report = nullptr);

}  // namespace dner

#endif
