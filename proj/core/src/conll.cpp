#include "dner/conll.hpp"

#include <fstream>
#include <sstream>

#include "dner/error.hpp"
#include "dner/util.hpp"

namespace dner {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();
  if (!is_valid_utf8(content)) throw DataError("'" + path + "' is not valid UTF-8");
  return content;
}

struct RawSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::size_t first_line = 0;
};

std::vector<RawSentence> split_sentences(const std::string& content,
                                         const std::string& source_name) {
  std::vector<RawSentence> sentences;
  RawSentence current;
  std::istringstream in(content);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!current.tokens.empty()) sentences.push_back(std::move(current));
      current = {};
      continue;
    }
    if (line.rfind("-DOCSTART-", 0) == 0) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(source_name, lineno, "expected exactly two tab-separated columns");
    }
    if (current.tokens.empty()) current.first_line = lineno;
    current.tokens.push_back(line.substr(0, tab));
    current.tags.push_back(line.substr(tab + 1));
  }
  if (!current.tokens.empty()) sentences.push_back(std::move(current));
  return sentences;
}

}  // namespace

Corpus parse_conll(const std::string& content, const std::string& source_name,
                   std::vector<ConllWarning>* warnings) {
  Corpus corpus;
  std::size_t index = 0;
  for (auto& raw : split_sentences(content, source_name)) {
    Sentence sentence(raw.tokens, source_name, index++);
    TagSequence tags;
    tags.schema = Schema::BIO;
    tags.tags = raw.tags;
    std::vector<int> repairs;
    AnnotatedSentence as = decode_bio(sentence, tags, &repairs);
    if (warnings) {
      for (int pos : repairs) {
        warnings->push_back({raw.first_line + static_cast<std::size_t>(pos),
                             "leading I- tag repaired to B-"});
      }
    }
    corpus.push_back(std::move(as));
  }
  return corpus;
}

Corpus read_conll(const std::string& path, std::vector<ConllWarning>* warnings) {
  return parse_conll(slurp(path), path, warnings);
}

std::string format_conll(const Corpus& corpus, Schema schema) {
  std::ostringstream out;
  for (const auto& as : corpus) {
    TagSequence tags = schema == Schema::BIO ? encode_bio(as) : encode_bioext(as);
    for (std::size_t i = 0; i < as.sentence.size(); ++i) {
      out << as.sentence.tokens[i] << '\t' << tags.tags[i] << '\n';
    }
    out << '\n';
  }
  return out.str();
}

void write_conll(const Corpus& corpus, const std::string& path, Schema schema) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << format_conll(corpus, schema);
}

Corpus read_conll_bioext(const std::string& path, const std::string& category,
                         std::vector<AmbiguityNote>* report) {
  std::string content = slurp(path);
  Corpus corpus;
  std::size_t index = 0;
  for (auto& raw : split_sentences(content, path)) {
    Sentence sentence(raw.tokens, path, index++);
    TagSequence tags;
    tags.schema = Schema::BIOExt;
    tags.tags = raw.tags;
    tags.category = category;
    BioExtDecode decoded = decode_bioext(sentence, tags);
    if (report) {
      report->insert(report->end(), decoded.ambiguity_report.begin(),
                     decoded.ambiguity_report.end());
    }
    corpus.push_back(std::move(decoded.sentence));
  }
  return corpus;
}

}  // namespace dner
