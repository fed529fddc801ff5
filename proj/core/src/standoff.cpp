#include "dner/standoff.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "dner/error.hpp"
#include "dner/util.hpp"

namespace dner {

std::string format_runs(const Mention& m) {
  std::vector<std::string> parts;
  for (const Run& r : m.components()) {
    parts.push_back(r.first == r.last
                        ? std::to_string(r.first)
                        : std::to_string(r.first) + "-" + std::to_string(r.last));
  }
  return join(parts, ",");
}

std::vector<int> parse_runs(const std::string& text, const std::string& where,
                            std::size_t line, bool* normalized) {
  std::vector<int> positions;
  std::istringstream in(text);
  std::string part;
  int prev_last = -2;
  while (std::getline(in, part, ',')) {
    if (part.empty()) throw ParseError(where, line, "empty run in '" + text + "'");
    int first, last;
    auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        first = last = std::stoi(part);
      } else {
        first = std::stoi(part.substr(0, dash));
        last = std::stoi(part.substr(dash + 1));
      }
    } catch (const std::exception&) {
      throw ParseError(where, line, "malformed run '" + part + "'");
    }
    if (first < 0 || last < first) throw ParseError(where, line, "bad run bounds in '" + part + "'");
    if (first <= prev_last) throw ParseError(where, line, "runs not sorted in '" + text + "'");
    if (first == prev_last + 1 && normalized) *normalized = true;  // adjacent, merged
    for (int p = first; p <= last; ++p) positions.push_back(p);
    prev_last = last;
  }
  if (positions.empty()) throw ParseError(where, line, "no positions in '" + text + "'");
  return positions;
}

void write_standoff(const Corpus& corpus, const std::string& text_path,
                    const std::string& ann_path) {
  std::ofstream text(text_path, std::ios::binary);
  if (!text) throw DataError("cannot write '" + text_path + "'");
  std::ofstream ann(ann_path, std::ios::binary);
  if (!ann) throw DataError("cannot write '" + ann_path + "'");

  std::string current_doc;
  bool first = true;
  for (const auto& as : corpus) {
    if (first || as.sentence.doc_id != current_doc) {
      current_doc = as.sentence.doc_id;
      text << "#doc " << current_doc << "\n";
      first = false;
    }
    text << join(as.sentence.tokens, " ") << "\n";
    for (const auto& m : as.mentions) {
      ann << as.sentence.doc_id << '\t' << as.sentence.index << '\t' << format_runs(m)
          << '\t' << m.category() << '\n';
    }
  }
}

std::vector<Sentence> read_sentences(const std::string& text_path) {
  std::ifstream in(text_path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + text_path + "'");
  std::vector<Sentence> sentences;
  std::string line;
  std::string doc = "doc0";
  std::size_t doc_index = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!is_valid_utf8(line)) throw DataError(text_path + ": line " + std::to_string(lineno) + " is not valid UTF-8");
    if (line.rfind("#doc ", 0) == 0) {
      doc = line.substr(5);
      doc_index = 0;
      continue;
    }
    std::vector<std::string> tokens;
    std::istringstream ts(line);
    std::string tok;
    while (ts >> tok) tokens.push_back(tok);
    if (tokens.empty()) continue;
    sentences.emplace_back(std::move(tokens), doc, doc_index++);
  }
  return sentences;
}

Corpus read_standoff(const std::string& text_path, const std::string& ann_path,
                     std::vector<StandoffWarning>* warnings) {
  std::vector<Sentence> sentences = read_sentences(text_path);
  std::map<std::pair<std::string, std::size_t>, std::size_t> by_key;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (!by_key.emplace(std::make_pair(sentences[i].doc_id, sentences[i].index), i).second) {
      throw DataError(text_path + ": duplicate sentence key " + sentences[i].doc_id + "/" +
                      std::to_string(sentences[i].index));
    }
  }

  std::vector<std::vector<Mention>> mentions(sentences.size());
  std::ifstream ann(ann_path, std::ios::binary);
  if (!ann) throw DataError("cannot open '" + ann_path + "'");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(ann, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 4) {
      throw ParseError(ann_path, lineno, "expected 4 tab-separated columns");
    }
    std::size_t sent_idx;
    try {
      sent_idx = static_cast<std::size_t>(std::stoull(cols[1]));
    } catch (const std::exception&) {
      throw ParseError(ann_path, lineno, "malformed sentence index '" + cols[1] + "'");
    }
    auto it = by_key.find({cols[0], sent_idx});
    if (it == by_key.end()) {
      throw DataError(ann_path + ":" + std::to_string(lineno) + ": annotation references unknown sentence " +
                      cols[0] + "/" + cols[1]);
    }
    bool normalized = false;
    std::vector<int> positions = parse_runs(cols[2], ann_path, lineno, &normalized);
    if (normalized && warnings) {
      warnings->push_back({lineno, "adjacent runs normalized in '" + cols[2] + "'"});
    }
    if (cols[3].empty()) throw ParseError(ann_path, lineno, "empty category");
    mentions[it->second].emplace_back(std::move(positions), cols[3]);
  }

  Corpus corpus;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    corpus.emplace_back(sentences[i], std::move(mentions[i]));
  }
  return corpus;
}

}  // namespace dner
