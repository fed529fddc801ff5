// Command-line front end for the discontinuous-NER toolkit. One binary,
// subcommands chained into batch pipelines:
//
//   stats | convert | augment | similarity | train | tag | evaluate | oracle-check
//
// Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to
// stderr; data goes to files or stdout. All randomness flows from --seed.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dner/augment.hpp"
#include "dner/conll.hpp"
#include "dner/corpus.hpp"
#include "dner/error.hpp"
#include "dner/evaluation.hpp"
#include "dner/oracle.hpp"
#include "dner/schemas.hpp"
#include "dner/scorer.hpp"
#include "dner/similarity.hpp"
#include "dner/standoff.hpp"
#include "dner/util.hpp"

namespace {

using namespace dner;

struct CorpusInput {
  std::string conll;
  std::string text;
  std::string ann;
  std::string bioext_category = "MENTION";
  bool bioext = false;

  void attach(CLI::App* cmd, const std::string& role) {
    auto* conll_opt =
        cmd->add_option("--" + role + "-conll", conll, "two-column tag file (" + role + ")");
    auto* text_opt =
        cmd->add_option("--" + role + "-text", text, "standoff text file (" + role + ")");
    auto* ann_opt =
        cmd->add_option("--" + role + "-ann", ann, "standoff annotation file (" + role + ")");
    cmd->add_flag("--" + role + "-bioext", bioext,
                  "read the tag file with the extended schema");
    cmd->add_option("--" + role + "-category", bioext_category,
                    "category for extended-schema decoding");
    conll_opt->excludes(text_opt);
    ann_opt->needs(text_opt);
  }

  Corpus read(std::vector<ConllWarning>* warnings = nullptr) const {
    if (!conll.empty()) {
      if (bioext) return read_conll_bioext(conll, bioext_category);
      return read_conll(conll, warnings);
    }
    if (!text.empty()) {
      if (ann.empty()) throw DataError("standoff input needs both --*-text and --*-ann");
      std::vector<StandoffWarning> standoff_warnings;
      Corpus corpus = read_standoff(text, ann, &standoff_warnings);
      for (const auto& w : standoff_warnings) {
        std::cerr << "warning: " << ann << ":" << w.line << ": " << w.message << "\n";
      }
      return corpus;
    }
    throw DataError("no input given; use --*-conll or --*-text/--*-ann");
  }
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + out_path + "'");
  out << text;
}

// Applies fn to every index; results land in input order, so parallel runs
// stay byte-identical with sequential ones.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t jobs, Fn&& fn) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> workers;
  std::size_t n_workers = std::min(jobs, count);
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += n_workers) fn(i);
    });
  }
  for (auto& t : workers) t.join();
}

int cmd_stats(const CorpusInput& input, const std::string& out_path) {
  Corpus corpus = input.read();
  emit(corpus_statistics(corpus).to_text(), out_path);
  return 0;
}

struct ConvertArgs {
  CorpusInput input;
  std::string out_conll;
  std::string out_text;
  std::string out_ann;
  bool out_bioext = false;
  bool apply_flat_merge = false;
};

int cmd_convert(const ConvertArgs& args) {
  std::vector<ConllWarning> warnings;
  Corpus corpus = args.input.read(&warnings);
  for (const auto& w : warnings) {
    std::cerr << "warning: line " << w.line << ": " << w.message << "\n";
  }
  if (args.apply_flat_merge) {
    for (auto& as : corpus) as = flat_merge(as);
  }
  if (!args.out_conll.empty()) {
    write_conll(corpus, args.out_conll, args.out_bioext ? Schema::BIOExt : Schema::BIO);
  }
  if (!args.out_text.empty()) {
    if (args.out_ann.empty()) throw DataError("standoff output needs --out-text and --out-ann");
    write_standoff(corpus, args.out_text, args.out_ann);
  }
  if (args.out_conll.empty() && args.out_text.empty()) {
    std::cout << format_conll(corpus, args.out_bioext ? Schema::BIOExt : Schema::BIO);
  }
  return 0;
}

struct AugmentArgs {
  CorpusInput input;
  std::string out;
  std::string method = "lwtr";
  double p = 0.3;
  std::size_t per_instance = 1;
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  std::string lexicon_path;
  std::string stopword_path;
};

int cmd_augment(const AugmentArgs& args) {
  Corpus corpus = args.input.read();
  AugmentConfig cfg;
  cfg.method = parse_method(args.method);
  cfg.p = args.p;
  cfg.per_instance = args.per_instance;
  cfg.seed = args.seed;
  cfg.jobs = args.jobs;
  if (!args.stopword_path.empty()) cfg.stopwords = load_stopwords(args.stopword_path);
  SynonymLexicon lexicon;
  if (!args.lexicon_path.empty()) {
    lexicon = SynonymLexicon::load(args.lexicon_path);
    cfg.lexicon = &lexicon;
  } else if (cfg.method == AugmentMethod::SR || cfg.method == AugmentMethod::All) {
    throw DataError("method '" + args.method + "' needs --lexicon");
  }
  AugmentStats stats;
  Corpus augmented = augment_corpus(corpus, cfg, &stats);
  emit(format_conll(augmented, Schema::BIO), args.out);
  std::cerr << "augment: " << corpus.size() << " -> " << augmented.size() << " instances";
  if (stats.skipped_unknown_tag) std::cerr << ", " << stats.skipped_unknown_tag << " unknown-tag skips";
  if (stats.skipped_no_synonym) std::cerr << ", " << stats.skipped_no_synonym << " no-synonym skips";
  if (stats.skipped_empty_pool) std::cerr << ", " << stats.skipped_empty_pool << " empty-pool skips";
  if (stats.skipped_complex) std::cerr << ", " << stats.skipped_complex << " complex skips";
  std::cerr << "\n";
  return 0;
}

struct SimilarityArgs {
  std::vector<std::string> sources;
  std::string target;
  std::string out;
  std::string mode = "mean";
  std::string stopword_path;
};

int cmd_similarity(const SimilarityArgs& args) {
  std::vector<NamedTextCorpus> sources;
  for (const auto& path : args.sources) {
    std::string name = path;
    auto slash = name.find_last_of('/');
    if (slash != std::string::npos) name = name.substr(slash + 1);
    auto dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    sources.push_back({name, read_text_corpus(path)});
  }
  TextCorpus target = read_text_corpus(args.target);
  PplMode mode;
  if (args.mode == "mean") mode = PplMode::Mean;
  else if (args.mode == "summed") mode = PplMode::Summed;
  else throw DataError("unknown perplexity mode '" + args.mode + "'");
  std::set<std::string> stopwords =
      args.stopword_path.empty() ? default_stopwords() : load_stopwords(args.stopword_path);
  emit(rank_sources(sources, target, stopwords, mode).to_text(), args.out);
  return 0;
}

struct TrainArgs {
  CorpusInput input;
  std::string model_out;
  std::size_t epochs = 10;
  std::uint64_t seed = 1;
};

int cmd_train(const TrainArgs& args) {
  Corpus corpus = args.input.read();
  TrainResult result = train(corpus, args.epochs, args.seed);
  result.model.save(args.model_out);
  std::cerr << "train: " << corpus.size() << " sentences, " << args.epochs << " epochs;"
            << " updates per epoch:";
  for (std::size_t u : result.epoch_updates) std::cerr << " " << u;
  std::cerr << "\n";
  return 0;
}

struct TagArgs {
  std::string model_path;
  std::string text;
  std::string out_ann;
  std::size_t jobs = 1;
};

int cmd_tag(const TagArgs& args) {
  PerceptronModel model = PerceptronModel::load(args.model_path);
  std::vector<Sentence> sentences = read_sentences(args.text);
  std::vector<std::vector<Mention>> outputs(sentences.size());
  parallel_for(sentences.size(), args.jobs, [&](std::size_t i) {
    outputs[i] = decode(sentences[i], model).mentions;
  });
  std::ostringstream ann;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    for (const auto& m : outputs[i]) {
      ann << sentences[i].doc_id << '\t' << sentences[i].index << '\t' << format_runs(m)
          << '\t' << m.category() << '\n';
    }
  }
  emit(ann.str(), args.out_ann);
  return 0;
}

struct EvalArgs {
  CorpusInput gold;
  CorpusInput pred;
  std::string subset = "all";
  std::string breakdown_axis;
  std::string out;
  std::size_t jobs = 1;
};

int cmd_evaluate(const EvalArgs& args) {
  Corpus gold = args.gold.read();
  Corpus pred = args.pred.read();

  if (args.subset == "disc-sentences") {
    Corpus gold_subset = subset_disc_sentences(gold);
    std::set<std::pair<std::string, std::size_t>> keys;
    for (const auto& as : gold_subset) keys.insert(as.key());
    Corpus pred_subset;
    for (const auto& as : pred) {
      if (keys.count(as.key())) pred_subset.push_back(as);
    }
    gold = std::move(gold_subset);
    pred = std::move(pred_subset);
  }

  bool disc_only = args.subset == "disc-only";
  if (!disc_only && args.subset != "all" && args.subset != "disc-sentences") {
    throw DataError("unknown subset '" + args.subset + "'");
  }

  EvalReport report;
  std::size_t jobs = std::min(args.jobs == 0 ? std::size_t{1} : args.jobs, gold.size());
  if (jobs <= 1 || gold.empty()) {
    report = disc_only ? subset_disc_only(gold, pred) : evaluate(gold, pred);
  } else {
    // Counts are associative: evaluate chunks in parallel and merge.
    std::vector<EvalReport> parts(jobs);
    std::vector<std::thread> workers;
    std::size_t chunk = (gold.size() + jobs - 1) / jobs;
    for (std::size_t w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        std::size_t first = w * chunk;
        std::size_t last = std::min(gold.size(), first + chunk);
        if (first >= last) return;
        Corpus g(gold.begin() + first, gold.begin() + last);
        Corpus p(pred.begin() + first, pred.begin() + last);
        parts[w] = disc_only ? subset_disc_only(g, p) : evaluate(g, p);
      });
    }
    for (auto& t : workers) t.join();
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& part : parts) {
      tp += part.tp;
      fp += part.fp;
      fn += part.fn;
    }
    report.tp = tp;
    report.fp = fp;
    report.fn = fn;
    report.precision_undefined = tp + fp == 0;
    report.recall_undefined = tp + fn == 0;
    report.precision = report.precision_undefined ? 0.0 : double(tp) / double(tp + fp);
    report.recall = report.recall_undefined ? 0.0 : double(tp) / double(tp + fn);
    report.f1 = report.precision + report.recall == 0.0
                    ? 0.0
                    : 2.0 * report.precision * report.recall /
                          (report.precision + report.recall);
  }
  if (!args.breakdown_axis.empty()) {
    report.breakdown = breakdown(gold, pred, parse_axis(args.breakdown_axis));
  }
  emit(report.to_text(), args.out);
  return 0;
}

struct OracleCheckArgs {
  CorpusInput input;
  std::string out;
  std::string dump_actions;
};

int cmd_oracle_check(const OracleCheckArgs& args) {
  Corpus corpus = args.input.read();

  std::map<OverlapCategory, std::pair<std::size_t, std::size_t>> per_category;
  std::size_t sentences_with_unreachable = 0;
  std::size_t reachable_total = 0, unreachable_total = 0;

  std::ofstream dump;
  if (!args.dump_actions.empty()) {
    dump.open(args.dump_actions, std::ios::binary);
    if (!dump) throw DataError("cannot write '" + args.dump_actions + "'");
  }

  for (const auto& as : corpus) {
    OracleResult result = oracle(as);
    reachable_total += result.reachable.size();
    unreachable_total += result.unreachable.size();
    if (!result.unreachable.empty()) ++sentences_with_unreachable;
    for (const auto& m : as.mentions) {
      ++per_category[classify_mention(m, as).overlap_category].first;
    }
    for (const auto& m : result.unreachable) {
      ++per_category[classify_mention(m, as).overlap_category].second;
    }
    if (dump.is_open()) {
      dump << "# " << as.sentence.doc_id << "/" << as.sentence.index << "\n";
      for (const auto& a : result.actions) dump << to_string(a) << "\n";
      dump << "\n";
    }
  }

  std::ostringstream out;
  out << "sentences=" << corpus.size() << "\n";
  out << "reachable=" << reachable_total << "\n";
  out << "unreachable=" << unreachable_total << "\n";
  out << "sentences_with_unreachable=" << sentences_with_unreachable << "\n";
  for (const auto& [cat, counts] : per_category) {
    out << "category." << to_string(cat) << ".gold=" << counts.first << "\n";
    out << "category." << to_string(cat) << ".unreachable=" << counts.second << "\n";
  }
  emit(out.str(), args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transition-based discontinuous named-entity toolkit"};
  app.require_subcommand(1);
  // `key=value` lines; subcommand options live under a `[subcommand]`
  // section. Command-line flags override file values.
  app.set_config("--config", "", "configuration file (key=value, [subcommand] sections)");

  CorpusInput stats_input;
  std::string stats_out;
  auto* stats = app.add_subcommand("stats", "corpus statistics report");
  stats_input.attach(stats, "in");
  stats->add_option("--out", stats_out, "report path (default stdout)");

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand("convert", "convert between corpus formats");
  convert_args.input.attach(convert, "in");
  convert->add_option("--out-conll", convert_args.out_conll, "write two-column tag file");
  convert->add_flag("--out-bioext", convert_args.out_bioext,
                    "write extended tags instead of plain BIO");
  convert->add_option("--out-text", convert_args.out_text, "write standoff text file");
  convert->add_option("--out-ann", convert_args.out_ann, "write standoff annotation file");
  convert->add_flag("--flat-merge", convert_args.apply_flat_merge,
                    "replace discontinuous mentions by covering spans and merge overlaps "
                    "(training-set preprocessing for flat taggers)");

  AugmentArgs augment_args;
  auto* augment = app.add_subcommand("augment", "expand a training set with transforms");
  augment_args.input.attach(augment, "in");
  augment->add_option("--out", augment_args.out, "output tag file (default stdout)");
  augment->add_option("--method", augment_args.method, "lwtr | sr | mr | sis | all");
  augment->add_option("--p", augment_args.p, "per-token/mention replacement probability")
      ->check(CLI::Range(0.0, 1.0));
  augment->add_option("--per-instance", augment_args.per_instance,
                      "augmented instances per original");
  augment->add_option("--seed", augment_args.seed, "random seed");
  augment->add_option("--jobs", augment_args.jobs, "worker threads (output is order-stable)");
  augment->add_option("--lexicon", augment_args.lexicon_path,
                      "synonym lexicon (token<TAB>synonym[|synonym...])");
  augment->add_option("--stopwords", augment_args.stopword_path,
                      "stopword list overriding the built-in one");

  SimilarityArgs sim_args;
  auto* similarity = app.add_subcommand("similarity", "rank sources by similarity to a target");
  similarity->add_option("--source", sim_args.sources, "source text corpus (repeatable)")
      ->required();
  similarity->add_option("--target", sim_args.target, "target text corpus")->required();
  similarity->add_option("--out", sim_args.out, "report path (default stdout)");
  similarity->add_option("--mode", sim_args.mode, "perplexity aggregation: mean | summed");
  similarity->add_option("--stopwords", sim_args.stopword_path, "stopword list");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train the transition model");
  train_args.input.attach(train_cmd, "in");
  train_cmd->add_option("--model", train_args.model_out, "model output path")->required();
  train_cmd->add_option("--epochs", train_args.epochs, "training epochs");
  train_cmd->add_option("--seed", train_args.seed, "shuffling seed");

  TagArgs tag_args;
  auto* tag = app.add_subcommand("tag", "tag sentences with a trained model");
  tag->add_option("--model", tag_args.model_path, "model path")->required();
  tag->add_option("--in-text", tag_args.text, "text file, one sentence per line")->required();
  tag->add_option("--out-ann", tag_args.out_ann, "standoff annotation output (default stdout)");
  tag->add_option("--jobs", tag_args.jobs, "parallel decoding threads");

  EvalArgs eval_args;
  auto* evaluate = app.add_subcommand("evaluate", "strict-match evaluation");
  eval_args.gold.attach(evaluate, "gold");
  eval_args.pred.attach(evaluate, "pred");
  evaluate->add_option("--subset", eval_args.subset, "all | disc-sentences | disc-only");
  evaluate->add_option("--breakdown", eval_args.breakdown_axis,
                       "mention-length | interval-length | overlap-category");
  evaluate->add_option("--jobs", eval_args.jobs, "worker threads for counting");
  evaluate->add_option("--out", eval_args.out, "report path (default stdout)");

  OracleCheckArgs oracle_args;
  auto* oracle_check = app.add_subcommand("oracle-check", "oracle reachability diagnostics");
  oracle_args.input.attach(oracle_check, "in");
  oracle_check->add_option("--out", oracle_args.out, "report path (default stdout)");
  oracle_check->add_option("--dump-actions", oracle_args.dump_actions,
                           "write derived action traces, one action per line");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (stats->parsed()) return cmd_stats(stats_input, stats_out);
    if (convert->parsed()) return cmd_convert(convert_args);
    if (augment->parsed()) return cmd_augment(augment_args);
    if (similarity->parsed()) return cmd_similarity(sim_args);
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (tag->parsed()) return cmd_tag(tag_args);
    if (evaluate->parsed()) return cmd_evaluate(eval_args);
    if (oracle_check->parsed()) return cmd_oracle_check(oracle_args);
  } catch (const dner::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
