#include "cmm/eval.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "cmm/errors.h"

namespace cmm {

double f_score(double precision, double recall, double beta) {
  if (beta <= 0.0) throw ConfigError("beta must be > 0");
  double denominator = beta * beta * precision + recall;
  if (denominator == 0.0) return 0.0;
  return (beta * beta + 1.0) * precision * recall / denominator;
}

double ChunkMetrics::f() const { return f_score(precision(), recall(), beta); }

void ChunkMetrics::merge(const ChunkMetrics& other) {
  true_positives += other.true_positives;
  gold_count += other.gold_count;
  predicted_count += other.predicted_count;
}

namespace {

// (start, end, category); category is empty for unlabeled comparison.
using SpanKey = std::tuple<int, int, std::string>;

void collect_spans(const SyntaxTree& tree, bool labeled, int start,
                   std::map<SpanKey, std::uint64_t>* spans) {
  if (tree.is_leaf()) return;
  int width = static_cast<int>(yield_size(tree));
  SpanKey key{start, start + width, labeled ? tree.category : std::string()};
  ++(*spans)[key];
  int child_start = start;
  for (const SyntaxTree& child : tree.children) {
    collect_spans(child, labeled, child_start, spans);
    child_start += static_cast<int>(yield_size(child));
  }
}

std::map<SpanKey, std::uint64_t> forest_spans(const std::vector<SyntaxTree>& forest,
                                              bool labeled) {
  std::map<SpanKey, std::uint64_t> spans;
  int start = 0;
  for (const SyntaxTree& tree : forest) {
    collect_spans(tree, labeled, start, &spans);
    start += static_cast<int>(yield_size(tree));
  }
  return spans;
}

std::vector<std::string> forest_words(const std::vector<SyntaxTree>& forest) {
  std::vector<std::string> words;
  for (const SyntaxTree& tree : forest) {
    for (const Token& token : tree_yield(tree)) words.push_back(token.word);
  }
  return words;
}

}  // namespace

ChunkMetrics compare(const std::vector<SyntaxTree>& gold, const PartialParse& predicted,
                     bool labeled, double beta) {
  std::vector<std::string> gold_words = forest_words(gold);
  if (gold_words.size() != predicted.tokens.size()) {
    throw DataError("gold and predicted token sequences differ in length");
  }
  for (std::size_t i = 0; i < gold_words.size(); ++i) {
    if (gold_words[i] != predicted.tokens[i].word) {
      throw DataError("gold and predicted tokens differ at position " +
                      std::to_string(i));
    }
  }

  std::map<SpanKey, std::uint64_t> gold_spans = forest_spans(gold, labeled);
  std::map<SpanKey, std::uint64_t> predicted_spans =
      forest_spans(predicted.forest, labeled);

  ChunkMetrics metrics;
  metrics.labeled = labeled;
  metrics.beta = beta;
  for (const auto& [key, count] : gold_spans) metrics.gold_count += count;
  for (const auto& [key, count] : predicted_spans) metrics.predicted_count += count;
  for (const auto& [key, count] : gold_spans) {
    auto it = predicted_spans.find(key);
    if (it != predicted_spans.end()) {
      metrics.true_positives += std::min(count, it->second);
    }
  }
  return metrics;
}

namespace {

void count_by_layer(const SyntaxTree& tree, int max_layer, std::uint64_t* within,
                    std::uint64_t* total) {
  if (tree.is_leaf()) return;
  ++*total;
  if (tree_layer(tree) <= max_layer) ++*within;
  for (const SyntaxTree& child : tree.children) {
    count_by_layer(child, max_layer, within, total);
  }
}

}  // namespace

double topline_recall(const std::vector<SyntaxTree>& corpus, int max_layer) {
  std::uint64_t within = 0, total = 0;
  for (const SyntaxTree& tree : corpus) count_by_layer(tree, max_layer, &within, &total);
  return total == 0 ? 1.0 : static_cast<double>(within) / static_cast<double>(total);
}

PosCounts pos_accuracy(const std::vector<SyntaxTree>& gold, const PartialParse& predicted) {
  std::vector<Token> gold_tokens;
  for (const SyntaxTree& tree : gold) {
    for (Token& token : tree_yield(tree)) gold_tokens.push_back(std::move(token));
  }
  if (gold_tokens.size() != predicted.tokens.size()) {
    throw DataError("gold and predicted token sequences differ in length");
  }
  PosCounts counts;
  counts.total = gold_tokens.size();
  for (std::size_t i = 0; i < gold_tokens.size(); ++i) {
    if (gold_tokens[i].word != predicted.tokens[i].word) {
      throw DataError("gold and predicted tokens differ at position " +
                      std::to_string(i));
    }
    if (gold_tokens[i].tag == predicted.tokens[i].tag) ++counts.correct;
  }
  return counts;
}

void deterministic_shuffle(std::vector<std::size_t>* indices, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = indices->size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap((*indices)[i - 1], (*indices)[j]);
  }
}

std::vector<LayerReportRow> cross_validate(const std::vector<SyntaxTree>& corpus,
                                           const CrossValidationConfig& config) {
  if (corpus.size() < 10) throw DataError("corpus too small to split (< 10 sentences)");
  if (config.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (!(config.theta >= 1.0)) throw ConfigError("theta must be >= 1");
  if (config.beta <= 0.0) throw ConfigError("beta must be > 0");
  int max_layer = config.train.max_layer;

  std::vector<LayerReportRow> rows(max_layer);
  for (int depth = 1; depth <= max_layer; ++depth) rows[depth - 1].layers = depth;

  for (int rep = 0; rep < config.repetitions; ++rep) {
    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    deterministic_shuffle(&order, config.seed + static_cast<std::uint64_t>(rep));

    std::size_t train_size =
        static_cast<std::size_t>(corpus.size() * config.train_fraction);
    train_size = std::max<std::size_t>(1, std::min(train_size, corpus.size() - 1));
    std::vector<SyntaxTree> train_trees, test_trees;
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < train_size ? train_trees : test_trees).push_back(corpus[order[i]]);
    }

    // One training run serves every cascade depth: layer models are
    // estimated independently and the grammar is shared.
    ModelBundle bundle = train(train_trees, config.train);

    for (int depth = 1; depth <= max_layer; ++depth) {
      LayerReportRow& row = rows[depth - 1];
      ChunkMetrics metrics;
      metrics.labeled = config.labeled;
      metrics.beta = config.beta;
      PosCounts pos;
      for (const SyntaxTree& tree : test_trees) {
        std::vector<std::string> words;
        for (const Token& token : tree_yield(tree)) words.push_back(token.word);
        std::vector<SyntaxTree> gold{tree};
        ParseOptions options;
        options.theta = config.theta;
        options.max_layer = depth;
        try {
          PartialParse parse = parse_sentence(words, bundle, options);
          metrics.merge(compare(gold, parse, config.labeled, config.beta));
          PosCounts sentence_pos = pos_accuracy(gold, parse);
          pos.correct += sentence_pos.correct;
          pos.total += sentence_pos.total;
        } catch (const std::runtime_error&) {
          // Unparseable sentence: all gold nodes missed, no predictions.
          std::uint64_t within = 0, total = 0;
          count_by_layer(tree, 0, &within, &total);
          metrics.gold_count += total;
          pos.total += tree_yield(tree).size();
          row.failed_sentences += 1;
        }
      }
      row.recall += metrics.recall();
      row.precision += metrics.precision();
      row.f += metrics.f();
      row.topline += topline_recall(test_trees, depth);
      row.pos_accuracy += pos.ratio();
    }
  }

  for (LayerReportRow& row : rows) {
    row.recall /= config.repetitions;
    row.precision /= config.repetitions;
    row.f /= config.repetitions;
    row.topline /= config.repetitions;
    row.pos_accuracy /= config.repetitions;
  }
  return rows;
}

std::string report_to_tsv(const std::vector<LayerReportRow>& rows) {
  std::ostringstream out;
  out << "layers\trecall\tprecision\tfscore\ttopline_recall\tpos_accuracy\n";
  for (const LayerReportRow& row : rows) {
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), "%d\t%.4f\t%.4f\t%.4f\t%.4f\t%.4f\n",
                  row.layers, row.recall, row.precision, row.f, row.topline,
                  row.pos_accuracy);
    out << buffer;
  }
  return out.str();
}

}  // namespace cmm
