#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cmm/cascade.h"
#include "cmm/model.h"
#include "cmm/tree.h"

namespace cmm {

struct ChunkMetrics {
  std::uint64_t true_positives = 0;
  std::uint64_t gold_count = 0;
  std::uint64_t predicted_count = 0;
  bool labeled = true;
  double beta = 1.0;

  // Empty sides count as perfect: nothing predicted means no false alarms,
  // nothing gold means nothing missed.
  double precision() const {
    return predicted_count == 0
               ? 1.0
               : static_cast<double>(true_positives) / predicted_count;
  }
  double recall() const {
    return gold_count == 0 ? 1.0
                           : static_cast<double>(true_positives) / gold_count;
  }
  double f() const;

  void merge(const ChunkMetrics& other);
};

// Weighted precision/recall combination; beta balances the two and beta = 1
// gives the harmonic mean. Zero when both inputs are zero.
double f_score(double precision, double recall, double beta);

// Span comparison over nonterminal nodes: a predicted node matches a gold
// node when their token spans coincide and, if labeled, the categories too.
// Throws DataError when the token sequences disagree.
ChunkMetrics compare(const std::vector<SyntaxTree>& gold, const PartialParse& predicted,
                     bool labeled, double beta = 1.0);

// The recall ceiling of an L-layer cascade: the fraction of gold nonterminal
// nodes at layer <= L, counted over the whole corpus.
double topline_recall(const std::vector<SyntaxTree>& corpus, int max_layer);

struct PosCounts {
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  double ratio() const { return total == 0 ? 1.0 : static_cast<double>(correct) / total; }
};

PosCounts pos_accuracy(const std::vector<SyntaxTree>& gold, const PartialParse& predicted);

struct CrossValidationConfig {
  TrainConfig train;
  double theta = 5.0;
  double beta = 1.0;
  bool labeled = true;
  std::uint64_t seed = 1;
  int repetitions = 10;
  double train_fraction = 0.9;
};

struct LayerReportRow {
  int layers = 0;
  double recall = 0;
  double precision = 0;
  double f = 0;
  double topline = 0;
  double pos_accuracy = 0;
  std::uint64_t failed_sentences = 0;
};

// Seeded train/test splits, repeated and averaged; one row per cascade
// depth 1..max_layer. Sentences the parser rejects count as empty
// predictions. Requires at least 10 sentences.
std::vector<LayerReportRow> cross_validate(const std::vector<SyntaxTree>& corpus,
                                           const CrossValidationConfig& config);

std::string report_to_tsv(const std::vector<LayerReportRow>& rows);

// Fisher-Yates with an explicit generator so every platform shuffles alike.
void deterministic_shuffle(std::vector<std::size_t>* indices, std::uint64_t seed);

}  // namespace cmm
