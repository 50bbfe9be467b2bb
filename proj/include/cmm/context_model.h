#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "cmm/logprob.h"
#include "cmm/symbols.h"

namespace cmm {

// Event counts of one layer's training sequences. Every sequence contributes
// a closing kBoundaryEnd event; trigram contexts are left-padded with two
// kBoundaryStart symbols.
struct NgramCounts {
  std::map<Category, std::uint64_t> unigram;
  std::map<std::pair<Category, Category>, std::uint64_t> bigram;
  std::map<std::tuple<Category, Category, Category>, std::uint64_t> trigram;
  std::map<Category, std::uint64_t> bigram_context;
  std::map<std::pair<Category, Category>, std::uint64_t> trigram_context;
  std::uint64_t total_events = 0;
  std::uint64_t sequences = 0;

  void add_sequence(const std::vector<Category>& symbols);
};

struct InterpolationWeights {
  double unigram = 1.0;
  double bigram = 0.0;
  double trigram = 0.0;
};

struct ContextModelConfig {
  // Fixes the interpolation weights instead of estimating them.
  std::optional<InterpolationWeights> lambda_override;
  // Whether categories outside this layer's inventory score the unigram
  // floor (higher layers routinely ask about phrases this layer never saw).
  // When false such lookups throw.
  bool allow_unknown_categories = true;
};

// One layer's Markov context model: maximum-likelihood uni-, bi- and trigram
// category distributions combined by linear interpolation.
class ContextModel {
 public:
  static ContextModel estimate(int layer, const NgramCounts& counts,
                               const ContextModelConfig& config = {});

  // Rebuilds a model from serialized parameters (model load).
  static ContextModel from_parameters(
      int layer, InterpolationWeights lambdas, std::uint64_t total_events,
      std::vector<std::pair<Category, double>> unigrams,
      std::vector<std::tuple<Category, Category, double>> bigrams,
      std::vector<std::tuple<Category, Category, Category, double>> trigrams,
      bool allow_unknown_categories = true);

  // P(q | prev2, prev1). Interpolation weights of components whose
  // conditioning context was never observed are dropped and the rest
  // renormalized, so the result is a proper distribution over the
  // inventory plus kBoundaryEnd for every context.
  double transition_log_prob(Category q, Category prev2, Category prev1) const;

  int layer() const { return layer_; }
  const InterpolationWeights& lambdas() const { return lambdas_; }
  std::uint64_t total_events() const { return total_events_; }

  // Event categories observed at this layer, ascending, without kBoundaryEnd.
  const std::vector<Category>& inventory() const { return inventory_; }
  bool in_inventory(Category q) const;

  // Maximum-likelihood components; kImpossible when unseen.
  double unigram_log_prob(Category q) const;
  double bigram_log_prob(Category q, Category prev1) const;
  double trigram_log_prob(Category q, Category prev2, Category prev1) const;

  // Raw training counts; zero on models restored from a file.
  std::uint64_t unigram_count(Category q) const;
  std::uint64_t trigram_count(Category prev2, Category prev1, Category q) const;

  // Ordered views for serialization.
  const std::map<Category, double>& unigram_table() const { return log_unigram_; }
  const std::map<std::pair<Category, Category>, double>& bigram_table() const {
    return log_bigram_;
  }
  const std::map<std::tuple<Category, Category, Category>, double>& trigram_table() const {
    return log_trigram_;
  }

 private:
  int layer_ = 0;
  InterpolationWeights lambdas_;
  std::uint64_t total_events_ = 0;
  bool allow_unknown_categories_ = true;
  double floor_prob_ = 0.0;  // unigram stand-in for out-of-inventory categories

  std::map<Category, double> log_unigram_;
  std::map<std::pair<Category, Category>, double> log_bigram_;
  std::map<std::tuple<Category, Category, Category>, double> log_trigram_;
  std::vector<Category> inventory_;
  std::vector<Category> seen_bigram_contexts_;                     // sorted
  std::vector<std::pair<Category, Category>> seen_trigram_contexts_;  // sorted

  NgramCounts counts_;  // kept for inspection; empty after from_parameters

  void finalize();
};

// Deleted interpolation: each trigram event credits the weight whose
// leave-one-out component estimate is largest; credits are normalized to
// sum to one. Falls back to pure unigram weights if nothing earns credit.
InterpolationWeights deleted_interpolation(const NgramCounts& counts);

}  // namespace cmm
