#include "cmm/context_model.h"

#include <algorithm>
#include <cmath>

#include "cmm/errors.h"

namespace cmm {

void NgramCounts::add_sequence(const std::vector<Category>& symbols) {
  ++sequences;
  Category prev2 = kBoundaryStart;
  Category prev1 = kBoundaryStart;
  auto record = [&](Category event) {
    ++unigram[event];
    ++bigram[{prev1, event}];
    ++trigram[{prev2, prev1, event}];
    ++bigram_context[prev1];
    ++trigram_context[{prev2, prev1}];
    ++total_events;
    prev2 = prev1;
    prev1 = event;
  };
  for (Category symbol : symbols) record(symbol);
  record(kBoundaryEnd);
}

InterpolationWeights deleted_interpolation(const NgramCounts& counts) {
  double credit_uni = 0.0, credit_bi = 0.0, credit_tri = 0.0;
  for (const auto& [key, count] : counts.trigram) {
    const auto& [prev2, prev1, event] = key;
    double held_out = static_cast<double>(count);

    auto ratio = [](std::uint64_t numer, std::uint64_t denom) {
      return denom > 1 ? (static_cast<double>(numer) - 1.0) /
                             (static_cast<double>(denom) - 1.0)
                       : 0.0;
    };
    double d_tri = ratio(count, counts.trigram_context.at({prev2, prev1}));
    double d_bi = ratio(counts.bigram.at({prev1, event}), counts.bigram_context.at(prev1));
    double d_uni = ratio(counts.unigram.at(event), counts.total_events);

    double best = std::max({d_uni, d_bi, d_tri});
    if (best <= 0.0) continue;
    // Ties split the credit evenly.
    int winners = (d_uni == best) + (d_bi == best) + (d_tri == best);
    double share = held_out / winners;
    if (d_uni == best) credit_uni += share;
    if (d_bi == best) credit_bi += share;
    if (d_tri == best) credit_tri += share;
  }

  double total = credit_uni + credit_bi + credit_tri;
  if (total <= 0.0) return InterpolationWeights{1.0, 0.0, 0.0};
  return InterpolationWeights{credit_uni / total, credit_bi / total, credit_tri / total};
}

ContextModel ContextModel::estimate(int layer, const NgramCounts& counts,
                                    const ContextModelConfig& config) {
  if (counts.total_events == 0) throw DataError("no events to estimate a context model from");

  ContextModel model;
  model.layer_ = layer;
  model.total_events_ = counts.total_events;
  model.allow_unknown_categories_ = config.allow_unknown_categories;
  model.lambdas_ = config.lambda_override ? *config.lambda_override
                                          : deleted_interpolation(counts);

  double lambda_sum =
      model.lambdas_.unigram + model.lambdas_.bigram + model.lambdas_.trigram;
  if (model.lambdas_.unigram < 0 || model.lambdas_.bigram < 0 ||
      model.lambdas_.trigram < 0 || std::abs(lambda_sum - 1.0) > 1e-9) {
    throw ConfigError("interpolation weights must be nonnegative and sum to 1");
  }

  double total = static_cast<double>(counts.total_events);
  for (const auto& [event, count] : counts.unigram) {
    model.log_unigram_[event] = log_of(static_cast<double>(count) / total);
  }
  for (const auto& [key, count] : counts.bigram) {
    double context_total = static_cast<double>(counts.bigram_context.at(key.first));
    model.log_bigram_[key] = log_of(static_cast<double>(count) / context_total);
  }
  for (const auto& [key, count] : counts.trigram) {
    double context_total = static_cast<double>(
        counts.trigram_context.at({std::get<0>(key), std::get<1>(key)}));
    model.log_trigram_[key] = log_of(static_cast<double>(count) / context_total);
  }
  model.counts_ = counts;
  model.finalize();
  return model;
}

ContextModel ContextModel::from_parameters(
    int layer, InterpolationWeights lambdas, std::uint64_t total_events,
    std::vector<std::pair<Category, double>> unigrams,
    std::vector<std::tuple<Category, Category, double>> bigrams,
    std::vector<std::tuple<Category, Category, Category, double>> trigrams,
    bool allow_unknown_categories) {
  ContextModel model;
  model.layer_ = layer;
  model.lambdas_ = lambdas;
  model.total_events_ = total_events;
  model.allow_unknown_categories_ = allow_unknown_categories;
  for (const auto& [event, log_prob] : unigrams) model.log_unigram_[event] = log_prob;
  for (const auto& [prev1, event, log_prob] : bigrams) {
    model.log_bigram_[{prev1, event}] = log_prob;
  }
  for (const auto& [prev2, prev1, event, log_prob] : trigrams) {
    model.log_trigram_[{prev2, prev1, event}] = log_prob;
  }
  model.finalize();
  return model;
}

void ContextModel::finalize() {
  inventory_.clear();
  for (const auto& [event, log_prob] : log_unigram_) {
    if (event != kBoundaryEnd) inventory_.push_back(event);
  }
  seen_bigram_contexts_.clear();
  for (const auto& [key, log_prob] : log_bigram_) {
    seen_bigram_contexts_.push_back(key.first);
  }
  seen_trigram_contexts_.clear();
  for (const auto& [key, log_prob] : log_trigram_) {
    seen_trigram_contexts_.emplace_back(std::get<0>(key), std::get<1>(key));
  }
  auto dedup = [](auto& v) { v.erase(std::unique(v.begin(), v.end()), v.end()); };
  dedup(seen_bigram_contexts_);
  dedup(seen_trigram_contexts_);
  floor_prob_ = 1.0 / (static_cast<double>(total_events_) + 1.0);
}

bool ContextModel::in_inventory(Category q) const {
  return std::binary_search(inventory_.begin(), inventory_.end(), q);
}

double ContextModel::unigram_log_prob(Category q) const {
  auto it = log_unigram_.find(q);
  return it == log_unigram_.end() ? kImpossible : it->second;
}

double ContextModel::bigram_log_prob(Category q, Category prev1) const {
  auto it = log_bigram_.find({prev1, q});
  return it == log_bigram_.end() ? kImpossible : it->second;
}

double ContextModel::trigram_log_prob(Category q, Category prev2, Category prev1) const {
  auto it = log_trigram_.find({prev2, prev1, q});
  return it == log_trigram_.end() ? kImpossible : it->second;
}

std::uint64_t ContextModel::unigram_count(Category q) const {
  auto it = counts_.unigram.find(q);
  return it == counts_.unigram.end() ? 0 : it->second;
}

std::uint64_t ContextModel::trigram_count(Category prev2, Category prev1,
                                          Category q) const {
  auto it = counts_.trigram.find({prev2, prev1, q});
  return it == counts_.trigram.end() ? 0 : it->second;
}

double ContextModel::transition_log_prob(Category q, Category prev2,
                                         Category prev1) const {
  double p_uni;
  auto uni_it = log_unigram_.find(q);
  if (uni_it != log_unigram_.end()) {
    p_uni = std::exp(uni_it->second);
  } else if (allow_unknown_categories_) {
    p_uni = floor_prob_;
  } else {
    throw DataError("category not in this layer's inventory");
  }

  // Components whose conditioning context was never seen contribute no
  // weight; the remaining weights are renormalized so every context yields
  // a proper distribution.
  double weight = lambdas_.unigram;
  double mass = lambdas_.unigram * p_uni;
  if (std::binary_search(seen_bigram_contexts_.begin(), seen_bigram_contexts_.end(),
                         prev1)) {
    weight += lambdas_.bigram;
    auto it = log_bigram_.find({prev1, q});
    if (it != log_bigram_.end()) mass += lambdas_.bigram * std::exp(it->second);
  }
  if (std::binary_search(seen_trigram_contexts_.begin(), seen_trigram_contexts_.end(),
                         std::make_pair(prev2, prev1))) {
    weight += lambdas_.trigram;
    auto it = log_trigram_.find({prev2, prev1, q});
    if (it != log_trigram_.end()) mass += lambdas_.trigram * std::exp(it->second);
  }
  if (weight <= 0.0) return kImpossible;
  return log_of(mass / weight);
}

}  // namespace cmm
