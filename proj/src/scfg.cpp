#include "cmm/scfg.h"

#include <algorithm>
#include <cmath>

#include "cmm/errors.h"

namespace cmm {

Scfg::Scfg()
    : mutable_symbols_(std::make_shared<SymbolTable>()),
      symbols_(mutable_symbols_) {}

Scfg Scfg::estimate(const RuleCounts& counts, const ScfgConfig& config,
                    std::shared_ptr<SymbolTable> symbols) {
  if (counts.lexical.empty()) throw DataError("no lexical rules to estimate from");

  // Relative frequencies per lhs. RuleCounts is ordered, so rule ids and
  // intern order are reproducible.
  std::map<Category, std::uint64_t> lhs_totals;
  std::vector<PhraseRule> rules;
  rules.reserve(counts.phrase.size());
  for (const auto& [key, count] : counts.phrase) {
    PhraseRule rule;
    rule.lhs = symbols->intern(key.first);
    rule.rhs.reserve(key.second.size());
    for (const std::string& symbol : key.second) rule.rhs.push_back(symbols->intern(symbol));
    rule.count = count;
    lhs_totals[rule.lhs] += count;
    rules.push_back(std::move(rule));
  }
  for (PhraseRule& rule : rules) {
    rule.log_prob = log_of(static_cast<double>(rule.count) /
                           static_cast<double>(lhs_totals[rule.lhs]));
  }

  struct TagStats {
    std::uint64_t tokens = 0;
    std::uint64_t distinct = 0;
  };
  std::map<Category, TagStats> tag_stats;
  for (const auto& [key, count] : counts.lexical) {
    TagStats& stats = tag_stats[symbols->intern(key.first)];
    stats.tokens += count;
    stats.distinct += 1;
  }

  // Witten-Bell mass for unknown words: distinct / (distinct + tokens),
  // reserved only for open-class tags.
  std::vector<std::pair<Category, double>> unknown_mass;
  std::map<Category, double> seen_scale;
  for (const auto& [tag, stats] : tag_stats) {
    if (stats.distinct > config.open_class_threshold) {
      double mass = static_cast<double>(stats.distinct) /
                    static_cast<double>(stats.distinct + stats.tokens);
      unknown_mass.emplace_back(tag, std::log(mass));
      seen_scale[tag] = 1.0 - mass;
    } else {
      seen_scale[tag] = 1.0;
    }
  }

  std::vector<std::tuple<Category, std::string, double>> lexicon;
  lexicon.reserve(counts.lexical.size());
  for (const auto& [key, count] : counts.lexical) {
    Category tag = *symbols->find(key.first);
    double prob = seen_scale[tag] * static_cast<double>(count) /
                  static_cast<double>(tag_stats[tag].tokens);
    lexicon.emplace_back(tag, key.second, log_of(prob));
  }

  return from_parameters(std::move(symbols), std::move(rules), std::move(lexicon),
                         std::move(unknown_mass));
}

Scfg Scfg::from_parameters(
    std::shared_ptr<SymbolTable> symbols, std::vector<PhraseRule> rules,
    std::vector<std::tuple<Category, std::string, double>> lexicon,
    std::vector<std::pair<Category, double>> unknown_log_mass) {
  Scfg scfg;
  scfg.mutable_symbols_ = std::move(symbols);
  scfg.symbols_ = scfg.mutable_symbols_;
  scfg.rules_ = std::move(rules);
  for (const auto& [tag, word, log_prob] : lexicon) {
    scfg.lexicon_[tag][word] = log_prob;
  }
  for (const auto& [tag, log_mass] : unknown_log_mass) {
    scfg.unknown_mass_[tag] = log_mass;
    scfg.open_tags_.push_back(tag);
  }
  std::sort(scfg.open_tags_.begin(), scfg.open_tags_.end());
  scfg.build_indexes();
  return scfg;
}

void Scfg::build_indexes() {
  by_first_rhs_.clear();
  rule_index_.clear();
  for (RuleId id = 0; id < rules_.size(); ++id) {
    const PhraseRule& rule = rules_[id];
    if (rule.rhs.empty()) throw DataError("phrase rule with empty right side");
    by_first_rhs_[rule.rhs.front()].push_back(id);
    auto [it, inserted] = rule_index_.emplace(std::make_pair(rule.lhs, rule.rhs), id);
    if (!inserted) throw DataError("duplicate phrase rule");
  }
  word_tags_.clear();
  for (const auto& [tag, words] : lexicon_) {
    for (const auto& [word, log_prob] : words) {
      word_tags_[word].emplace_back(tag, log_prob);
    }
  }
  for (auto& [word, tags] : word_tags_) {
    std::sort(tags.begin(), tags.end());
  }
}

const std::vector<RuleId>& Scfg::rules_starting_with(Category first) const {
  static const std::vector<RuleId> empty;
  auto it = by_first_rhs_.find(first);
  return it == by_first_rhs_.end() ? empty : it->second;
}

std::optional<RuleId> Scfg::find_rule(Category lhs,
                                      const std::vector<Category>& rhs) const {
  auto it = rule_index_.find(std::make_pair(lhs, rhs));
  if (it == rule_index_.end()) return std::nullopt;
  return it->second;
}

double Scfg::rule_log_prob(Category lhs, const std::vector<Category>& rhs) const {
  auto id = find_rule(lhs, rhs);
  return id ? rules_[*id].log_prob : kImpossible;
}

double Scfg::word_log_prob(Category tag, const std::string& word) const {
  auto tag_it = lexicon_.find(tag);
  if (tag_it == lexicon_.end()) {
    std::string label = tag < symbols_->size() ? symbols_->name(tag)
                                               : "#" + std::to_string(tag);
    throw DataError("unknown tag: " + label);
  }
  auto word_it = tag_it->second.find(word);
  if (word_it != tag_it->second.end()) return word_it->second;
  if (is_known_word(word)) return kImpossible;
  return unknown_log_mass(tag);
}

double Scfg::unknown_log_mass(Category tag) const {
  auto it = unknown_mass_.find(tag);
  return it == unknown_mass_.end() ? kImpossible : it->second;
}

const std::vector<std::pair<Category, double>>& Scfg::tags_for_word(
    const std::string& word) const {
  static const std::vector<std::pair<Category, double>> empty;
  auto it = word_tags_.find(word);
  return it == word_tags_.end() ? empty : it->second;
}

}  // namespace cmm
