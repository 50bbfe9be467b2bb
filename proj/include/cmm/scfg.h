#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "cmm/logprob.h"
#include "cmm/symbols.h"
#include "cmm/treebank.h"

namespace cmm {

using RuleId = std::uint32_t;

struct PhraseRule {
  Category lhs = 0;
  std::vector<Category> rhs;
  double log_prob = kImpossible;
  std::uint32_t count = 0;
};

struct ScfgConfig {
  // Tags with more distinct training words than this are open-class and
  // reserve Witten-Bell mass for unknown words; smaller tags never emit
  // unknowns.
  std::size_t open_class_threshold = 50;
};

// Category-rewrite rules with relative-frequency probabilities, shared by
// every layer of the cascade. Houses both P(A -> X1..Xk) for phrase
// hypotheses and the lexical P(tag -> word) used at the POS layer.
class Scfg {
 public:
  Scfg();

  static Scfg estimate(const RuleCounts& counts, const ScfgConfig& config,
                       std::shared_ptr<SymbolTable> symbols);

  // Assembles an Scfg from already-estimated log probabilities (model load).
  static Scfg from_parameters(
      std::shared_ptr<SymbolTable> symbols, std::vector<PhraseRule> rules,
      std::vector<std::tuple<Category, std::string, double>> lexicon,
      std::vector<std::pair<Category, double>> unknown_log_mass);

  const std::shared_ptr<const SymbolTable>& symbols() const { return symbols_; }
  SymbolTable& mutable_symbols() { return *mutable_symbols_; }

  const std::vector<PhraseRule>& rules() const { return rules_; }
  const std::vector<RuleId>& rules_starting_with(Category first) const;
  std::optional<RuleId> find_rule(Category lhs, const std::vector<Category>& rhs) const;

  double rule_log_prob(RuleId id) const { return rules_[id].log_prob; }
  // kImpossible for rules never observed: hypotheses come only from seen rules.
  double rule_log_prob(Category lhs, const std::vector<Category>& rhs) const;

  // Relative-frequency emission probability, discounted by the tag's
  // unknown-word mass. Throws DataError for tags outside the lexicon; the
  // tag set is closed after training. Unseen words score kImpossible.
  double word_log_prob(Category tag, const std::string& word) const;

  // log of the reserved unknown-word mass; kImpossible for closed-class tags.
  double unknown_log_mass(Category tag) const;

  bool is_tag(Category category) const { return lexicon_.count(category) > 0; }
  bool is_known_word(const std::string& word) const { return word_tags_.count(word) > 0; }

  // Tags observed with this word, in tag-id order; empty for unknown words.
  const std::vector<std::pair<Category, double>>& tags_for_word(const std::string& word) const;
  const std::vector<Category>& open_class_tags() const { return open_tags_; }

  // Ordered views for serialization and reports.
  const std::map<Category, std::map<std::string, double>>& lexicon() const { return lexicon_; }
  const std::map<Category, double>& unknown_log_mass_by_tag() const { return unknown_mass_; }

 private:
  void build_indexes();

  std::shared_ptr<SymbolTable> mutable_symbols_;
  std::shared_ptr<const SymbolTable> symbols_;
  std::vector<PhraseRule> rules_;
  std::unordered_map<Category, std::vector<RuleId>> by_first_rhs_;
  std::map<std::pair<Category, std::vector<Category>>, RuleId> rule_index_;
  std::map<Category, std::map<std::string, double>> lexicon_;
  std::unordered_map<std::string, std::vector<std::pair<Category, double>>> word_tags_;
  std::map<Category, double> unknown_mass_;
  std::vector<Category> open_tags_;
};

}  // namespace cmm
