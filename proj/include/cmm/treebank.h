#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cmm/tree.h"

namespace cmm {

struct TreebankOptions {
  // When non-zero, category labels are cut at the first occurrence of this
  // delimiter. Some treebanks append grammatical functions as suffixes
  // ("NP-SBJ"); those are outside the chunking task.
  char strip_suffix_delimiter = '\0';
};

// Reads bracketed trees, one per top-level parenthesized expression.
// Leaves are written "(TAG word)", inner nodes "(CAT child child ...)".
// '#' starts a comment line, blank lines are skipped, and literal
// parentheses inside words are escaped as -LRB- / -RRB-.
std::vector<SyntaxTree> read_treebank(std::istream& input,
                                      const TreebankOptions& options = {});
std::vector<SyntaxTree> read_treebank_file(const std::string& path,
                                           const TreebankOptions& options = {});

void write_treebank(const std::vector<SyntaxTree>& trees, std::ostream& out);

struct LayerSequence {
  int layer = 0;
  std::vector<std::string> symbols;
  // Token span [first, last) covered by each symbol; parallel to symbols.
  std::vector<std::pair<int, int>> spans;
};

// One training sequence per layer 0..max_layer. The sequence at layer l
// lists, left to right, the highest node of layer <= l over each maximal
// span; layer 0 is the POS tag sequence.
std::vector<LayerSequence> layer_sequences(const SyntaxTree& tree, int max_layer);

struct Rule {
  std::string lhs;
  std::vector<std::string> rhs;  // phrase rule: child categories in order
  std::string word;              // lexical rule: the emitted word
  bool lexical = false;
  std::uint32_t count = 0;

  bool operator==(const Rule&) const = default;
};

// The rule occurrences of one tree, aggregated and sorted: one phrase rule
// per internal node, one lexical rule per leaf.
std::vector<Rule> collect_rules(const SyntaxTree& tree);

// Accumulating form of collect_rules for whole corpora. Map keys are ordered,
// which fixes the estimation and serialization order.
struct RuleCounts {
  std::map<std::pair<std::string, std::vector<std::string>>, std::uint32_t> phrase;
  std::map<std::pair<std::string, std::string>, std::uint32_t> lexical;

  void add_tree(const SyntaxTree& tree);
};

}  // namespace cmm
