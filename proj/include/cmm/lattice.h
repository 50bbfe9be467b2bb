#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "cmm/logprob.h"
#include "cmm/scfg.h"
#include "cmm/symbols.h"

namespace cmm {

struct DerivationNode;
using DerivationPtr = std::shared_ptr<const DerivationNode>;

// The partial parse tree emitted by an edge. Derivations are self-contained:
// an edge keeps its structure even after the edges it was built from have
// been pruned away.
struct DerivationNode {
  Category category = 0;
  std::string word;                   // leaves
  std::optional<RuleId> rule;         // internal nodes
  double local_log_prob = 0.0;        // leaf: emission; internal: rule probability
  double log_delta = 0.0;             // local + children
  std::vector<DerivationPtr> children;

  bool is_leaf() const { return !rule.has_value(); }
};

DerivationPtr make_leaf_derivation(Category tag, std::string word, double log_prob);
DerivationPtr make_phrase_derivation(Category category, RuleId rule, double rule_log_prob,
                                     std::vector<DerivationPtr> children);

// Total structural order; the tie-break of last resort everywhere.
int compare_derivations(const DerivationNode& a, const DerivationNode& b);

using EdgeId = std::uint32_t;

struct Edge {
  int start = 0;
  int end = 0;
  Category category = 0;
  double log_delta = kImpossible;  // probability of deriving the covered words
  DerivationPtr derivation;
  int origin_layer = 0;
};

// Deterministic order used by every argmax tie-break:
// (start, category, derivation structure).
bool edge_precedes(const Edge& a, const Edge& b);

// Word-boundary nodes 0..T with category hypotheses as edges. Holds at most
// one edge per (start, end, category); competing derivations for the same
// triple are merged keeping the larger delta.
class Lattice {
 public:
  Lattice() = default;
  Lattice(std::vector<std::string> words, int layer,
          std::shared_ptr<const SymbolTable> symbols);

  int word_count() const { return static_cast<int>(words_.size()); }
  int layer() const { return layer_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::shared_ptr<const SymbolTable>& symbols() const { return symbols_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId id) const { return edges_[id]; }
  std::size_t size() const { return edges_.size(); }
  const std::vector<EdgeId>& starting_at(int node) const { return by_start_[node]; }
  const std::vector<EdgeId>& ending_at(int node) const { return by_end_[node]; }
  std::optional<EdgeId> find(int start, int end, Category category) const;

  // Inserts or max-merges; returns the edge's id. Ties on delta keep the
  // structurally smaller derivation.
  EdgeId insert(Edge edge);

  // Rebuilds the lattice with only the flagged edges.
  Lattice restricted_to(const std::vector<bool>& keep) const;

  // Removes edges that lie on no complete 0..T path.
  void drop_disconnected();

  // Sets the layer index and clears edge "new at this layer" status.
  void advance_layer() { ++layer_; }

  bool edge_is_new(EdgeId id) const { return edges_[id].origin_layer == layer_; }

  // One line per edge: idx, span, category, -log delta, '*' when new at this
  // layer, and the lattice indices of the derivation children when present.
  std::string dump() const;

 private:
  std::vector<std::string> words_;
  int layer_ = 0;
  std::shared_ptr<const SymbolTable> symbols_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> by_start_;
  std::vector<std::vector<EdgeId>> by_end_;
  std::map<std::tuple<int, int, Category>, EdgeId> by_span_category_;
};

// Layer 0: one edge per word and candidate tag; unknown words receive one
// edge per open-class tag. Throws DataError naming the word when a word has
// no candidate at all.
Lattice pos_lattice(const std::vector<std::string>& words, const Scfg& scfg);

// The next layer's hypothesis space: the base edges plus one new edge for
// every grammar rule matching a contiguous path of base edges. Rule matching
// never consumes edges created by this same call, so each call adds exactly
// one layer of structure.
Lattice expand_layer(const Lattice& base, const Scfg& scfg);

// Recomputes an edge's delta from its derivation.
double yield_log_prob(const Edge& edge);

}  // namespace cmm
