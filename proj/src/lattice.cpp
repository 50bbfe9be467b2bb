#include "cmm/lattice.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "cmm/errors.h"

namespace cmm {

DerivationPtr make_leaf_derivation(Category tag, std::string word, double log_prob) {
  auto node = std::make_shared<DerivationNode>();
  node->category = tag;
  node->word = std::move(word);
  node->local_log_prob = log_prob;
  node->log_delta = log_prob;
  return node;
}

DerivationPtr make_phrase_derivation(Category category, RuleId rule,
                                     double rule_log_prob,
                                     std::vector<DerivationPtr> children) {
  auto node = std::make_shared<DerivationNode>();
  node->category = category;
  node->rule = rule;
  node->local_log_prob = rule_log_prob;
  node->log_delta = rule_log_prob;
  for (const DerivationPtr& child : children) node->log_delta += child->log_delta;
  node->children = std::move(children);
  return node;
}

int compare_derivations(const DerivationNode& a, const DerivationNode& b) {
  if (a.category != b.category) return a.category < b.category ? -1 : 1;
  if (a.is_leaf() != b.is_leaf()) return a.is_leaf() ? -1 : 1;
  if (a.is_leaf()) return a.word.compare(b.word);
  if (*a.rule != *b.rule) return *a.rule < *b.rule ? -1 : 1;
  if (a.children.size() != b.children.size()) {
    return a.children.size() < b.children.size() ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    int c = compare_derivations(*a.children[i], *b.children[i]);
    if (c != 0) return c;
  }
  return 0;
}

bool edge_precedes(const Edge& a, const Edge& b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.category != b.category) return a.category < b.category;
  return compare_derivations(*a.derivation, *b.derivation) < 0;
}

Lattice::Lattice(std::vector<std::string> words, int layer,
                 std::shared_ptr<const SymbolTable> symbols)
    : words_(std::move(words)),
      layer_(layer),
      symbols_(std::move(symbols)),
      by_start_(words_.size() + 1),
      by_end_(words_.size() + 1) {}

std::optional<EdgeId> Lattice::find(int start, int end, Category category) const {
  auto it = by_span_category_.find({start, end, category});
  if (it == by_span_category_.end()) return std::nullopt;
  return it->second;
}

EdgeId Lattice::insert(Edge edge) {
  auto key = std::make_tuple(edge.start, edge.end, edge.category);
  auto it = by_span_category_.find(key);
  if (it != by_span_category_.end()) {
    Edge& existing = edges_[it->second];
    bool better = edge.log_delta > existing.log_delta ||
                  (edge.log_delta == existing.log_delta &&
                   compare_derivations(*edge.derivation, *existing.derivation) < 0);
    if (better) {
      // Same hypothesis triple, stronger derivation; the edge keeps its
      // identity and original layer.
      existing.log_delta = edge.log_delta;
      existing.derivation = std::move(edge.derivation);
    }
    return it->second;
  }
  EdgeId id = static_cast<EdgeId>(edges_.size());
  by_start_[edge.start].push_back(id);
  by_end_[edge.end].push_back(id);
  by_span_category_.emplace(key, id);
  edges_.push_back(std::move(edge));
  return id;
}

Lattice Lattice::restricted_to(const std::vector<bool>& keep) const {
  Lattice result(words_, layer_, symbols_);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    if (keep[id]) result.insert(edges_[id]);
  }
  return result;
}

void Lattice::drop_disconnected() {
  int T = word_count();
  std::vector<bool> reaches_from_start(T + 1, false);
  reaches_from_start[0] = true;
  for (int node = 0; node < T; ++node) {
    if (!reaches_from_start[node]) continue;
    for (EdgeId id : by_start_[node]) reaches_from_start[edges_[id].end] = true;
  }
  std::vector<bool> reaches_end(T + 1, false);
  reaches_end[T] = true;
  for (int node = T; node > 0; --node) {
    if (!reaches_end[node]) continue;
    for (EdgeId id : by_end_[node]) reaches_end[edges_[id].start] = true;
  }
  std::vector<bool> keep(edges_.size());
  bool all = true;
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    keep[id] = reaches_from_start[edges_[id].start] && reaches_end[edges_[id].end];
    all = all && keep[id];
  }
  if (!all) *this = restricted_to(keep);
}

std::string Lattice::dump() const {
  // Children are located by derivation identity; '-' marks a child whose
  // edge is no longer present (pruned below this one).
  std::ostringstream out;
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& edge = edges_[id];
    char delta[32];
    std::snprintf(delta, sizeof(delta), "%.4f", -edge.log_delta);
    out << id << '\t' << edge.start << '\t' << edge.end << '\t'
        << symbols_->name(edge.category) << '\t' << delta << '\t'
        << (edge_is_new(id) ? '*' : '.');
    if (!edge.derivation->is_leaf()) {
      out << '\t';
      int position = edge.start;
      bool first = true;
      for (const DerivationPtr& child : edge.derivation->children) {
        int width = 1;
        if (!child->is_leaf()) {
          width = 0;
          std::vector<const DerivationNode*> stack{child.get()};
          while (!stack.empty()) {
            const DerivationNode* node = stack.back();
            stack.pop_back();
            if (node->is_leaf()) {
              ++width;
            } else {
              for (const auto& c : node->children) stack.push_back(c.get());
            }
          }
        }
        if (!first) out << ' ';
        first = false;
        auto child_id = find(position, position + width, child->category);
        if (child_id && edges_[*child_id].derivation == child) {
          out << *child_id;
        } else {
          out << '-';
        }
        position += width;
      }
    }
    out << '\n';
  }
  return out.str();
}

Lattice pos_lattice(const std::vector<std::string>& words, const Scfg& scfg) {
  if (words.empty()) throw DataError("cannot build a lattice over an empty sentence");
  Lattice lattice(words, 0, scfg.symbols());
  for (int i = 0; i < lattice.word_count(); ++i) {
    const std::string& word = words[i];
    const auto& candidates = scfg.tags_for_word(word);
    if (!candidates.empty()) {
      for (const auto& [tag, log_prob] : candidates) {
        Edge edge;
        edge.start = i;
        edge.end = i + 1;
        edge.category = tag;
        edge.log_delta = log_prob;
        edge.derivation = make_leaf_derivation(tag, word, log_prob);
        edge.origin_layer = 0;
        lattice.insert(std::move(edge));
      }
      continue;
    }
    if (scfg.open_class_tags().empty()) {
      throw DataError("no candidate tag for word: " + word);
    }
    for (Category tag : scfg.open_class_tags()) {
      double log_prob = scfg.unknown_log_mass(tag);
      Edge edge;
      edge.start = i;
      edge.end = i + 1;
      edge.category = tag;
      edge.log_delta = log_prob;
      edge.derivation = make_leaf_derivation(tag, word, log_prob);
      edge.origin_layer = 0;
      lattice.insert(std::move(edge));
    }
  }
  return lattice;
}

namespace {

// Depth-first match of a rule's remaining right side along base edges.
void match_rule(const Lattice& base, const Scfg& scfg, RuleId rule_id,
                std::vector<EdgeId>* matched, std::size_t next_symbol,
                Lattice* result) {
  const PhraseRule& rule = scfg.rules()[rule_id];
  if (next_symbol == rule.rhs.size()) {
    std::vector<DerivationPtr> children;
    children.reserve(matched->size());
    double log_delta = rule.log_prob;
    for (EdgeId id : *matched) {
      children.push_back(base.edge(id).derivation);
      log_delta += base.edge(id).log_delta;
    }
    Edge edge;
    edge.start = base.edge(matched->front()).start;
    edge.end = base.edge(matched->back()).end;
    edge.category = rule.lhs;
    edge.log_delta = log_delta;
    edge.derivation = make_phrase_derivation(rule.lhs, rule_id, rule.log_prob,
                                             std::move(children));
    edge.origin_layer = result->layer();
    result->insert(std::move(edge));
    return;
  }
  int node = base.edge(matched->back()).end;
  for (EdgeId id : base.starting_at(node)) {
    if (base.edge(id).category != rule.rhs[next_symbol]) continue;
    matched->push_back(id);
    match_rule(base, scfg, rule_id, matched, next_symbol + 1, result);
    matched->pop_back();
  }
}

}  // namespace

Lattice expand_layer(const Lattice& base, const Scfg& scfg) {
  Lattice result = base;
  result.advance_layer();
  // Matching walks base edges only, so rules never consume hypotheses
  // introduced by this call and unary rules cannot chain.
  for (EdgeId id = 0; id < base.size(); ++id) {
    for (RuleId rule_id : scfg.rules_starting_with(base.edge(id).category)) {
      std::vector<EdgeId> matched{id};
      match_rule(base, scfg, rule_id, &matched, 1, &result);
    }
  }
  return result;
}

double yield_log_prob(const Edge& edge) {
  const DerivationNode& root = *edge.derivation;
  double total = root.local_log_prob;
  std::vector<const DerivationNode*> stack;
  for (const auto& child : root.children) stack.push_back(child.get());
  while (!stack.empty()) {
    const DerivationNode* node = stack.back();
    stack.pop_back();
    total += node->local_log_prob;
    for (const auto& child : node->children) stack.push_back(child.get());
  }
  return total;
}

}  // namespace cmm
