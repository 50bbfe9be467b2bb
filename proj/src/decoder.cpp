#include "cmm/decoder.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cmm/errors.h"

namespace cmm {

namespace {

// Slack for comparing independently accumulated log probabilities against
// the pruning threshold; keeps edges exactly at best/theta regardless of
// summation order.
constexpr double kThresholdSlack = 1e-9;

struct ContextEntry {
  Category prev = kBoundaryStart;  // category of the preceding edge
  double score = kImpossible;
  EdgeId back_edge = 0;
  Category back_prev = kBoundaryStart;
  bool has_back = false;
};

// Forward accumulators: for each edge, the best partial path from node 0
// ending with that edge, one entry per distinct preceding category.
using ForwardTable = std::vector<std::vector<ContextEntry>>;

ContextEntry* find_entry(std::vector<ContextEntry>& entries, Category prev) {
  for (ContextEntry& entry : entries) {
    if (entry.prev == prev) return &entry;
  }
  return nullptr;
}

ForwardTable forward_pass(const Lattice& lattice, const ContextModel& model) {
  ForwardTable table(lattice.size());
  int T = lattice.word_count();
  for (int node = 0; node < T; ++node) {
    for (EdgeId id : lattice.starting_at(node)) {
      const Edge& edge = lattice.edge(id);
      std::vector<ContextEntry>& entries = table[id];
      if (node == 0) {
        double transition =
            model.transition_log_prob(edge.category, kBoundaryStart, kBoundaryStart);
        double score = transition + edge.log_delta;
        if (is_possible(score)) {
          entries.push_back(ContextEntry{kBoundaryStart, score, 0, kBoundaryStart, false});
        }
        continue;
      }
      for (EdgeId pred_id : lattice.ending_at(node)) {
        const Edge& pred = lattice.edge(pred_id);
        for (const ContextEntry& pred_entry : table[pred_id]) {
          double transition =
              model.transition_log_prob(edge.category, pred_entry.prev, pred.category);
          double score = pred_entry.score + transition + edge.log_delta;
          if (!is_possible(score)) continue;
          ContextEntry* current = find_entry(entries, pred.category);
          if (current == nullptr) {
            entries.push_back(ContextEntry{pred.category, score, pred_id,
                                           pred_entry.prev, true});
            continue;
          }
          bool better = score > current->score;
          if (score == current->score) {
            // Equal probability: prefer the smaller predecessor edge, then
            // the smaller pre-predecessor category, mirroring path_precedes.
            if (pred_id != current->back_edge) {
              better = edge_precedes(pred, lattice.edge(current->back_edge));
            } else {
              better = pred_entry.prev < current->back_prev;
            }
          }
          if (better) {
            *current = ContextEntry{pred.category, score, pred_id, pred_entry.prev, true};
          }
        }
      }
    }
  }
  return table;
}

struct Termination {
  bool found = false;
  EdgeId edge = 0;
  Category prev = kBoundaryStart;
  double log_prob = kImpossible;
};

Termination terminate(const Lattice& lattice, const ContextModel& model,
                      const ForwardTable& table) {
  Termination best;
  int T = lattice.word_count();
  for (EdgeId id : lattice.ending_at(T)) {
    const Edge& edge = lattice.edge(id);
    for (const ContextEntry& entry : table[id]) {
      double transition =
          model.transition_log_prob(kBoundaryEnd, entry.prev, edge.category);
      double score = entry.score + transition;
      if (!is_possible(score)) continue;
      bool better = !best.found || score > best.log_prob;
      if (best.found && score == best.log_prob) {
        if (id != best.edge) {
          better = edge_precedes(edge, lattice.edge(best.edge));
        } else {
          better = entry.prev < best.prev;
        }
      }
      if (better) best = Termination{true, id, entry.prev, score};
    }
  }
  return best;
}

std::vector<EdgeId> backtrace(const ForwardTable& table,
                              const Termination& termination) {
  std::vector<EdgeId> path;
  EdgeId id = termination.edge;
  Category prev = termination.prev;
  for (;;) {
    path.push_back(id);
    const ContextEntry* entry = nullptr;
    for (const ContextEntry& candidate : table[id]) {
      if (candidate.prev == prev) {
        entry = &candidate;
        break;
      }
    }
    if (entry == nullptr || !entry->has_back) break;
    id = entry->back_edge;
    prev = entry->back_prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Backward accumulators: best continuation after an edge given the category
// preceding it, including the closing boundary transition.
using BackwardTable = std::vector<std::vector<std::pair<Category, double>>>;

double* find_score(std::vector<std::pair<Category, double>>& entries, Category prev) {
  for (auto& [category, score] : entries) {
    if (category == prev) return &score;
  }
  return nullptr;
}

BackwardTable backward_pass(const Lattice& lattice, const ContextModel& model,
                            const ForwardTable& forward) {
  BackwardTable table(lattice.size());
  int T = lattice.word_count();
  for (int node = T; node >= 1; --node) {
    for (EdgeId id : lattice.ending_at(node)) {
      const Edge& edge = lattice.edge(id);
      std::vector<std::pair<Category, double>>& entries = table[id];
      // The relevant preceding categories are those the forward pass saw.
      for (const ContextEntry& context : forward[id]) {
        double best = kImpossible;
        if (node == T) {
          best = model.transition_log_prob(kBoundaryEnd, context.prev, edge.category);
        } else {
          for (EdgeId next_id : lattice.starting_at(node)) {
            const Edge& next = lattice.edge(next_id);
            double* continuation = find_score(table[next_id], edge.category);
            if (continuation == nullptr) continue;
            double transition =
                model.transition_log_prob(next.category, context.prev, edge.category);
            double score = transition + next.log_delta + *continuation;
            if (score > best) best = score;
          }
        }
        if (is_possible(best)) entries.emplace_back(context.prev, best);
      }
    }
  }
  return table;
}

}  // namespace

PathResult best_path(const Lattice& lattice, const ContextModel& model) {
  if (lattice.size() == 0) throw DecodeError("lattice has no edges");
  ForwardTable table = forward_pass(lattice, model);
  Termination termination = terminate(lattice, model, table);
  if (!termination.found) {
    throw DecodeError("no complete path through the lattice");
  }
  PathResult result;
  result.edge_ids = backtrace(table, termination);
  result.edges.reserve(result.edge_ids.size());
  for (EdgeId id : result.edge_ids) result.edges.push_back(lattice.edge(id));
  result.log_prob = termination.log_prob;
  return result;
}

std::vector<double> edge_viterbi_scores(const Lattice& lattice,
                                        const ContextModel& model) {
  ForwardTable forward = forward_pass(lattice, model);
  BackwardTable backward = backward_pass(lattice, model, forward);
  std::vector<double> scores(lattice.size(), kImpossible);
  for (EdgeId id = 0; id < lattice.size(); ++id) {
    for (const ContextEntry& entry : forward[id]) {
      for (const auto& [prev, continuation] : backward[id]) {
        if (prev != entry.prev) continue;
        double score = entry.score + continuation;
        if (score > scores[id]) scores[id] = score;
      }
    }
  }
  return scores;
}

Lattice prune(const Lattice& lattice, const ContextModel& model, double theta) {
  if (!(theta >= 1.0)) throw ConfigError("theta must be >= 1");
  PathResult best = best_path(lattice, model);  // throws if undecodable
  std::vector<double> scores = edge_viterbi_scores(lattice, model);
  double threshold = best.log_prob - std::log(theta) - kThresholdSlack;
  std::vector<bool> keep(lattice.size(), false);
  for (EdgeId id = 0; id < lattice.size(); ++id) {
    keep[id] = is_possible(scores[id]) && scores[id] >= threshold;
  }
  for (EdgeId id : best.edge_ids) keep[id] = true;
  Lattice result = lattice.restricted_to(keep);
  result.drop_disconnected();
  return result;
}

std::string dump_accumulators(const Lattice& lattice, const ContextModel& model) {
  ForwardTable table = forward_pass(lattice, model);
  const SymbolTable& symbols = *lattice.symbols();
  std::ostringstream out;
  for (EdgeId id = 0; id < lattice.size(); ++id) {
    const Edge& edge = lattice.edge(id);
    for (const ContextEntry& entry : table[id]) {
      char score[32];
      std::snprintf(score, sizeof(score), "%.6f", entry.score);
      out << id << '\t' << edge.start << '\t' << edge.end << '\t'
          << symbols.name(edge.category) << '\t' << "after=" << symbols.name(entry.prev)
          << '\t' << score << '\t';
      if (entry.has_back) {
        out << "back=" << entry.back_edge << '/' << symbols.name(entry.back_prev);
      } else {
        out << "back=start";
      }
      out << '\n';
    }
  }
  return out.str();
}

bool path_precedes(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b,
                   const Lattice& lattice) {
  for (std::size_t i = 1;; ++i) {
    EdgeId edge_a = a[a.size() - i];
    EdgeId edge_b = b[b.size() - i];
    if (edge_a != edge_b) {
      return edge_precedes(lattice.edge(edge_a), lattice.edge(edge_b));
    }
    bool more_a = i < a.size();
    bool more_b = i < b.size();
    Category prev_a = more_a ? lattice.edge(a[a.size() - i - 1]).category : kBoundaryStart;
    Category prev_b = more_b ? lattice.edge(b[b.size() - i - 1]).category : kBoundaryStart;
    if (prev_a != prev_b) return prev_a < prev_b;
    if (!more_a && !more_b) return false;  // identical paths
  }
}

}  // namespace cmm
