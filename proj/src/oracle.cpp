#include "cmm/oracle.h"

#include <algorithm>
#include <cmath>

#include "cmm/errors.h"

namespace cmm {

namespace {

void extend(const Lattice& lattice, const ContextModel& model, std::size_t limit,
            std::vector<EdgeId>* prefix, std::vector<EnumeratedPath>* paths) {
  int node = prefix->empty() ? 0 : lattice.edge(prefix->back()).end;
  if (node == lattice.word_count()) {
    if (paths->size() >= limit) {
      throw DataError("path enumeration exceeds limit");
    }
    // Direct product of the path's factors, boundary to boundary.
    Category prev2 = kBoundaryStart;
    Category prev1 = kBoundaryStart;
    double log_prob = 0.0;
    for (EdgeId id : *prefix) {
      const Edge& edge = lattice.edge(id);
      log_prob += model.transition_log_prob(edge.category, prev2, prev1);
      log_prob += edge.log_delta;
      prev2 = prev1;
      prev1 = edge.category;
    }
    log_prob += model.transition_log_prob(kBoundaryEnd, prev2, prev1);
    paths->push_back(EnumeratedPath{*prefix, log_prob});
    return;
  }
  for (EdgeId id : lattice.starting_at(node)) {
    prefix->push_back(id);
    extend(lattice, model, limit, prefix, paths);
    prefix->pop_back();
  }
}

}  // namespace

std::vector<EnumeratedPath> enumerate_paths(const Lattice& lattice,
                                            const ContextModel& model,
                                            std::size_t limit) {
  if (lattice.word_count() == 0) throw DataError("lattice covers no words");
  std::vector<EnumeratedPath> paths;
  std::vector<EdgeId> prefix;
  extend(lattice, model, limit, &prefix, &paths);
  return paths;
}

PathResult best_by_enumeration(const Lattice& lattice, const ContextModel& model,
                               std::size_t limit) {
  std::vector<EnumeratedPath> paths = enumerate_paths(lattice, model, limit);
  const EnumeratedPath* best = nullptr;
  for (const EnumeratedPath& path : paths) {
    if (!is_possible(path.log_prob)) continue;
    if (best == nullptr || path.log_prob > best->log_prob ||
        (path.log_prob == best->log_prob &&
         path_precedes(path.edge_ids, best->edge_ids, lattice))) {
      best = &path;
    }
  }
  if (best == nullptr) throw DecodeError("no complete path through the lattice");
  PathResult result;
  result.edge_ids = best->edge_ids;
  for (EdgeId id : best->edge_ids) result.edges.push_back(lattice.edge(id));
  result.log_prob = best->log_prob;
  return result;
}

std::vector<double> edge_scores_by_enumeration(const Lattice& lattice,
                                               const ContextModel& model,
                                               std::size_t limit) {
  std::vector<EnumeratedPath> paths = enumerate_paths(lattice, model, limit);
  std::vector<double> scores(lattice.size(), kImpossible);
  for (const EnumeratedPath& path : paths) {
    if (!is_possible(path.log_prob)) continue;
    for (EdgeId id : path.edge_ids) {
      if (path.log_prob > scores[id]) scores[id] = path.log_prob;
    }
  }
  return scores;
}

Lattice prune_by_enumeration(const Lattice& lattice, const ContextModel& model,
                             double theta, std::size_t limit) {
  if (!(theta >= 1.0)) throw ConfigError("theta must be >= 1");
  PathResult best = best_by_enumeration(lattice, model, limit);
  std::vector<double> scores = edge_scores_by_enumeration(lattice, model, limit);
  double threshold = best.log_prob - std::log(theta) - 1e-9;
  std::vector<bool> keep(lattice.size(), false);
  for (EdgeId id = 0; id < lattice.size(); ++id) {
    keep[id] = is_possible(scores[id]) && scores[id] >= threshold;
  }
  for (EdgeId id : best.edge_ids) keep[id] = true;
  Lattice result = lattice.restricted_to(keep);
  result.drop_disconnected();
  return result;
}

}  // namespace cmm
