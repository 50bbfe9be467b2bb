#pragma once

#include <string>
#include <vector>

#include "cmm/context_model.h"
#include "cmm/lattice.h"

namespace cmm {

struct PathResult {
  std::vector<EdgeId> edge_ids;  // into the decoded lattice
  std::vector<Edge> edges;       // copies, tiling [0, T)
  double log_prob = kImpossible;
};

// The most probable complete path: transition probabilities condition each
// edge on the categories of the two preceding edges, framed by boundary
// symbols, and every edge contributes its yield probability. Runs in time
// linear in the number of words for a bounded number of edges per node.
// Throws DecodeError when no complete path has positive probability.
PathResult best_path(const Lattice& lattice, const ContextModel& model);

// For every edge, the joint probability of the best complete path through
// it (kImpossible for edges on no scorable path). The maximum over all
// edges equals best_path().log_prob.
std::vector<double> edge_viterbi_scores(const Lattice& lattice, const ContextModel& model);

// Keeps the edges whose best containing path scores at least best/theta,
// i.e. the hypotheses worth passing to the next layer. The best path itself
// always survives.
Lattice prune(const Lattice& lattice, const ContextModel& model, double theta);

// Human-readable accumulator table, one row per (edge, preceding category).
std::string dump_accumulators(const Lattice& lattice, const ContextModel& model);

// Canonical order among complete paths of equal probability; shared with the
// enumeration oracle so both resolve ties identically. Walks the paths
// backwards, comparing edges and then the categories preceding them.
bool path_precedes(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b,
                   const Lattice& lattice);

}  // namespace cmm
